import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freefix.constructions import (
    ConstructionError,
    DecompositionCertificate,
    MainconnexCase,
    collins_turner_check,
    extend_trivially,
    find_good_r,
    free_product_auto,
    imagey_solve,
    is_free_factorization,
    rank_accounting,
    search_certificate,
    stable_letter_extend,
    verify_cormain,
    verify_mainconnex,
)
from freefix.fixed_points import FixedSearchBudget, fixed_subgroup
from freefix.morphisms import Endomorphism, apply, embed, inner, random_automorphism
from freefix.stallings import basis_of, fold, rank_of
from freefix.words import Word

from conftest import w

AB = Endomorphism.parse(["a", "ab"])
CD = Endomorphism.parse(["ba", "bab"])
ABCD = Endomorphism.parse(["a", "ab", "dc", "dcd"])
EX1_5 = Endomorphism.parse(["a", "ab", "dc", "dcd", "BabCDcde"])
EX2 = Endomorphism.parse(["BAbaBab", "BAbabABab", "BAbaaabbc"])
H = "BabCDcd"
B10 = FixedSearchBudget(10)


def g_of(gens, rank):
    return fold([w(x, rank) for x in gens], rank)


def fix(f, budget=B10):
    return fixed_subgroup(f, budget)[0]


def test_extend_trivially_examples():
    f = extend_trivially(AB, 3)
    assert f == Endomorphism.parse(["a", "ab", "C"])
    assert fix(f) == g_of(["a", "Bab"], 3)
    assert fix(extend_trivially(Endomorphism.identity(1), 2)) == g_of(["a"], 2)
    with pytest.raises(ConstructionError):
        extend_trivially(AB, 2)
    with pytest.raises(ConstructionError):
        extend_trivially(AB, 3, ["a"])


def test_extend_with_custom_image_keeps_fix():
    f = extend_trivially(EX1_5, 6, ["bfb"])
    assert f == Endomorphism.parse(["a", "ab", "dc", "dcd", "BabCDcde", "bfb"])
    b = FixedSearchBudget(12, 64)
    assert fix(f, b) == fold([embed(x, 6) for x in basis_of(fix(EX1_5, b))], 6)


def test_free_product_examples():
    f = free_product_auto(AB, CD)
    assert f == ABCD
    assert fix(f) == g_of(["a", "Bab", "CDcd"], 4)
    assert free_product_auto(Endomorphism.identity(1), Endomorphism.identity(2)) == Endomorphism.identity(3)
    assert rank_of(fix(free_product_auto(Endomorphism.inversion(1), Endomorphism.inversion(2)))) == 0
    with pytest.raises(ConstructionError):
        free_product_auto(Endomorphism.parse(["aa"]), AB)


def test_stable_letter_examples():
    assert stable_letter_extend(ABCD, H, H, 0) == EX1_5
    assert stable_letter_extend(Endomorphism.identity(1), "a", "a", 1) == Endomorphism.parse(["a", "aab"])
    for r in range(-2, 3):
        f = stable_letter_extend(AB, "a", "a", r)
        assert apply(f, w("c", 3)) == w("a", 3) ** (r + 1) * w("c", 3)


def test_stable_letter_preconditions():
    with pytest.raises(ConstructionError):
        stable_letter_extend(AB, "aa", "a", 1)
    with pytest.raises(ConstructionError):
        stable_letter_extend(AB, "a", "", 1)
    with pytest.raises(ConstructionError):
        stable_letter_extend(AB, "b", "a", 1)


def test_good_r_on_identity():
    rows = find_good_r(Endomorphism.identity(1), "a", "a")
    assert [row.r for row in rows if not row.good] == [-1]
    assert [row.r for row in rows if row.degenerate] == [-1]


def test_good_r_rank_two():
    rows = find_good_r(AB, "a", "a", range(-4, 5))
    assert [row.r for row in rows if not row.good] == [-1, 0]
    for row in rows:
        if row.good:
            assert fold([w(x, 3) for x in row.fix_generators], 3) == g_of(["a", "Bab", "Cac"], 3)


def test_imagey_examples():
    hg = g_of(["a", "b", "c", "d"], 5)
    res = imagey_solve(EX1_5, hg, w("e", 5), w(H, 5))
    assert res.status == "solved" and res.h_prime == w(H, 5)
    for t in (2, 3):
        f = stable_letter_extend(ABCD, H, H, t - 1)
        assert imagey_solve(f, hg, w("e", 5), w(H, 5)).h_prime == w(H, 5) ** t
    res = imagey_solve(Endomorphism.identity(2), g_of(["a"], 2), w("b", 2), w("a", 2))
    assert res.status == "solved" and res.h_prime.is_identity()
    f = Endomorphism.parse(["a", "ab", "c"])
    res = imagey_solve(f, g_of(["a", "b"], 3), w("c", 3), w("b", 3), assume_fixed=True)
    assert res.status == "refuted"
    res = imagey_solve(f, g_of(["a", "b"], 3), w("c", 3), w("b", 3))
    assert res.status == "not-fixed"


def test_imagey_preconditions():
    with pytest.raises(ConstructionError):
        imagey_solve(AB, g_of(["a"], 2), w("ab", 2) * w("b", 2), w("a", 2))
    with pytest.raises(ConstructionError):
        imagey_solve(Endomorphism.parse(["b", "a"]), g_of(["a"], 2), w("b", 2), w("a", 2))


def test_mainconnex_cases():
    ex1 = Endomorphism.parse(["a", "ab", "dc", "dcd", "BabCDcde", "bfb"])
    b = FixedSearchBudget(12, 64)
    assert verify_mainconnex(ex1, MainconnexCase("i", ["a", "b", "c", "d", "e"], ["f"]), b).passed
    assert verify_mainconnex(ABCD, MainconnexCase("ii", ["a", "b"], ["c", "d"]), B10).passed
    assert verify_mainconnex(AB, MainconnexCase("iii", ["a"], None, "b", "a", "a"), B10).passed


def test_mainconnex_failures_are_itemized():
    rep = verify_mainconnex(ABCD, MainconnexCase("i", ["a", "b"], ["c", "d"]), B10)
    assert rep.status == "FAIL" and rep.failed_clauses() == ["Fix <= H"]
    rep = verify_mainconnex(AB, MainconnexCase("iii", ["a"], None, "b", "a", "aa"), B10)
    assert "y f = h' y" in rep.failed_clauses()
    rep = verify_mainconnex(inner(w("a", 2)), MainconnexCase("i", ["a"]), B10)
    assert rep.status == "VACUOUS"
    with pytest.raises(ValueError):
        MainconnexCase("iii", ["a"])


def test_cormain_base_case():
    cert = DecompositionCertificate(2, [["a", "b"]], [], [], ["a"], [], [])
    rep = verify_cormain(inner(w("a", 2)), cert, B10)
    assert rep.passed and rank_accounting(cert, 1)


def test_cormain_ex2_search():
    b = FixedSearchBudget(14)
    certs = list(search_certificate(EX2, b))
    assert certs
    for cert in certs:
        assert verify_cormain(EX2, cert, b).passed
        assert rank_accounting(cert, 2)
        assert any(apply(EX2, w(h, 3)) != w(h, 3) for h in cert.h_elements)


def test_certificate_json_round_trip():
    cert = DecompositionCertificate(6, [["a"], ["c", "d"]], ["b", "e"], ["f"], ["a", "CDcd"], ["a", H], ["a", H])
    assert DecompositionCertificate.from_json(cert.to_json()) == cert
    with pytest.raises(ValueError):
        DecompositionCertificate.from_json({**cert.to_json(), "r": 3})


def test_collins_turner_examples():
    assert collins_turner_check(Endomorphism.identity(2), ["a"], "b").passed
    assert collins_turner_check(AB, ["a"], "b", "a", 1).passed
    rep = collins_turner_check(AB, ["a"], "b")
    assert rep.status == "FAIL" and "y f = y" in rep.failed_clauses()
    assert collins_turner_check(ABCD, ["a", "b", "c"], "d").status == "INAPPLICABLE"


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1))
def test_constructions_satisfy_their_cases(seed):
    rng = random.Random(seed)
    f1 = random_automorphism(rng, 2, 3)
    f2 = random_automorphism(rng, 1 + rng.randint(0, 1), 2)
    b = FixedSearchBudget(8)
    ext = extend_trivially(f1, 3)
    rep = verify_mainconnex(ext, MainconnexCase("i", ["a", "b"]), b)
    assert rep.status in ("PASS", "VACUOUS")
    prod = free_product_auto(f1, f2)
    hs = ["a", "b"]
    ks = [chr(ord("a") + 2 + k) for k in range(f2.rank)]
    rep = verify_mainconnex(prod, MainconnexCase("ii", hs, ks), b)
    fk = fixed_subgroup(f2, b)[0]
    if rep.status != "VACUOUS" and rank_of(fk) == 1:
        assert rep.passed
    r = rng.choice([1, 2, 3])
    st_f = stable_letter_extend(Endomorphism.identity(2), "ab", "ab", r)
    # the case's h' is the whole prefix h' h^r of the image of y
    hp = str(w("ab", 2) ** (r + 1))
    rep = verify_mainconnex(st_f, MainconnexCase("iii", hs, None, "c", "ab", hp), b)
    assert rep.passed


def test_free_factorization_helper():
    assert is_free_factorization([g_of(["a"], 2), g_of(["Bab", "b"], 2)], 2) is False
    assert is_free_factorization([g_of(["a"], 2), g_of(["ab"], 2)], 2)

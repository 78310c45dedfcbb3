import random

import numpy as np
import pytest
from hypothesis import given, settings

from freefix import kernels
from freefix.fixed_points import (
    FixedSearchBudget,
    bh_report,
    brute_force_fixed,
    eigengroup_scan,
    enumerate_fixed,
    fixed_subgroup,
    isogredience_partition,
    reidemeister_image,
)
from freefix.morphisms import Endomorphism, MorphismError, apply, inner, power, random_automorphism, twist
from freefix.stallings import basis_of, fold, is_full_rose, is_subgroup, member, purity_check, rank_of
from freefix.words import Word, all_reduced_words, concat_letters, shortlex_key

from conftest import automorphisms, w

EX1 = Endomorphism.parse(["a", "ab", "dc", "dcd", "BabCDcde", "bfb"])
EX2 = Endomorphism.parse(["BAbaBab", "BAbabABab", "BAbaaabbc"])


def g_of(gens, rank):
    return fold([w(x, rank) for x in gens], rank)


def test_inversion_fixes_only_identity():
    words = enumerate_fixed(Endomorphism.inversion(3), FixedSearchBudget(8))
    assert [str(x) for x in words] == ["1"]
    g, v = fixed_subgroup(Endomorphism.inversion(3), FixedSearchBudget(8))
    assert rank_of(g) == 0


def test_inner_fixes_powers():
    words = enumerate_fixed(inner(w("a", 2)), FixedSearchBudget(6))
    assert [str(x) for x in words] == ["1", "a", "A", "aa", "AA", "aaa", "AAA", "aaaa", "AAAA",
                                       "aaaaa", "AAAAA", "aaaaaa", "AAAAAA"]


def test_ex2_fixed_words_lie_in_claimed_subgroup():
    claimed = g_of(["ABab", "Caabbc"], 3)
    words = enumerate_fixed(EX2, FixedSearchBudget(10))
    assert len(words) > 1
    assert all(member(claimed, x) for x in words)


def test_identity_gives_full_rose():
    g, v = fixed_subgroup(Endomorphism.identity(3), FixedSearchBudget(4))
    assert is_full_rose(g) and v.verdict == "bounded-complete"


def test_ex2_fixed_subgroup():
    g, v = fixed_subgroup(EX2, FixedSearchBudget(14))
    assert g == g_of(["ABab", "Caabbc"], 3)
    assert v.verdict == "bounded-complete"


def test_budget_is_echoed():
    g, v = fixed_subgroup(EX2, FixedSearchBudget(10, 30))
    assert v.details["budget"] == {"max_len": 10, "displacement_cap": 30, "eigenvalue_len": 2}
    assert v.details["cap"] == 30


def test_small_cap_warns():
    with pytest.warns(UserWarning):
        fixed_subgroup(EX2, FixedSearchBudget(4, 3))


def test_eigengroups_of_identity():
    recs = eigengroup_scan(Endomorphism.identity(2), FixedSearchBudget(6, eigenvalue_len=2))
    assert is_full_rose(recs[0].fixed_graph) and recs[0].eigenvalue.is_identity()
    by_y = {str(r.eigenvalue): r for r in recs}
    assert by_y["a"].fixed_graph == g_of(["a"], 2)


def test_eigengroups_of_ex2():
    recs = eigengroup_scan(EX2, FixedSearchBudget(10, eigenvalue_len=1))
    top = recs[0]
    assert top.eigenvalue.is_identity() and top.rank == 2
    assert top.fixed_graph == g_of(["ABab", "Caabbc"], 3)
    # twisting by g = [a,b] fixes neither a nor b: a direct application check
    t = twist(EX2, w("ABab", 3))
    assert apply(t, w("a", 3)) != w("a", 3) and apply(t, w("b", 3)) != w("b", 3)
    # twisting by g^-1 fixes a and b
    t = twist(EX2, w("BAba", 3))
    assert apply(t, w("a", 3)) == w("a", 3) and apply(t, w("b", 3)) == w("b", 3)


def test_eigengroup_scan_requires_automorphism():
    with pytest.raises(MorphismError):
        eigengroup_scan(Endomorphism.parse(["a", "a"]), FixedSearchBudget(4))


def test_isogredience_merges_twisted_eigenvalues():
    f = Endomorphism.parse(["a", "ab", "c"])
    recs = eigengroup_scan(f, FixedSearchBudget(8, eigenvalue_len=2))
    part = isogredience_partition(recs, f)
    for cls in part.classes:
        for rec, c in cls.members:
            assert reidemeister_image(f, cls.representative.eigenvalue, c) == rec.eigenvalue
    # y and (c f)^-1 y c land in the same class
    y = w("", 3)
    for c in ("a", "b", "cA"):
        y2 = reidemeister_image(f, y, w(c, 3))
        g2, _ = fixed_subgroup(twist(f, y2), FixedSearchBudget(8))
        assert rank_of(g2) == rank_of(fixed_subgroup(f, FixedSearchBudget(8))[0])


def test_isogredience_separates_non_conjugate():
    f = Endomorphism.parse(["a", "ab", "dc", "dcd"])
    recs = eigengroup_scan(f, FixedSearchBudget(8, eigenvalue_len=1))
    part = isogredience_partition(recs, f)
    ranks = [c.representative.rank for c in part.classes]
    assert ranks == [3]


def test_ex1_identity_class_alone():
    budget = FixedSearchBudget(10, displacement_cap=24, eigenvalue_len=2)
    recs = eigengroup_scan(EX1, budget)
    part = isogredience_partition(recs, EX1)
    assert len(part.classes) == 1
    rep = part.classes[0].representative
    assert rep.eigenvalue.is_identity() and rep.rank == 4


def test_bh_examples():
    assert bh_report(Endomorphism.identity(2), FixedSearchBudget(6, eigenvalue_len=2)).class_ranks == [2]
    rng = random.Random(2)
    for _ in range(10):
        rep = bh_report(random_automorphism(rng, 2), FixedSearchBudget(6, eigenvalue_len=2))
        assert rep.ok and len(rep.class_ranks) <= 1 and all(r <= 2 for r in rep.class_ranks)


@pytest.mark.parametrize("images", [["a", "ab"], ["BAbaBab", "BAbabABab", "BAbaaabbc"],
                                    ["a", "ab", "dc", "dcd"]])
def test_monotone_under_powers(images):
    f = Endomorphism.parse(images)
    g, _ = fixed_subgroup(f, FixedSearchBudget(8))
    for r in (2, 3):
        gr, _ = fixed_subgroup(power(f, r), FixedSearchBudget(8))
        assert is_subgroup(g, gr)


@pytest.mark.parametrize("images", [["a", "ab"], ["BAbaBab", "BAbabABab", "BAbaaabbc"],
                                    ["a", "ab", "dc", "dcd"], ["a", "ab", "dc", "dcd", "BabCDcde", "bfb"]])
def test_corpus_fix_is_pure(images):
    f = Endomorphism.parse(images)
    g, _ = fixed_subgroup(f, FixedSearchBudget(8))
    assert purity_check(g, 6).verdict == "pure-up-to-bound"


@settings(max_examples=25)
@given(automorphisms(ranks=(2,)))
def test_matches_brute_force(f):
    fast = enumerate_fixed(f, FixedSearchBudget(7))
    slow = brute_force_fixed(f, 7)
    assert fast == slow


@settings(max_examples=25)
@given(automorphisms(ranks=(2, 3)))
def test_soundness_and_closure(f):
    L = 8
    found = enumerate_fixed(f, FixedSearchBudget(L))
    assert all(apply(f, x) == x for x in found)
    assert [x.letters for x in found] == sorted((x.letters for x in found), key=shortlex_key)
    have = {x.letters for x in found}
    for u in found[:15]:
        for v in found[:15]:
            p = concat_letters(u.letters, v.letters)
            if len(p) <= L:
                assert p in have


@settings(max_examples=25)
@given(automorphisms(ranks=(2, 3, 4)))
def test_rank_bound(f):
    g, _ = fixed_subgroup(f, FixedSearchBudget(8))
    assert rank_of(g) <= f.rank


@settings(max_examples=20)
@given(automorphisms(ranks=(2, 3)))
def test_backends_agree(f):
    if kernels.compiled_backend is None:
        pytest.skip("compiled kernel not built")
    pre = []
    for k in range(f.rank):
        pre += [f.inv_images[k], f.images[k]]
    a = kernels.python_backend.displacement_tree(pre, f.rank, 4, 40)
    b = kernels.compiled_backend.displacement_tree(pre, f.rank, 4, 40)
    for x, y in zip(a[:4], b[:4]):
        assert np.array_equal(x, y)
    assert a[4:] == b[4:]


def test_backend_selection():
    assert kernels.python_backend.BACKEND == "python"
    assert kernels.BACKEND in ("python", "cython")

"""Acceptance criteria, one test and one printed PASS/FAIL line each."""

import functools
import random
import time


from freefix.constructions import (
    DecompositionCertificate,
    find_good_r,
    parametric_family_refutation,
    scan_fixing_endomorphisms,
    verify_cormain,
)
from freefix.factor_systems import FreeFactorSystem, complexity_of, cx_compare, system_leq, wedge
from freefix.fixed_points import FixedSearchBudget, bh_report, brute_force_fixed, enumerate_fixed, fixed_subgroup
from freefix.morphisms import Endomorphism, ab_matrix, ab_solve, apply, random_automorphism
from freefix.stallings import fold, inertia_sample, purity_check, rank_of
from freefix.words import Word

LINES: dict[int, str] = {}

EX1 = Endomorphism.parse(["a", "ab", "dc", "dcd", "BabCDcde", "bfb"])
EX2 = Endomorphism.parse(["BAbaBab", "BAbabABab", "BAbaaabbc"])
H = "BabCDcd"


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    LINES[n] = line
    print(line)
    assert ok, line


def g_of(gens, rank):
    return fold([Word.parse(x, rank) for x in gens], rank)


def test_criterion_01_ex1_fixed_subgroup():
    t = time.perf_counter()
    g, v = fixed_subgroup(EX1, FixedSearchBudget(12, 64))
    dt = time.perf_counter() - t
    expected = g_of(["a", "Bab", "CDcd", "EBabCDcde"], 6)
    ok = g == expected and rank_of(g) == 4 and dt < 60
    record(1, ok, f"Fix equals fold(a, Bab, CDcd, EBabCDcde), rank {rank_of(g)}, {v.verdict}, {dt:.1f}s")


def test_criterion_02_abelianized_b_not_in_image():
    f5 = Endomorphism.parse(["a", "ab", "dc", "dcd", "BabCDcde"])
    m = ab_matrix(f5)
    shifted = [[m[i][j] - (i == j) for j in range(5)] for i in range(5)]
    sol = ab_solve(shifted, [0, 1, 0, 0, 0])
    record(2, sol is None, f"x (M - I) = e_b has solution {sol}")


def test_criterion_03_ex2_fixed_subgroup():
    t = time.perf_counter()
    g, v = fixed_subgroup(EX2, FixedSearchBudget(14))
    dt = time.perf_counter() - t
    ok = g == g_of(["ABab", "Caabbc"], 3) and rank_of(g) == 2 and dt < 120
    record(3, ok, f"Fix equals fold(ABab, Caabbc), rank {rank_of(g)}, {v.verdict}, {dt:.1f}s")


def test_criterion_04_ex3_refutation():
    t = time.perf_counter()
    scan = scan_fixing_endomorphisms(["a", "Bab", "Cbc"], 3, 4)
    fam = parametric_family_refutation([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5])
    dt = time.perf_counter() - t
    fam_ok = all(res.status == "refuted" for _, res in fam)
    ok = scan.refuted and fam_ok and dt < 600
    record(4, ok, f"{scan.candidates} candidates, {len(scan.automorphisms)} automorphisms fix H and all fix "
                  f"a word outside H; family r != 0 refuted: {fam_ok}; {dt:.1f}s")


@functools.lru_cache(maxsize=None)
def _bh_sample():
    rng = random.Random(20240)
    budget = FixedSearchBudget(6, eigenvalue_len=3)
    out = []
    for _ in range(200):
        n = rng.choice([2, 3, 4])
        f = random_automorphism(rng, n, 6)
        out.append((f, bh_report(f, budget), fixed_subgroup(f, budget)[0]))
    return out


def test_criterion_05_bestvina_handel_bounds():
    sample = _bh_sample()
    bad = [(str(f), rep.violations) for f, rep, g in sample if not rep.ok or rank_of(g) > f.rank]
    record(5, not bad, f"{len(sample)} automorphisms of ranks 2-4, eigenvalues up to length 3, "
                       f"{len(bad)} violations")


def test_criterion_06_purity():
    sample = _bh_sample()
    impure = [str(f) for f, _, g in sample if purity_check(g, 6).verdict == "impure"]
    record(6, not impure, f"{len(sample)} fixed subgroups checked at root length 6, {len(impure)} impure")


def test_criterion_07_inertia():
    corpus = [EX1, EX2, Endomorphism.parse(["a", "ab", "dc", "dcd"]), Endomorphism.parse(["a", "ab"]),
              Endomorphism.parse(["ba", "bab"]), Endomorphism.parse(["a", "ab", "dc", "dcd", "BabCDcde"]),
              Endomorphism.inversion(3)]
    budget = FixedSearchBudget(12, 64)
    violations = 0
    for i, f in enumerate(corpus):
        g, _ = fixed_subgroup(f, budget)
        violations += len(inertia_sample(g, 200, 6, seed=i).violations)
    record(7, violations == 0, f"{len(corpus)} corpus fixed subgroups x 200 random K, {violations} violations")


def test_criterion_08_good_r():
    rows = find_good_r(Endomorphism.identity(1), "a", "a", range(-5, 6))
    bad = [row.r for row in rows if not row.good]
    abcd = Endomorphism.parse(["a", "ab", "dc", "dcd"])
    sub = find_good_r(abcd, H, H, range(0, 5), FixedSearchBudget(12))
    good_t = [row.r + 1 for row in sub if row.good]
    ok = bad == [-1] and good_t == [1, 2, 3, 4, 5]
    record(8, ok, f"identity on <a>: bad r = {bad}; sub-extension good for t = {good_t}")


MUTATIONS = {
    "w1 = aa": dict(w_elements=["aa", "CDcd"]),
    "w2 = cd": dict(w_elements=["a", "cd"]),
    "K1 = <b>": dict(k_factors=[["b"], ["c", "d"]]),
    "K2 = <c>": dict(k_factors=[["a"], ["c"]]),
    "y1 = bb": dict(y_letters=["bb", "e"]),
    "y2 = f": dict(y_letters=["b", "f"]),
    "L = <ff>": dict(l_generators=["ff"]),
    "h'0 = aa": dict(h_prime_elements=["aa", H]),
    "h'1 = h^2": dict(h_prime_elements=["a", H + H]),
    "h0 = b": dict(h_elements=["b", H]),
    "h1 = Bab": dict(h_elements=["a", "Bab"]),
    "y1, y2 swapped": dict(y_letters=["e", "b"]),
}


def test_criterion_09_certificate_and_mutations():
    cert = DecompositionCertificate(6, [["a"], ["c", "d"]], ["b", "e"], ["f"], ["a", "CDcd"], ["a", H], ["a", H])
    budget = FixedSearchBudget(12, 64)
    base = verify_cormain(EX1, cert, budget)
    survivors = [name for name, m in MUTATIONS.items() if verify_cormain(EX1, cert.replace(**m), budget).passed]
    ok = base.passed and not survivors and len(MUTATIONS) == 12
    record(9, ok, f"certificate {base.status}; {len(MUTATIONS) - len(survivors)}/12 mutations FAIL")


def test_criterion_10_free_factor_systems():
    chain_ok = True
    for n in range(3, 7):
        letters = "abcdef"[:n]
        mid = FreeFactorSystem.from_generators(n, [["a", "b"]] + [[x] for x in letters[2:]])
        cs = [complexity_of(FreeFactorSystem.empty(n)), complexity_of(mid), complexity_of(FreeFactorSystem.whole(n))]
        chain_ok &= cs == [(), (2,) + (1,) * (n - 2), (n,)]
        chain_ok &= cx_compare(cs[0], cs[1]) < 0 < cx_compare(cs[2], cs[1])
    w = wedge(FreeFactorSystem.from_generators(3, [["a", "b"]]), FreeFactorSystem.from_generators(3, [["b", "c"]]))
    wedge_ok = w == FreeFactorSystem.from_generators(3, [["b"]])
    rng = random.Random(10)
    below = 0
    for _ in range(50):
        n = rng.choice([2, 3, 4])
        f = random_automorphism(rng, n, 3)
        s1 = FreeFactorSystem.from_generators(n, [["abcd"[k] for k in range(rng.randint(1, n))]])
        blocks = rng.sample(range(n), rng.randint(1, n))
        s2 = FreeFactorSystem.from_generators(n, [[str(apply(f, Word((k + 1,), n))) for k in blocks]])
        wd = wedge(s1, s2)
        below += system_leq(wd, s1) and system_leq(wd, s2)
    ok = chain_ok and wedge_ok and below == 50
    record(10, ok, f"cx chains n = 3..6: {chain_ok}; wedge(<a,b>, <b,c>) = {w}; wedge below both: {below}/50")


def test_criterion_11_oracle_equivalence():
    rng = random.Random(11)
    t = time.perf_counter()
    mismatches = 0
    for _ in range(50):
        f = random_automorphism(rng, 2, 6)
        if enumerate_fixed(f, FixedSearchBudget(8)) != brute_force_fixed(f, 8):
            mismatches += 1
    dt = time.perf_counter() - t
    record(11, mismatches == 0 and dt < 300, f"50 rank-2 automorphisms at length 8, {mismatches} mismatches, "
                                             f"{dt:.1f}s")

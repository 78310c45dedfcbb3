"""Building automorphisms with prescribed fixed subgroups, and checking decompositions.

Three constructions grow an automorphism from smaller ones: extending by
new generators sent to their inverses, free products of automorphisms,
and adding a stable letter ``y -> h' h^r y``.  The verifiers check the
corresponding decompositions of a fixed subgroup clause by clause; every
equation is checked exactly and only the computed fixed subgroup depends
on the search budget.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Sequence

from . import stallings
from .fixed_points import FixedSearchBudget, fixed_subgroup
from .morphisms import (
    Endomorphism,
    MorphismError,
    apply,
    embed,
    is_automorphism,
    is_primitive_abelianized,
)
from .stallings import SubgroupGraph, basis_of, fold, member, rank_of
from .words import Word, WordError, conjugator, is_proper_power


class ConstructionError(ValueError):
    pass


def _word(w, rank: int) -> Word:
    if isinstance(w, Word):
        if w.rank != rank:
            raise WordError(f"{w} has rank {w.rank}, expected {rank}")
        return w
    return Word.parse(w, rank)


def _words(ws, rank: int) -> list[Word]:
    return [_word(w, rank) for w in ws]


def is_invariant(f: Endomorphism, h: SubgroupGraph) -> bool:
    """``H f == H``."""
    return fold([apply(f, b) for b in basis_of(h)], f.rank) == h


def is_free_factorization(parts: Sequence[SubgroupGraph], rank: int) -> bool:
    """F is the free product of the given subgroups.

    The join must be all of F and the ranks must add up to ``rank``;
    Hopficity makes the natural map from the free product an isomorphism.
    """
    gens = [b for g in parts for b in basis_of(g)]
    return stallings.is_full_rose(fold(gens, rank)) and sum(rank_of(g) for g in parts) == rank


# --- the three constructions ---------------------------------------------------------


def extend_trivially(phi_h: Endomorphism, n: int, extra_images: Sequence | None = None) -> Endomorphism:
    """Extend an automorphism of ``<a_1..a_m>`` to rank ``n``; new generators go to their inverses by default."""
    m = phi_h.rank
    if not m < n:
        raise ConstructionError(f"need m < n, got m={m}, n={n}")
    images = [embed(phi_h.image(k), n).letters for k in range(1, m + 1)]
    if extra_images is None:
        images += [(-k,) for k in range(m + 1, n + 1)]
    else:
        if len(extra_images) != n - m:
            raise ConstructionError(f"need {n - m} extra images")
        images += [_word(w, n).letters for w in extra_images]
    f = Endomorphism(n, images)
    if not is_automorphism(f):
        raise ConstructionError(f"extension {f} is not an automorphism")
    return f


def free_product_auto(phi1: Endomorphism, phi2: Endomorphism) -> Endomorphism:
    """Block automorphism acting as ``phi1`` on the first generators and ``phi2`` on the rest."""
    for p in (phi1, phi2):
        if not is_automorphism(p):
            raise ConstructionError(f"{p} is not an automorphism")
    n = phi1.rank + phi2.rank
    images = [embed(phi1.image(k), n).letters for k in range(1, phi1.rank + 1)]
    images += [embed(phi2.image(k), n, phi1.rank).letters for k in range(1, phi2.rank + 1)]
    return Endomorphism(n, images)


def check_stable_letter_data(phi_h: Endomorphism, h: Word, h_prime: Word) -> None:
    if h.is_identity():
        raise ConstructionError("h must be non-trivial")
    if is_proper_power(h):
        raise ConstructionError(f"h = {h} is a proper power")
    if h_prime.is_identity():
        raise ConstructionError("h' must be non-trivial")
    if not is_automorphism(phi_h):
        raise ConstructionError(f"{phi_h} is not an automorphism")
    if apply(phi_h, h) != h_prime * h * ~h_prime:
        raise ConstructionError(f"h f = {apply(phi_h, h)} differs from h' h h'^-1 = {h_prime * h * ~h_prime}")


def stable_letter_extend(phi_h: Endomorphism, h: Word | str, h_prime: Word | str, r: int) -> Endomorphism:
    """Add a generator ``y`` (the last one) with ``y -> h' h^r y``."""
    m = phi_h.rank
    h, h_prime = _word(h, m), _word(h_prime, m)
    check_stable_letter_data(phi_h, h, h_prime)
    n = m + 1
    images = [embed(phi_h.image(k), n).letters for k in range(1, m + 1)]
    images.append(embed(h_prime * h ** r, n).letters + (n,))
    return Endomorphism(n, images)


@dataclass
class GoodR:
    r: int
    good: bool
    verdict: str
    degenerate: bool
    fix_generators: list

    def to_json(self) -> dict:
        return {"r": self.r, "good": self.good, "verdict": self.verdict, "degenerate": self.degenerate,
                "fix": self.fix_generators}


def find_good_r(phi_h: Endomorphism, h: Word | str, h_prime: Word | str, r_range=range(-5, 6),
                budget: FixedSearchBudget | None = None) -> list[GoodR]:
    """For each ``r``, does the stable-letter extension have ``Fix = Fix(phi_h) * <y^-1 h y>``?

    ``r`` is good when the computed fixed subgroup equals that target and
    the search verdict is bounded-complete.  ``degenerate`` flags
    ``h' h^r == 1``.
    """
    budget = budget or FixedSearchBudget(10)
    m = phi_h.rank
    h, h_prime = _word(h, m), _word(h_prime, m)
    check_stable_letter_data(phi_h, h, h_prime)
    n = m + 1
    base, _ = fixed_subgroup(phi_h, budget)
    y = Word((n,), n)
    target = fold([embed(b, n) for b in basis_of(base)] + [embed(h, n).conj(y)], n)
    out = []
    for r in r_range:
        f = stable_letter_extend(phi_h, h, h_prime, r)
        g, verdict = fixed_subgroup(f, budget)
        good = g == target and verdict.verdict == "bounded-complete"
        out.append(GoodR(r, good, verdict.verdict, (h_prime * h ** r).is_identity(),
                         [str(b) for b in basis_of(g)]))
    return out


# --- eigen-equation for a stable letter -------------------------------------------------


@dataclass
class ImageyResult:
    status: str  # solved | not-fixed | refuted
    h_prime: Word | None = None
    reason: str = ""
    witness: object = None

    def to_json(self) -> dict:
        return {"status": self.status, "h_prime": None if self.h_prime is None else str(self.h_prime),
                "reason": self.reason, "witness": None if self.witness is None else str(self.witness)}


def imagey_solve(f: Endomorphism, h_graph: SubgroupGraph, y: Word, h: Word,
                 assume_fixed: bool = False) -> ImageyResult:
    """Solve ``y f = h' y`` with ``h f = h' h h'^-1`` for ``F = H * <y>`` and ``y^-1 h y`` fixed.

    With ``assume_fixed`` the fixedness of ``y^-1 h y`` is a hypothesis and
    the image of ``y`` is ignored: the result is ``refuted`` when no
    ``h' ∈ H`` satisfies ``h f = h' h h'^-1``, which contradicts the
    hypothesis.
    """
    n = f.rank
    if y.is_identity():
        raise ConstructionError("y must be non-trivial")
    if not is_free_factorization([h_graph, fold([y], n)], n):
        raise ConstructionError("F is not H * <y>")
    if not is_invariant(f, h_graph):
        raise ConstructionError("H is not f-invariant")
    if h.is_identity() or not member(h_graph, h):
        raise ConstructionError(f"h = {h} must be a non-trivial element of H")
    hf = apply(f, h)
    if assume_fixed:
        c = conjugator(h, hf)
        if c is None:
            return ImageyResult("refuted", None, f"h f = {hf} is not conjugate to h = {h}", hf)
        # every solution is c^-1 times a power of the root of h, all in H iff c is
        hp = ~c
        if not member(h_graph, hp):
            return ImageyResult("refuted", None, f"conjugators from h to h f = {hf} leave H", hp)
        if hf != hp * h * ~hp:
            raise AssertionError("conjugator check failed")
        return ImageyResult("solved", hp, "hypothesis consistent")
    yhy = h.conj(y)
    if apply(f, yhy) != yhy:
        return ImageyResult("not-fixed", None, f"y^-1 h y = {yhy} is not fixed", yhy)
    hp = apply(f, y) * ~y
    if not member(h_graph, hp):
        raise AssertionError(f"h' = {hp} is not in H")
    if hf != hp * h * ~hp:
        raise AssertionError("h f differs from h' h h'^-1")
    return ImageyResult("solved", hp, "")


# --- reports -----------------------------------------------------------------------------


@dataclass
class Report:
    """Per-clause outcome of a verifier; ``status`` is PASS, FAIL or a reason the check is moot."""

    name: str
    clauses: list = field(default_factory=list)
    status: str = ""
    budget: dict = field(default_factory=dict)
    fix: list = field(default_factory=list)
    verdict: str = ""

    def check(self, clause: str, ok: bool, detail: str = "") -> bool:
        self.clauses.append((clause, bool(ok), detail))
        return ok

    def finish(self) -> "Report":
        if not self.status:
            self.status = "PASS" if all(ok for _, ok, _ in self.clauses) else "FAIL"
        return self

    @property
    def passed(self) -> bool:
        return self.status == "PASS"

    def failed_clauses(self) -> list[str]:
        return [c for c, ok, _ in self.clauses if not ok]

    def to_json(self) -> dict:
        return {"check": self.name, "status": self.status, "budget": self.budget,
                "fix": self.fix, "fix_verdict": self.verdict,
                "clauses": [{"clause": c, "ok": ok, "detail": d} for c, ok, d in self.clauses]}

    def render(self) -> str:
        lines = [f"{self.name}: {self.status}"]
        for c, ok, d in self.clauses:
            lines.append(f"  [{'ok' if ok else 'FAIL'}] {c}" + (f"  ({d})" if d else ""))
        lines.append(f"  computed Fix = <{', '.join(self.fix)}> ({self.verdict}); budget {self.budget}")
        return "\n".join(lines)


def _start(name: str, f: Endomorphism, budget: FixedSearchBudget):
    rep = Report(name, budget=budget.to_json())
    fix, verdict = fixed_subgroup(f, budget)
    rep.fix = [str(b) for b in basis_of(fix)]
    rep.verdict = verdict.verdict
    return rep, fix


def _fix_of_part(fix: SubgroupGraph, part: SubgroupGraph) -> SubgroupGraph:
    return stallings.intersection(fix, part)


# --- local decomposition ------------------------------------------------------


@dataclass
class MainconnexCase:
    case: str
    h_generators: list
    k_generators: list | None = None
    y: str | None = None
    h: str | None = None
    h_prime: str | None = None

    def __post_init__(self):
        if self.case not in ("i", "ii", "iii"):
            raise ValueError(f"case must be i, ii or iii, not {self.case!r}")
        if self.case == "iii":
            missing = [k for k in ("y", "h", "h_prime") if getattr(self, k) is None]
            if missing:
                raise ValueError(f"case iii needs {', '.join(missing)}")
        if self.case == "ii" and self.k_generators is None:
            raise ValueError("case ii needs K generators")

    @classmethod
    def from_json(cls, data: dict) -> "MainconnexCase":
        return cls(str(data["case"]), list(data["H"]), data.get("K"), data.get("y"), data.get("h"),
                   data.get("h_prime"))

    def to_json(self) -> dict:
        out = {"case": self.case, "H": self.h_generators}
        for k, v in (("K", self.k_generators), ("y", self.y), ("h", self.h), ("h_prime", self.h_prime)):
            if v is not None:
                out[k] = v
        return out


def _complement(h: SubgroupGraph) -> list[Word] | None:
    """Remaining generators when H is spanned by a subset of the basis."""
    if not stallings.is_sub_rose(h):
        return None
    used = set(h.out[0])
    return [Word((k,), h.rank_ambient) for k in range(1, h.rank_ambient + 1) if k not in used]


def verify_mainconnex(f: Endomorphism, case: MainconnexCase, budget: FixedSearchBudget) -> Report:
    n = f.rank
    rep, fix = _start(f"mainconnex case {case.case}", f, budget)
    if not is_automorphism(f):
        raise MorphismError(f"{f} is not an automorphism")
    if rank_of(fix) <= 1:
        rep.status = "VACUOUS"
        rep.check("Fix is cyclic, the decomposition is vacuous", True)
        return rep
    hg = fold(_words(case.h_generators, n), n)
    if case.case == "iii":
        y = _word(case.y, n)
        kg = fold([y], n)
    elif case.k_generators is not None:
        kg = fold(_words(case.k_generators, n), n)
    else:
        comp = _complement(hg)
        if comp is None:
            raise ValueError("K must be given when H is not spanned by basis letters")
        kg = fold(comp, n)
    rep.check("F = H * K, non-trivial", rank_of(hg) > 0 and rank_of(kg) > 0 and is_free_factorization([hg, kg], n))
    rep.check("H invariant", is_invariant(f, hg))
    if case.case == "i":
        rep.check("Fix <= H", stallings.is_subgroup(fix, hg))
    elif case.case == "ii":
        rep.check("K invariant", is_invariant(f, kg))
        fh, fk = _fix_of_part(fix, hg), _fix_of_part(fix, kg)
        rep.check("r(K ∩ Fix) = 1", rank_of(fk) == 1, f"rank {rank_of(fk)}")
        joined = fold(basis_of(fh) + basis_of(fk), n)
        rep.check("Fix = (H ∩ Fix) * (K ∩ Fix)", joined == fix)
    else:
        y = _word(case.y, n)
        h, hp = _word(case.h, n), _word(case.h_prime, n)
        rep.check("h, h' non-trivial in H", not h.is_identity() and not hp.is_identity()
                  and member(hg, h) and member(hg, hp))
        rep.check("h not a proper power", not h.is_identity() and not is_proper_power(h))
        rep.check("y f = h' y", apply(f, y) == hp * y, f"y f = {apply(f, y)}")
        rep.check("h f = h' h h'^-1", apply(f, h) == hp * h * ~hp)
        fh = _fix_of_part(fix, hg)
        joined = fold(basis_of(fh) + [h.conj(y)], n)
        rep.check("Fix = (H ∩ Fix) * <y^-1 h y>", joined == fix and rank_of(fix) == rank_of(fh) + 1)
    return rep.finish()


# --- global decomposition certificates -----------------------------------------------------------


@dataclass
class DecompositionCertificate:
    rank: int
    k_factors: list  # r lists of generator words
    y_letters: list  # s words
    l_generators: list
    w_elements: list  # r words
    h_elements: list  # s words: h_0 .. h_{s-1}
    h_prime_elements: list  # s words

    @property
    def r(self) -> int:
        return len(self.k_factors)

    @property
    def s(self) -> int:
        return len(self.y_letters)

    @classmethod
    def from_json(cls, data: dict) -> "DecompositionCertificate":
        cert = cls(int(data["rank"]), [list(k) for k in data["K"]], list(data["y"]), list(data.get("L", [])),
                   list(data["w"]), list(data["h"]), list(data["h_prime"]))
        if "r" in data and int(data["r"]) != cert.r:
            raise ValueError(f"r = {data['r']} but {cert.r} factors given")
        if "s" in data and int(data["s"]) != cert.s:
            raise ValueError(f"s = {data['s']} but {cert.s} letters given")
        return cert

    def to_json(self) -> dict:
        return {"rank": self.rank, "r": self.r, "s": self.s, "K": self.k_factors, "y": self.y_letters,
                "L": self.l_generators, "w": self.w_elements, "h": self.h_elements,
                "h_prime": self.h_prime_elements}

    def replace(self, **changes) -> "DecompositionCertificate":
        data = {k: (list(v) if isinstance(v, list) else v) for k, v in self.__dict__.items()}
        data.update(changes)
        return DecompositionCertificate(**data)


def load_certificate(path) -> DecompositionCertificate:
    with open(path) as fh:
        return DecompositionCertificate.from_json(json.load(fh))


def verify_cormain(f: Endomorphism, cert: DecompositionCertificate, budget: FixedSearchBudget) -> Report:
    n = f.rank
    if cert.rank != n:
        raise WordError("certificate rank differs from the automorphism's")
    rep, fix = _start("cormain certificate", f, budget)
    if not is_automorphism(f):
        raise MorphismError(f"{f} is not an automorphism")
    if rank_of(fix) == 0:
        rep.status = "VACUOUS"
        rep.check("Fix is trivial, no certificate applies", True)
        return rep
    shapes = (len(cert.w_elements) == cert.r and len(cert.h_elements) == cert.s
              and len(cert.h_prime_elements) == cert.s)
    if not rep.check("field counts match r and s", shapes):
        return rep.finish()
    ks = [fold(_words(k, n), n) for k in cert.k_factors]
    ys = _words(cert.y_letters, n)
    lg = fold(_words(cert.l_generators, n), n)
    ws = _words(cert.w_elements, n)
    hs = _words(cert.h_elements, n)
    hps = _words(cert.h_prime_elements, n)
    parts = ks + [fold([y], n) for y in ys] + [lg]
    rep.check("(1) F = K_1 * ... * K_r * <y_1..y_s> * L",
              all(rank_of(k) > 0 for k in ks) and all(not y.is_identity() for y in ys)
              and is_free_factorization(parts, n))
    rep.check("(2) each K_i invariant", all(is_invariant(f, k) for k in ks))
    # H_j = K_1 * ... * K_r * <y_1..y_j>
    k_gens = [b for k in ks for b in basis_of(k)]
    hjs = [fold(k_gens + ys[:j], n) for j in range(cert.s)]
    ok3 = True
    ok5 = True
    for j in range(cert.s):
        # y_{j+1} f = h'_j y_{j+1}, h'_j in H_j
        ok3 &= apply(f, ys[j]) == hps[j] * ys[j] and not hps[j].is_identity() and member(hjs[j], hps[j])
        ok5 &= (not hs[j].is_identity() and member(hjs[j], hs[j])
                and apply(f, hs[j]) == hps[j] * hs[j] * ~hps[j])
    rep.check("(3) y_j f = h'_{j-1} y_j with 1 != h'_{j-1} in H_{j-1}", ok3)
    rep.check("(4) w_i fixed, non-trivial, not a proper power, in K_i",
              all(not w.is_identity() and not is_proper_power(w) and apply(f, w) == w and member(k, w)
                  for w, k in zip(ws, ks)))
    rep.check("(5) h_j f = h'_j h_j h'_j^-1 with 1 != h_j in H_j", ok5)
    claimed = fold(ws + [hs[j].conj(ys[j]) for j in range(cert.s)], n)
    rep.check("(6) Fix = <w_i, y_j^-1 h_{j-1} y_j>", claimed == fix,
              f"claimed <{', '.join(str(b) for b in basis_of(claimed))}>")
    rep.check("(7) y_j pass the abelianized primitivity test", all(is_primitive_abelianized(y) for y in ys))
    return rep.finish()


def rank_accounting(cert: DecompositionCertificate, fix_rank: int) -> bool:
    """``r + s >= r(Fix)`` and the factor ranks add up to the ambient rank."""
    n = cert.rank
    total = sum(rank_of(fold(_words(k, n), n)) for k in cert.k_factors) + cert.s \
        + rank_of(fold(_words(cert.l_generators, n), n))
    return cert.r + cert.s >= fix_rank and total == n


def search_certificate(f: Endomorphism, budget: FixedSearchBudget, limit: int = 5000):
    """Best-effort search over splittings of the standard basis into K blocks, ordered y letters and L.

    Yields every passing certificate found, in search order.  Only
    factorizations by basis letters are tried.
    """
    n = f.rank
    fix, _ = fixed_subgroup(f, budget)
    if rank_of(fix) == 0:
        return
    gens = list(range(1, n + 1))
    tried = 0
    # label 0: L, label 1: y letter, label >= 2: K block
    for labels in itertools.product(range(n + 2), repeat=n):
        blocks = sorted({x for x in labels if x >= 2})
        if blocks != list(range(2, 2 + len(blocks))):
            continue
        ks = [[k for k, lab in zip(gens, labels) if lab == b] for b in blocks]
        ylets = [k for k, lab in zip(gens, labels) if lab == 1]
        lets = [k for k, lab in zip(gens, labels) if lab == 0]
        kgraphs = [fold([Word((k,), n) for k in kk], n) for kk in ks]
        if not all(is_invariant(f, g) for g in kgraphs):
            continue
        for order in itertools.permutations(ylets):
            tried += 1
            if tried > limit:
                return
            cert = _fill_certificate(f, fix, ks, list(order), lets)
            if cert is None:
                continue
            if verify_cormain(f, cert, budget).passed:
                yield cert


def _fill_certificate(f, fix, ks, ylets, lets):
    n = f.rank
    kgraphs = [fold([Word((k,), n) for k in kk], n) for kk in ks]
    ws = []
    for g in kgraphs:
        part = stallings.intersection(fix, g)
        if rank_of(part) != 1:
            return None
        ws.append(basis_of(part)[0])
    hs, hps = [], []
    k_gens = [Word((k,), n) for kk in ks for k in kk]
    for j, yl in enumerate(ylets):
        y = Word((yl,), n)
        hj = fold(k_gens + [Word((x,), n) for x in ylets[:j]], n)
        hp = apply(f, y) * ~y
        if hp.is_identity() or not member(hj, hp):
            return None
        # Fix ∩ y^-1 H_j y, pulled back into H_j
        part = stallings.intersection(fix, stallings.conjugate_graph(hj, y))
        if rank_of(part) != 1:
            return None
        h = basis_of(part)[0].conj(~y)
        hs.append(h)
        hps.append(hp)
    fmt = lambda ws: [str(w) for w in ws]
    return DecompositionCertificate(n, [[str(Word((k,), n)) for k in kk] for kk in ks],
                                    [str(Word((y,), n)) for y in ylets],
                                    [str(Word((k,), n)) for k in lets], fmt(ws), fmt(hs), fmt(hps))


# --- maximal rank ------------------------------------------------------------------------------------


def collins_turner_check(f: Endomorphism, h_generators: Sequence, y: Word | str, h: Word | str | None = None,
                         r: int | None = None, budget: FixedSearchBudget | None = None) -> Report:
    """Maximal-rank decomposition ``F = H * <y>``: clause (i) if ``h`` is None, else clause (ii)."""
    budget = budget or FixedSearchBudget(10)
    n = f.rank
    rep, fix = _start("collins-turner " + ("(i)" if h is None else "(ii)"), f, budget)
    if rank_of(fix) != n or n < 2:
        rep.status = "INAPPLICABLE"
        rep.check("Fix has maximal rank", False, f"rank(Fix) = {rank_of(fix)}, rank(F) = {n}")
        return rep
    hg = fold(_words(h_generators, n), n)
    y = _word(y, n)
    rep.check("F = H * <y>, non-trivial", rank_of(hg) > 0 and not y.is_identity()
              and is_free_factorization([hg, fold([y], n)], n))
    rep.check("H invariant", is_invariant(f, hg))
    fh = _fix_of_part(fix, hg)
    if h is None:
        rep.check("y f = y", apply(f, y) == y, f"y f = {apply(f, y)}")
        rep.check("Fix = (H ∩ Fix) * <y>", fold(basis_of(fh) + [y], n) == fix)
    else:
        h = _word(h, n)
        rep.check("r != 0", r is not None and r != 0)
        rep.check("1 != h in H ∩ Fix, not a proper power",
                  not h.is_identity() and member(fh, h) and not is_proper_power(h))
        rep.check("y f = h^r y", r is not None and apply(f, y) == h ** r * y, f"y f = {apply(f, y)}")
        rep.check("Fix = (H ∩ Fix) * <y^-1 h y>", fold(basis_of(fh) + [h.conj(y)], n) == fix)
    return rep.finish()


# --- non-realizability of a subgroup as a fixed subgroup ------------------------------------------


@dataclass
class RealizationScan:
    """Exhaustive scan of endomorphisms fixing H with images of bounded length."""

    max_image_len: int
    candidates: int
    fixing: list
    automorphisms: list
    extra_fixed: dict  # endomorphism -> fixed word outside H

    @property
    def refuted(self) -> bool:
        """Every automorphism fixing H fixes something outside H."""
        return all(f in self.extra_fixed for f in self.automorphisms)

    def to_json(self) -> dict:
        return {"max_image_len": self.max_image_len, "candidates_examined": self.candidates,
                "fixing_H": [str(f) for f in self.fixing],
                "automorphisms": [str(f) for f in self.automorphisms],
                "fix_exceeds_H": {str(f): str(w) for f, w in self.extra_fixed.items()},
                "refuted": self.refuted}


def scan_fixing_endomorphisms(h_generators: Sequence, rank: int, max_image_len: int,
                              budget: FixedSearchBudget | None = None) -> RealizationScan:
    """All endomorphisms with images of length <= ``max_image_len`` fixing each generator of H.

    Images are assigned generator by generator; a generator of H is checked
    as soon as all its letters have images, which prunes without losing
    any candidate.  For each automorphism found, a fixed word outside H is
    sought among the basis of its computed fixed subgroup.
    """
    from .words import all_reduced_words

    budget = budget or FixedSearchBudget(8)
    hs = _words(h_generators, rank)
    hg = fold(hs, rank)
    pool = all_reduced_words(rank, max_image_len)
    ready = [[h for h in hs if max((abs(x) for x in h.letters), default=0) == k] for k in range(rank + 1)]
    candidates = 0
    fixing = []

    def extend(images):
        nonlocal candidates
        k = len(images)
        if k == rank:
            fixing.append(Endomorphism(rank, images))
            return
        for img in pool:
            candidates += 1
            trial = images + [img]
            ok = True
            for h in ready[k + 1]:
                out = _apply_partial(trial, h.letters)
                if out != h.letters:
                    ok = False
                    break
            if ok:
                extend(trial)

    extend([])
    autos = [f for f in fixing if is_automorphism(f)]
    extra = {}
    for f in autos:
        g, _ = fixed_subgroup(f, budget)
        for b in basis_of(g):
            if not member(hg, b):
                extra[f] = b
                break
    return RealizationScan(max_image_len, candidates, fixing, autos, extra)


def _apply_partial(images, letters):
    out: list[int] = []
    for x in letters:
        img = images[x - 1] if x > 0 else tuple(-y for y in reversed(images[-x - 1]))
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def parametric_family_refutation(r_values: Sequence[int]) -> list[tuple[int, ImageyResult]]:
    """The family ``a -> a, b -> a^r b, c -> c`` against ``H = <a, b>``, ``y = c``, ``h = b``.

    Assuming ``c^-1 b c`` were fixed, some ``h'`` in H would conjugate ``b``
    to ``a^r b``; for ``r != 0`` none exists.
    """
    out = []
    hg = fold([Word((1,), 3), Word((2,), 3)], 3)
    for r in r_values:
        f = Endomorphism(3, [(1,), (1,) * r + (2,) if r >= 0 else (-1,) * (-r) + (2,), (3,)])
        out.append((r, imagey_solve(f, hg, Word((3,), 3), Word((2,), 3), assume_fixed=True)))
    return out

"""Subgroup systems and free factor systems.

A system is a finite set of non-trivial conjugacy classes ``[[H_i]]`` of
subgroups.  Each class is stored as a core graph (basepoint on the cyclic
core) and identified by :func:`stallings.class_key`, so two systems are
equal exactly when their key tuples are.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

from . import stallings
from .morphisms import (
    Endomorphism,
    MorphismError,
    apply,
    compose,
    inner,
    is_automorphism,
    whitehead_moves,
)
from .stallings import BoundedVerdict, SubgroupGraph, rank_of
from .words import Word, WordError, all_reduced_words, exponent_vector


def _canonical_classes(graphs: Iterable[SubgroupGraph]) -> list[SubgroupGraph]:
    keyed = {}
    for g in graphs:
        if rank_of(g) == 0:
            continue
        k = stallings.class_key(g)
        if k not in keyed:
            keyed[k] = stallings.core_graph(g)
    return [keyed[k] for k in sorted(keyed)]


@dataclass
class FreeFactorSystem:
    """Conjugacy classes of non-trivial subgroups, canonically ordered.

    ``verified`` is set once conjugators ``witnesses`` are known with the
    join of the conjugated classes a free factor of F.
    """

    rank: int
    classes: list
    verified: bool = False
    witnesses: list | None = None

    def __post_init__(self):
        for g in self.classes:
            if g.rank_ambient != self.rank:
                raise WordError("class rank mismatch")
        self.classes = _canonical_classes(self.classes)

    @classmethod
    def from_generators(cls, rank: int, classes: Sequence[Sequence[Word | str]]) -> "FreeFactorSystem":
        graphs = []
        for gens in classes:
            ws = [g if isinstance(g, Word) else Word.parse(g, rank) for g in gens]
            graphs.append(stallings.fold(ws, rank))
        return cls(rank, graphs)

    @classmethod
    def empty(cls, rank: int) -> "FreeFactorSystem":
        return cls(rank, [], True, [])

    @classmethod
    def whole(cls, rank: int) -> "FreeFactorSystem":
        return cls(rank, [stallings.rose(rank)], True, [Word.identity(rank)])

    def key(self) -> tuple:
        return tuple(stallings.class_key(g) for g in self.classes)

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeFactorSystem) and self.rank == other.rank and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.rank, self.key()))

    def __len__(self) -> int:
        return len(self.classes)

    def __repr__(self) -> str:
        body = ", ".join("<" + ", ".join(str(b) for b in stallings.basis_of(g)) + ">" for g in self.classes)
        return f"FreeFactorSystem(rank={self.rank}, {{{body}}})"

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "classes": [{"generators": [str(b) for b in stallings.basis_of(g)]} for g in self.classes],
            "verified": self.verified,
            "witnesses": [str(w) for w in self.witnesses] if self.witnesses is not None else [],
        }

    @classmethod
    def from_json(cls, data: dict) -> "FreeFactorSystem":
        rank = int(data["rank"])
        s = cls.from_generators(rank, [c["generators"] for c in data["classes"]])
        # verification flags are recomputed, never trusted
        return s


def load(path) -> FreeFactorSystem:
    with open(path) as fh:
        return FreeFactorSystem.from_json(json.load(fh))


# --- complexity -----------------------------------------------------------------


def complexity_of(s: FreeFactorSystem) -> tuple[int, ...]:
    """Class ranks in non-increasing order; ``()`` is complexity 0."""
    return tuple(sorted((rank_of(g) for g in s.classes), reverse=True))


def cx_compare(c1: Sequence[int], c2: Sequence[int]) -> int:
    """-1, 0 or 1; lexicographic, a proper prefix is smaller."""
    t1, t2 = tuple(c1), tuple(c2)
    return (t1 > t2) - (t1 < t2)


def format_cx(c: Sequence[int]) -> str:
    return ",".join(map(str, c)) if c else "0"


# --- order relations ------------------------------------------------------------


def class_leq(h: SubgroupGraph, k: SubgroupGraph) -> Word | None:
    """``c`` with ``c^-1 H c <= K``, or None when no conjugate of H lies in K."""
    return stallings.conjugate_into(h, k)


def system_leq(s1: FreeFactorSystem, s2: FreeFactorSystem) -> bool:
    """Every class of ``s1`` lies in some class of ``s2`` up to conjugacy."""
    if s1.rank != s2.rank:
        raise WordError("rank mismatch")
    return all(any(class_leq(h, k) is not None for k in s2.classes) for h in s1.classes)


def wedge(s1: FreeFactorSystem, s2: FreeFactorSystem) -> FreeFactorSystem:
    """Non-trivial classes ``[[H_i ∩ K_j^y]]`` over all pairs and all ``y``."""
    if s1.rank != s2.rank:
        raise WordError("rank mismatch")
    parts = []
    for h in s1.classes:
        for k in s2.classes:
            for comp in stallings.pullback(h, k):
                if comp.rank >= 1:
                    parts.append(comp.graph)
    return FreeFactorSystem(s1.rank, parts)


def invariant_check(s: FreeFactorSystem, f: Endomorphism) -> bool:
    """Each class satisfies ``[[H f]] == [[H]]``."""
    if s.rank != f.rank:
        raise WordError("rank mismatch")
    if not is_automorphism(f):
        raise MorphismError(f"{f} is not an automorphism")
    for g in s.classes:
        img = stallings.fold([apply(f, b) for b in stallings.basis_of(g)], f.rank)
        if stallings.class_key(img) != stallings.class_key(g):
            return False
    return True


# --- free factor detection --------------------------------------------------------


def _det(m: list[list[int]]) -> int:
    # Bareiss fraction-free elimination
    a = [row[:] for row in m]
    n = len(a)
    sign, prev = 1, 1
    for i in range(n):
        if a[i][i] == 0:
            for j in range(i + 1, n):
                if a[j][i]:
                    a[i], a[j] = a[j], a[i]
                    sign = -sign
                    break
            else:
                return 0
        for j in range(i + 1, n):
            for k in range(i + 1, n):
                a[j][k] = (a[j][k] * a[i][i] - a[j][i] * a[i][k]) // prev
        prev = a[i][i]
    return sign * a[n - 1][n - 1] if n else 1


def abelian_summand(basis: Sequence[Word]) -> bool:
    """The exponent vectors of ``basis`` span a direct summand of rank ``len(basis)``.

    True for every basis of a free factor, so False refutes free-factorness.
    """
    if not basis:
        return True
    rows = [exponent_vector(b) for b in basis]
    r, n = len(rows), len(rows[0])
    if r > n:
        return False
    g = 0
    for cols in itertools.combinations(range(n), r):
        g = gcd(g, _det([[row[c] for c in cols] for row in rows]))
        if g == 1:
            return True
    return False


def _core_size(gens: Sequence[Word], rank: int) -> tuple[int, SubgroupGraph]:
    g = stallings.fold(gens, rank)
    c = stallings.cyclic_core(g)
    return (0 if c is None else sum(1 for v in c.vertices for t in g.out[v].values() if t in c.vertices)), g


def free_factor_test(h: SubgroupGraph, depth: int = 3) -> BoundedVerdict:
    """Is H a free factor of F?  YES carries an automorphism mapping H onto a sub-rose.

    Whitehead moves are applied greedily while they shrink the cyclic core,
    then breadth-first over non-increasing moves up to ``depth``.  NO comes
    from rank or abelianization obstructions; otherwise UNKNOWN.
    """
    n = h.rank_ambient
    r = rank_of(h)
    if r == 0:
        raise ValueError("H must be non-trivial")
    basis = stallings.basis_of(h)
    if r > n:
        return BoundedVerdict("NO", depth, None, {"reason": "rank(H) > rank(F)"})
    if not abelian_summand(basis):
        return BoundedVerdict("NO", depth, None, {"reason": "abelianized image is not a direct summand"})
    moves = whitehead_moves(n)
    current = Endomorphism.identity(n)
    gens = basis
    size, g = _core_size(gens, n)

    def done(g):
        c = stallings.cyclic_core(g)
        return c is not None and len(c.vertices) == 1

    steps = 0
    while not done(g):
        best = None
        for m in moves:
            cand = [apply(m, w) for w in gens]
            s, cg = _core_size(cand, n)
            if s < size and (best is None or s < best[0]):
                best = (s, m, cand, cg)
        if best is None:
            break
        size, m, gens, g = best
        current = compose(current, m)
        steps += 1
    if not done(g):
        frontier = [(current, gens)]
        seen = {stallings.class_key(g)}
        for _ in range(depth):
            nxt = []
            for f0, gs in frontier:
                for m in moves:
                    cand = [apply(m, w) for w in gs]
                    s, cg = _core_size(cand, n)
                    if s > size:
                        continue
                    key = stallings.class_key(cg)
                    if key in seen:
                        continue
                    seen.add(key)
                    f1 = compose(f0, m)
                    if done(cg):
                        current, gens, g = f1, cand, cg
                        break
                    nxt.append((f1, cand))
                if done(g):
                    break
            if done(g) or not nxt:
                break
            frontier = nxt
    if not done(g):
        return BoundedVerdict("UNKNOWN", depth, None, {"core_size": size})
    # move the basepoint onto the one-vertex core
    stem = Word(stallings.cyclic_core(g).stem, n)
    witness = compose(current, inner(stem))
    img = stallings.fold([apply(witness, w) for w in basis], n)
    if not stallings.is_sub_rose(img):
        raise AssertionError("free factor witness failed re-verification")
    return BoundedVerdict("YES", depth, witness, {"sub_rose": sorted(img.out[0]), "greedy_steps": steps})


def join(graphs: Sequence[SubgroupGraph], conjugators: Sequence[Word]) -> SubgroupGraph:
    rank = graphs[0].rank_ambient
    gens = []
    for g, x in zip(graphs, conjugators):
        gens.extend(b.conj(x) for b in stallings.basis_of(g))
    return stallings.fold(gens, rank)


def verify_free_factor_system(s: FreeFactorSystem, conj_len: int = 2, depth: int = 3) -> BoundedVerdict:
    """Search conjugators ``x_i`` (``|x_i| <= conj_len``, ``x_1 = 1``) with the join a free factor.

    On success ``s`` is flagged verified and the witnesses are stored.
    """
    if not s.classes:
        s.verified, s.witnesses = True, []
        return BoundedVerdict("YES", conj_len, [])
    if len(s.classes) == 1 and stallings.is_full_rose(s.classes[0]):
        s.verified, s.witnesses = True, [Word.identity(s.rank)]
        return BoundedVerdict("YES", conj_len, s.witnesses)
    total = sum(rank_of(g) for g in s.classes)
    if total > s.rank:
        return BoundedVerdict("NO", conj_len, None, {"reason": "ranks sum past rank(F)"})
    words = [Word(w, s.rank) for w in all_reduced_words(s.rank, conj_len)]
    unknown = False
    for tail in itertools.product(words, repeat=len(s.classes) - 1):
        xs = [Word.identity(s.rank), *tail]
        j = join(s.classes, xs)
        if rank_of(j) != total:
            continue
        verdict = free_factor_test(j, depth)
        if verdict.verdict == "YES":
            s.verified, s.witnesses = True, xs
            return BoundedVerdict("YES", conj_len, xs, {"automorphism": str(verdict.witness)})
        unknown = True
    return BoundedVerdict("UNKNOWN", conj_len, None, {"joins_tested": unknown})

"""Fixed subgroups and eigengroups, computed up to a word-length horizon.

A prefix ``p`` has displacement ``d(p) = (p f)^-1 p``.  A reduced word
``w = p q^-1`` is fixed exactly when ``d(p) == d(q)``, so one breadth-first
tree of prefixes up to half the horizon finds every fixed word: two
prefixes with equal displacement meet in the middle.  Identifying tree
nodes with equal displacement yields part of the coset graph of Fix, whose
core is the Stallings graph of the subgroup generated by the fixed words
within the horizon.
"""

from __future__ import annotations

import logging
import warnings
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np

from . import kernels, stallings
from .morphisms import Endomorphism, MorphismError, apply, is_automorphism, twist
from .stallings import BoundedVerdict, SubgroupGraph, rank_of
from .words import Word, all_reduced_words, concat_letters, invert_letters, shortlex_key

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FixedSearchBudget:
    """Search horizon.  ``displacement_cap=None`` means ``2 * (max image length) * max_len``."""

    max_len: int = 12
    displacement_cap: int | None = None
    eigenvalue_len: int = 2

    def __post_init__(self):
        if self.max_len < 1 or self.eigenvalue_len < 0:
            raise ValueError("budget lengths must be positive")
        if self.displacement_cap is not None and self.displacement_cap < 1:
            raise ValueError("displacement cap must be positive")

    def cap_for(self, f: Endomorphism) -> int:
        m = max(f.max_image_length(), 1)
        if self.displacement_cap is None:
            return 2 * m * self.max_len
        if self.displacement_cap < m:
            warnings.warn(f"displacement cap {self.displacement_cap} is below the longest image ({m})",
                          stacklevel=3)
        return self.displacement_cap

    def to_json(self) -> dict:
        return {"max_len": self.max_len, "displacement_cap": self.displacement_cap,
                "eigenvalue_len": self.eigenvalue_len}


@dataclass
class PrefixTree:
    """Output of the displacement kernel for one endomorphism."""

    rank: int
    depth: int
    parent: np.ndarray
    letter: np.ndarray
    level: np.ndarray
    state: np.ndarray
    n_states: int
    pruned: int
    cap: int

    def word(self, node: int) -> tuple[int, ...]:
        out = []
        while node > 0:
            out.append(int(self.letter[node]))
            node = int(self.parent[node])
        return tuple(reversed(out))


def prefix_tree(f: Endomorphism, depth: int, cap: int) -> PrefixTree:
    pre = []
    for k in range(f.rank):
        pre.append(f.inv_images[k])
        pre.append(f.images[k])
    parent, letter, level, state, n_states, pruned = kernels.displacement_tree(pre, f.rank, depth, cap)
    log.debug("prefix tree depth %d: %d nodes, %d states, %d pruned", depth, len(parent), n_states, pruned)
    return PrefixTree(f.rank, depth, parent, letter, level, state, n_states, pruned, cap)


def _node_mask(tree: PrefixTree, horizon: int) -> np.ndarray:
    """Nodes usable for fixed words of length <= ``horizon``.

    Half-depth is ``ceil(horizon / 2)``.  For odd horizons, two deepest
    nodes may not be paired, so a deepest node only counts when its state
    also holds a shallower node.
    """
    half = (horizon + 1) // 2
    mask = tree.level <= half
    if horizon % 2:
        shallow = np.zeros(tree.n_states, dtype=bool)
        shallow[tree.state[mask & (tree.level < half)]] = True
        mask &= (tree.level < half) | shallow[tree.state]
    return mask


def _quotient_core(tree: PrefixTree, horizon: int) -> SubgroupGraph:
    mask = _node_mask(tree, horizon)
    mask[0] = False
    nodes = np.nonzero(mask)[0]
    src = tree.state[tree.parent[nodes]]
    dst = tree.state[nodes]
    lab = tree.letter[nodes].astype(np.int64)
    neg = lab < 0
    src, dst = np.where(neg, dst, src), np.where(neg, src, dst)
    lab = np.abs(lab)
    if len(lab):
        edges = np.unique(np.stack([src, lab, dst], axis=1), axis=0)
    else:
        edges = np.zeros((0, 3), dtype=np.int64)
    # peel hanging trees, keeping the basepoint (state 0)
    while len(edges):
        deg = np.bincount(edges[:, 0], minlength=tree.n_states) + np.bincount(edges[:, 2], minlength=tree.n_states)
        leaf = deg == 1
        leaf[0] = False
        drop = leaf[edges[:, 0]] | leaf[edges[:, 2]]
        if not drop.any():
            break
        edges = edges[~drop]
    ids: dict[int, int] = {0: 0}
    for v in np.unique(edges[:, [0, 2]]) if len(edges) else []:
        ids.setdefault(int(v), len(ids))
    triples = [(ids[int(a)], int(x), ids[int(b)]) for a, x, b in edges]
    return stallings.from_edges(tree.rank, len(ids), triples, 0)


def fixed_words_from_tree(tree: PrefixTree, max_len: int) -> list[tuple[int, ...]]:
    mask = _node_mask(tree, max_len)
    groups: dict[int, list[int]] = defaultdict(list)
    for node in np.nonzero(mask)[0]:
        groups[int(tree.state[node])].append(int(node))
    words: dict[int, tuple[int, ...]] = {}

    def word(n):
        w = words.get(n)
        if w is None:
            w = words[n] = tree.word(n)
        return w

    out = []
    for members in groups.values():
        if len(members) < 2 and members[0] != 0:
            continue
        for p in members:
            lp = int(tree.level[p])
            for q in members:
                lq = int(tree.level[q])
                # unique split: |p| - |q| in {0, 1}
                if lp - lq not in (0, 1) or lp + lq > max_len:
                    continue
                wp, wq = word(p), word(q)
                if wp and wq and wp[-1] == wq[-1]:
                    continue
                if p == q and p != 0:
                    continue
                out.append(wp + invert_letters(wq))
    out.sort(key=shortlex_key)
    return out


def enumerate_fixed(f: Endomorphism, budget: FixedSearchBudget) -> list[Word]:
    """Every reduced word of length <= ``max_len`` fixed by ``f``, shortlex ordered.

    Each word is re-checked by applying ``f``.
    """
    tree = prefix_tree(f, (budget.max_len + 1) // 2, budget.cap_for(f))
    out = []
    for w in fixed_words_from_tree(tree, budget.max_len):
        if f.apply_letters(w) != w:
            raise AssertionError(f"search returned a non-fixed word {w}")
        out.append(Word(w, f.rank))
    return out


def brute_force_fixed(f: Endomorphism, max_len: int) -> list[Word]:
    """Reference enumeration over all reduced words, with no pruning."""
    return [Word(w, f.rank) for w in all_reduced_words(f.rank, max_len) if f.apply_letters(w) == w]


def fixed_subgroup(f: Endomorphism, budget: FixedSearchBudget) -> tuple[SubgroupGraph, BoundedVerdict]:
    """Subgroup generated by the fixed words of length <= ``max_len``.

    The verdict is ``bounded-complete`` when the horizons ``max_len - 2``,
    ``max_len - 1`` and ``max_len`` all give the same subgroup, else
    ``open``.  Neither outcome is a proof.
    """
    L = budget.max_len
    tree = prefix_tree(f, (L + 1) // 2, budget.cap_for(f))
    g = _quotient_core(tree, L)
    if L >= 3:
        earlier = _quotient_core(tree, L - 2)
        verdict = "bounded-complete" if earlier == g else "open"
    else:
        verdict = "open"
    details = {"budget": budget.to_json(), "cap": tree.cap, "nodes": int(len(tree.parent)),
               "states": tree.n_states, "pruned": tree.pruned, "rank": rank_of(g)}
    if rank_of(g) > f.rank and is_automorphism(f):
        raise AssertionError(f"fixed subgroup of rank {rank_of(g)} exceeds the ambient rank {f.rank}")
    return g, BoundedVerdict(verdict, L, None, details)


# --- eigengroups --------------------------------------------------------------


@dataclass
class EigengroupRecord:
    """``Fix(f twisted by y)``: the words ``x`` with ``x f = y x y^-1``."""

    eigenvalue: Word
    fixed_graph: SubgroupGraph
    status: str

    @property
    def rank(self) -> int:
        return rank_of(self.fixed_graph)

    def to_json(self) -> dict:
        return {"eigenvalue": str(self.eigenvalue), "rank": self.rank,
                "generators": [str(b) for b in stallings.basis_of(self.fixed_graph)],
                "status": self.status}


def eigengroup_scan(f: Endomorphism, budget: FixedSearchBudget, progress=None) -> list[EigengroupRecord]:
    """Eigengroups of every eigenvalue of length <= ``eigenvalue_len`` with rank >= 1.

    A cyclic eigengroup shared by several eigenvalues is kept once, under
    the shortlex-least one.  Non-cyclic eigengroups determine their
    eigenvalue, so they never repeat.
    """
    if not is_automorphism(f):
        raise MorphismError(f"{f} is not an automorphism")
    records = []
    seen_cyclic = set()
    ys = all_reduced_words(f.rank, budget.eigenvalue_len)
    for i, y in enumerate(ys):
        yw = Word(y, f.rank)
        g, verdict = fixed_subgroup(twist(f, yw), budget)
        if progress is not None:
            progress(i + 1, len(ys))
        r = rank_of(g)
        if r == 0:
            continue
        if r == 1:
            if g in seen_cyclic:
                continue
            seen_cyclic.add(g)
        for b in stallings.basis_of(g):
            if apply(f, b) != yw * b * ~yw:
                raise AssertionError(f"eigengroup basis word {b} fails for eigenvalue {yw}")
        records.append(EigengroupRecord(yw, g, verdict.verdict))
    records.sort(key=lambda rec: (-rec.rank, shortlex_key(rec.eigenvalue.letters)))
    return records


def reidemeister_image(f: Endomorphism, y: Word, c: Word) -> Word:
    """``(c f)^-1 y c``, the eigenvalue whose eigengroup is the ``c``-conjugate of ``y``'s."""
    return ~apply(f, c) * y * c


@dataclass
class IsogredienceClass:
    representative: EigengroupRecord
    members: list = field(default_factory=list)  # (record, witness c)

    def to_json(self, class_id: int) -> dict:
        return {
            "class": class_id,
            "rank": self.representative.rank,
            "representative": str(self.representative.eigenvalue),
            "members": [{"eigenvalue": str(rec.eigenvalue), "witness": str(c)} for rec, c in self.members],
        }


@dataclass
class IsogredienceReport:
    classes: list
    cyclic: list

    def to_json(self) -> dict:
        return {
            "classes": [c.to_json(i) for i, c in enumerate(self.classes)],
            "unclassified_cyclic": [rec.to_json() for rec in self.cyclic],
        }


def _witness(f: Endomorphism, a: EigengroupRecord, b: EigengroupRecord) -> Word | None:
    """``c`` with ``b.eigenvalue == (c f)^-1 a.eigenvalue c``, if the eigengroups reveal one.

    Candidates come from conjugacy of the computed graphs and from pullback
    components of rank >= 2; either way a rank >= 2 overlap pins the
    eigenvalue down, and the equation is checked before trusting it.
    """
    candidates = []
    c = stallings.conjugate_subgroups(a.fixed_graph, b.fixed_graph)
    if c is not None:
        candidates.append(c)
    for comp in stallings.pullback(a.fixed_graph, b.fixed_graph):
        # component presents A ∩ y^-1 B y; conjugating by y^-1 puts it inside B
        if comp.rank >= 2:
            candidates.append(~comp.coset_witness)
    for c in candidates:
        if reidemeister_image(f, a.eigenvalue, c) == b.eigenvalue:
            return c
    return None


def isogredience_partition(records: list[EigengroupRecord], f: Endomorphism) -> IsogredienceReport:
    """Group non-cyclic eigengroups into isogredience classes with Reidemeister witnesses."""
    big = [rec for rec in records if rec.rank >= 2]
    cyclic = [rec for rec in records if rec.rank < 2]
    classes: list[IsogredienceClass] = []
    for rec in big:
        for cls in classes:
            c = _witness(f, cls.representative, rec)
            if c is not None:
                cls.members.append((rec, c))
                break
        else:
            classes.append(IsogredienceClass(rec, [(rec, Word.identity(f.rank))]))
    return IsogredienceReport(classes, cyclic)


@dataclass
class BHReport:
    rank: int
    fix_rank: int
    class_ranks: list
    violations: list
    budget: dict
    partition: IsogredienceReport

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"rank": self.rank, "fix_rank": self.fix_rank, "class_ranks": self.class_ranks,
                "reduced_rank_sum": sum(r - 1 for r in self.class_ranks),
                "violations": self.violations, "budget": self.budget,
                "partition": self.partition.to_json()}


def bh_report(f: Endomorphism, budget: FixedSearchBudget, progress=None) -> BHReport:
    """Check the rank bounds on eigengroups within the scanned horizon.

    Any violation is a bug in this package, never a property of ``f``.
    """
    fix, _ = fixed_subgroup(f, budget)
    records = eigengroup_scan(f, budget, progress)
    part = isogredience_partition(records, f)
    ranks = [cls.representative.rank for cls in part.classes]
    n = f.rank
    bad = []
    if rank_of(fix) > n:
        bad.append(f"FATAL: rank(Fix) = {rank_of(fix)} > {n}")
    if sum(r - 1 for r in ranks) > max(n - 1, 0):
        bad.append(f"FATAL: sum of reduced ranks {sum(r - 1 for r in ranks)} > {n - 1}")
    if len(ranks) > max(n - 1, 0):
        bad.append(f"FATAL: {len(ranks)} non-cyclic classes > {n - 1}")
    return BHReport(n, rank_of(fix), ranks, bad, budget.to_json(), part)



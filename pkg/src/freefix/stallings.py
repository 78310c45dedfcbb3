"""Folded core graphs (Stallings graphs) of finitely generated subgroups.

A :class:`SubgroupGraph` is a connected, folded, labelled graph with a
basepoint; the reduced words labelling closed paths at the basepoint are
exactly the elements of the subgroup.  Vertices are numbered breadth-first
from the basepoint (always vertex 0), trying letters in the order
``a, A, b, B, ...``, which makes equality of subgroups a comparison of
edge tuples.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .words import (
    Word,
    WordError,
    concat_letters,
    format_letters,
    invert_letters,
    reduce_letters,
    shortlex_key,
)


def _letter_order(rank: int) -> list[int]:
    return [x for k in range(1, rank + 1) for x in (k, -k)]


class _Folder:
    """Union-find Stallings folding on a mutable labelled graph."""

    def __init__(self, rank: int):
        self.rank = rank
        self.parent: list[int] = []
        self.out: list[dict[int, int] | None] = []
        self.inc: list[dict[int, int] | None] = []

    def new_vertex(self) -> int:
        self.parent.append(len(self.parent))
        self.out.append({})
        self.inc.append({})
        return len(self.parent) - 1

    def find(self, v: int) -> int:
        p = self.parent
        root = v
        while p[root] != root:
            root = p[root]
        while p[v] != root:
            p[v], v = root, p[v]
        return root

    def step(self, v: int, x: int) -> int | None:
        v = self.find(v)
        t = (self.out[v] if x > 0 else self.inc[v]).get(abs(x))
        return None if t is None else self.find(t)

    def add_edge(self, u: int, x: int, v: int) -> None:
        """Add an edge labelled by signed letter ``x`` from ``u`` to ``v``."""
        if x < 0:
            u, v, x = v, u, -x
        u, v = self.find(u), self.find(v)
        merges = []
        t = self.out[u].get(x)
        if t is None:
            self.out[u][x] = v
        else:
            merges.append((t, v))
        s = self.inc[v].get(x)
        if s is None:
            self.inc[v][x] = u
        else:
            merges.append((s, u))
        for a, b in merges:
            self._union(a, b)

    def _union(self, a: int, b: int) -> None:
        stack = [(a, b)]
        while stack:
            a, b = stack.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if len(self.out[a]) + len(self.inc[a]) > len(self.out[b]) + len(self.inc[b]):
                a, b = b, a
            self.parent[a] = b
            out_a, inc_a = self.out[a], self.inc[a]
            self.out[a] = self.inc[a] = None
            out_b, inc_b = self.out[b], self.inc[b]
            for x, t in out_a.items():
                if x in out_b:
                    stack.append((out_b[x], t))
                else:
                    out_b[x] = t
            for x, s in inc_a.items():
                if x in inc_b:
                    stack.append((inc_b[x], s))
                else:
                    inc_b[x] = s

    def add_loop(self, base: int, letters: Sequence[int]) -> None:
        """Attach a closed path at ``base`` spelling ``letters``."""
        n = len(letters)
        if n == 0:
            return
        v = base
        i = 0
        # follow the existing edges as far as they go
        while i < n - 1:
            t = self.step(v, letters[i])
            if t is None:
                break
            v, i = t, i + 1
        for j in range(i, n - 1):
            w = self.new_vertex()
            self.add_edge(v, letters[j], w)
            v = w
        self.add_edge(v, letters[n - 1], base)

    def finish(self, base: int) -> "SubgroupGraph":
        base = self.find(base)
        out: dict[int, dict[int, int]] = {}
        inc: dict[int, dict[int, int]] = {}
        # reachable part only
        seen = {base}
        queue = [base]
        while queue:
            v = queue.pop()
            ov = {x: self.find(t) for x, t in self.out[v].items()}
            iv = {x: self.find(s) for x, s in self.inc[v].items()}
            out[v], inc[v] = ov, iv
            for t in list(ov.values()) + list(iv.values()):
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        return _canonical_graph(self.rank, out, inc, base, trim=True)


def _canonical_graph(rank, out, inc, base, trim=True) -> "SubgroupGraph":
    """Trim hanging trees (keeping the basepoint) and renumber breadth-first."""
    if trim:
        deg = {v: len(out[v]) + len(inc[v]) for v in out}
        alive = set(out)
        stack = [v for v in out if deg[v] <= 1 and v != base]
        while stack:
            v = stack.pop()
            if v not in alive or v == base or deg[v] > 1:
                continue
            alive.discard(v)
            for x, t in out[v].items():
                if t in alive:
                    deg[t] -= 1
                    del inc[t][x]
                    if deg[t] <= 1 and t != base:
                        stack.append(t)
            for x, s in inc[v].items():
                if s in alive:
                    deg[s] -= 1
                    del out[s][x]
                    if deg[s] <= 1 and s != base:
                        stack.append(s)
    order = _letter_order(rank)
    num = {base: 0}
    seq = [base]
    i = 0
    while i < len(seq):
        v = seq[i]
        i += 1
        for x in order:
            t = out[v].get(x) if x > 0 else inc[v].get(-x)
            if t is not None and t not in num:
                num[t] = len(seq)
                seq.append(t)
    new_out = [{x: num[t] for x, t in sorted(out[v].items())} for v in seq]
    new_inc = [{x: num[s] for x, s in sorted(inc[v].items())} for v in seq]
    return SubgroupGraph(rank, new_out, new_inc)


class SubgroupGraph:
    """Basepointed folded core graph; the basepoint is vertex 0.

    Treat instances as immutable.
    """

    __slots__ = ("rank_ambient", "out", "inc", "_key", "_tree", "_cyc")

    def __init__(self, rank_ambient: int, out: list[dict[int, int]], inc: list[dict[int, int]]):
        self.rank_ambient = rank_ambient
        self.out = out
        self.inc = inc
        self._key = None
        self._tree = None
        self._cyc = None

    basepoint = 0

    @property
    def n_vertices(self) -> int:
        return len(self.out)

    @property
    def n_edges(self) -> int:
        return sum(len(o) for o in self.out)

    def edges(self) -> list[tuple[int, int, int]]:
        return [(v, x, t) for v, o in enumerate(self.out) for x, t in o.items()]

    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.rank_ambient, len(self.out), tuple(self.edges()))
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, SubgroupGraph) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        gens = ", ".join(str(b) for b in basis_of(self))
        return f"SubgroupGraph(rank={rank_of(self)}, <{gens}>)"

    def step(self, v: int, x: int) -> int | None:
        return self.out[v].get(x) if x > 0 else self.inc[v].get(-x)

    def read(self, letters: Sequence[int], start: int = 0) -> int | None:
        v = start
        for x in letters:
            v = self.out[v].get(x) if x > 0 else self.inc[v].get(-x)
            if v is None:
                return None
        return v

    def degree(self, v: int) -> int:
        return len(self.out[v]) + len(self.inc[v])

    def is_trivial(self) -> bool:
        return not self.out[0] and not self.inc[0]

    def neighbours(self, v: int):
        for x, t in self.out[v].items():
            yield x, t
        for x, s in self.inc[v].items():
            yield -x, s

    def to_json(self) -> dict:
        return {"rank": self.rank_ambient, "generators": [str(b) for b in basis_of(self)]}

    def to_dot(self, name: str = "H") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;"]
        for v in range(self.n_vertices):
            shape = "doublecircle" if v == 0 else "circle"
            lines.append(f"  v{v} [shape={shape}];")
        for v, x, t in self.edges():
            lines.append(f'  v{v} -> v{t} [label="{format_letters((x,))}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# --- construction -----------------------------------------------------------


def fold(generators: Iterable[Word | Sequence[int]], rank: int) -> SubgroupGraph:
    """Stallings graph of the subgroup generated by ``generators``."""
    f = _Folder(rank)
    base = f.new_vertex()
    for g in generators:
        if isinstance(g, Word):
            if g.rank != rank:
                raise WordError(f"generator {g} has rank {g.rank}, expected {rank}")
            letters = g.letters
        else:
            letters = reduce_letters(g)
            for x in letters:
                if abs(x) > rank or x == 0:
                    raise WordError(f"letter {x} out of range for rank {rank}")
        f.add_loop(base, letters)
    return f.finish(base)


def from_edges(rank: int, n: int, edges: Iterable[tuple[int, int, int]], base: int = 0) -> SubgroupGraph:
    """Fold an arbitrary labelled graph given by ``(source, gen, target)`` edges."""
    f = _Folder(rank)
    for _ in range(n):
        f.new_vertex()
    for u, x, v in edges:
        f.add_edge(u, x, v)
    return f.finish(base)


def trivial_graph(rank: int) -> SubgroupGraph:
    return SubgroupGraph(rank, [{}], [{}])


def rose(rank: int, gens: Iterable[int] | None = None) -> SubgroupGraph:
    gens = range(1, rank + 1) if gens is None else sorted(gens)
    return SubgroupGraph(rank, [{x: 0 for x in gens}], [{x: 0 for x in gens}])


def is_full_rose(g: SubgroupGraph) -> bool:
    return g.n_vertices == 1 and len(g.out[0]) == g.rank_ambient


def is_sub_rose(g: SubgroupGraph) -> bool:
    return g.n_vertices == 1


# --- rank, basis, membership --------------------------------------------------


def rank_of(g: SubgroupGraph) -> int:
    return g.n_edges - g.n_vertices + 1


def _tree(g: SubgroupGraph):
    """Breadth-first spanning tree: (labels, tree-edge set, basis edge list)."""
    if g._tree is None:
        order = _letter_order(g.rank_ambient)
        labels: list[tuple[int, ...] | None] = [None] * g.n_vertices
        labels[0] = ()
        tree_edges = set()
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for x in order:
                t = g.step(v, x)
                if t is not None and labels[t] is None:
                    labels[t] = labels[v] + (x,)
                    tree_edges.add((v, x, t) if x > 0 else (t, -x, v))
                    queue.append(t)
        basis_edges = [e for e in g.edges() if e not in tree_edges]
        index = {e: i for i, e in enumerate(basis_edges)}
        g._tree = (labels, index, basis_edges)
    return g._tree


def vertex_labels(g: SubgroupGraph) -> list[tuple[int, ...]]:
    """Geodesic label from the basepoint to each vertex (breadth-first tree)."""
    return _tree(g)[0]


def basis_of(g: SubgroupGraph) -> list[Word]:
    labels, _, basis_edges = _tree(g)
    out = []
    for u, x, v in basis_edges:
        w = concat_letters(labels[u] + (x,), invert_letters(labels[v]))
        out.append(Word(w, g.rank_ambient))
    return out


def member(g: SubgroupGraph, w: Word, spell: bool = False):
    """Membership test; with ``spell`` also return ``w`` in basis coordinates.

    The spelling is a :class:`Word` of rank ``rank_of(g)`` whose k-th letter
    stands for the k-th element of :func:`basis_of`.
    """
    if w.rank != g.rank_ambient:
        raise WordError(f"rank mismatch: word rank {w.rank}, graph rank {g.rank_ambient}")
    if not spell:
        return g.read(w.letters) == 0
    _, index, _ = _tree(g)
    v = 0
    spelled: list[int] = []
    for x in w.letters:
        t = g.step(v, x)
        if t is None:
            return False, None
        e = (v, x, t) if x > 0 else (t, -x, v)
        k = index.get(e)
        if k is not None:
            spelled.append(k + 1 if x > 0 else -(k + 1))
        v = t
    if v != 0:
        return False, None
    return True, Word(reduce_letters(spelled), rank_of(g))


def contains(g: SubgroupGraph, letters: Sequence[int]) -> bool:
    return g.read(letters) == 0


def same_subgroup(g1: SubgroupGraph, g2: SubgroupGraph) -> bool:
    return g1.key() == g2.key()


def is_subgroup(h: SubgroupGraph, k: SubgroupGraph) -> bool:
    """True when H <= K."""
    return all(k.read(b.letters) == 0 for b in basis_of(h))


def conjugate_graph(g: SubgroupGraph, c: Word) -> SubgroupGraph:
    """Graph of ``c^-1 H c``."""
    ci = invert_letters(c.letters)
    return fold([Word(concat_letters(concat_letters(ci, b.letters), c.letters), g.rank_ambient)
                 for b in basis_of(g)], g.rank_ambient)


# --- basepoint-free cores and conjugacy ----------------------------------------


@dataclass(frozen=True)
class CyclicCore:
    """The basepoint-free core of a non-trivial subgroup graph.

    ``H = stem * pi_1(core, attach) * stem^-1``.
    """

    vertices: frozenset
    attach: int
    stem: tuple[int, ...]


def cyclic_core(g: SubgroupGraph) -> CyclicCore | None:
    if g._cyc is None:
        if rank_of(g) == 0:
            g._cyc = (None,)
        else:
            deg = [g.degree(v) for v in range(g.n_vertices)]
            alive = set(range(g.n_vertices))
            stack = [v for v in alive if deg[v] <= 1]
            while stack:
                v = stack.pop()
                if v not in alive:
                    continue
                alive.discard(v)
                for _, t in g.neighbours(v):
                    if t in alive:
                        deg[t] -= 1
                        if deg[t] <= 1:
                            stack.append(t)
            labels = vertex_labels(g)
            attach = min(alive, key=lambda v: (len(labels[v]), shortlex_key(labels[v])))
            g._cyc = (CyclicCore(frozenset(alive), attach, labels[attach]),)
    return g._cyc[0]


def _anchored_map(g1: SubgroupGraph, c1: CyclicCore, g2: SubgroupGraph, vs2, start: int):
    """Label-preserving map core(g1) -> g2 sending c1.attach to ``start``.

    Propagation is forced because ``g2`` is folded.  Returns the vertex map
    or None.  Targets must stay inside ``vs2``.
    """
    m = {c1.attach: start}
    queue = [c1.attach]
    while queue:
        v = queue.pop()
        mv = m[v]
        for x, t in g1.neighbours(v):
            if t not in c1.vertices:
                continue
            mt = g2.step(mv, x)
            if mt is None or mt not in vs2:
                return None
            if t in m:
                if m[t] != mt:
                    return None
            else:
                m[t] = mt
                queue.append(t)
    return m


def _path_in(g: SubgroupGraph, vs, src: int, dst: int) -> tuple[int, ...]:
    """Shortest label of a path from src to dst inside vertex set ``vs``."""
    order = _letter_order(g.rank_ambient)
    prev = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        if v == dst:
            break
        for x in order:
            t = g.step(v, x)
            if t is not None and t in vs and t not in prev:
                prev[t] = (v, x)
                queue.append(t)
    path = []
    v = dst
    while prev[v] is not None:
        v, x = prev[v]
        path.append(x)
    return tuple(reversed(path))


def _core_witness(g1, c1: CyclicCore, g2, c2: CyclicCore, image: int) -> Word:
    # H1 = s1 K1 s1^-1, K1 maps into pi_1(core2, image) = p^-1 (s2^-1 H2 s2) p,
    # p the path attach2 -> image; conjugator c = s1 p^-1 s2^-1.
    p = _path_in(g2, c2.vertices, c2.attach, image)
    c = concat_letters(concat_letters(c1.stem, invert_letters(p)), invert_letters(c2.stem))
    return Word(c, g1.rank_ambient)


def conjugate_subgroups(g1: SubgroupGraph, g2: SubgroupGraph) -> Word | None:
    """Some ``c`` with ``c^-1 H1 c == H2``, or None when not conjugate."""
    if g1.rank_ambient != g2.rank_ambient:
        raise WordError("rank mismatch")
    r = rank_of(g1)
    if r != rank_of(g2):
        return None
    if r == 0:
        return Word.identity(g1.rank_ambient)
    c1, c2 = cyclic_core(g1), cyclic_core(g2)
    if len(c1.vertices) != len(c2.vertices):
        return None
    for v in sorted(c2.vertices):
        m = _anchored_map(g1, c1, g2, c2.vertices, v)
        if m is not None and len(set(m.values())) == len(c1.vertices):
            c = _core_witness(g1, c1, g2, c2, v)
            if same_subgroup(conjugate_graph(g1, c), g2):
                return c
    return None


def conjugate_into(h: SubgroupGraph, k: SubgroupGraph) -> Word | None:
    """Some ``c`` with ``c^-1 H c <= K`` (H non-trivial), or None."""
    if h.rank_ambient != k.rank_ambient:
        raise WordError("rank mismatch")
    if rank_of(h) == 0:
        return Word.identity(h.rank_ambient)
    if rank_of(k) == 0:
        return None
    ch, ck = cyclic_core(h), cyclic_core(k)
    for v in sorted(ck.vertices):
        if _anchored_map(h, ch, k, ck.vertices, v) is not None:
            c = _core_witness(h, ch, k, ck, v)
            if is_subgroup(conjugate_graph(h, c), k):
                return c
    return None


def class_key(g: SubgroupGraph) -> tuple:
    """Canonical encoding of the conjugacy class [[H]].

    Least breadth-first encoding of the cyclic core over all anchor vertices.
    """
    c = cyclic_core(g)
    if c is None:
        return (g.rank_ambient, 0, ())
    order = _letter_order(g.rank_ambient)
    best = None
    for anchor in c.vertices:
        num = {anchor: 0}
        seq = [anchor]
        i = 0
        while i < len(seq):
            v = seq[i]
            i += 1
            for x in order:
                t = g.step(v, x)
                if t is not None and t in c.vertices and t not in num:
                    num[t] = len(seq)
                    seq.append(t)
        enc = tuple(sorted((num[v], x, num[t]) for v in seq for x, t in g.out[v].items()
                           if t in c.vertices))
        if best is None or enc < best:
            best = enc
    return (g.rank_ambient, len(c.vertices), best)


def core_graph(g: SubgroupGraph) -> SubgroupGraph:
    """Representative of [[H]] with the basepoint on the cyclic core."""
    c = cyclic_core(g)
    if c is None:
        return trivial_graph(g.rank_ambient)
    return conjugate_graph(g, Word(c.stem, g.rank_ambient))


# --- pullbacks ----------------------------------------------------------------


@dataclass(frozen=True)
class PullbackComponent:
    """A component of the pullback presenting ``H ∩ K^y`` with ``y = coset_witness``."""

    graph: SubgroupGraph
    coset_witness: Word
    based: bool = False

    @property
    def rank(self) -> int:
        return rank_of(self.graph)


def pullback(h: SubgroupGraph, k: SubgroupGraph) -> list[PullbackComponent]:
    """Components of the fibre product of two subgroup graphs.

    The based component (always first) presents ``H ∩ K``; every other
    non-contractible component presents ``H ∩ K^y`` for its coset witness
    ``y``.  Non-based components are ordered by :func:`class_key`.
    """
    if h.rank_ambient != k.rank_ambient:
        raise WordError("rank mismatch")
    rank = h.rank_ambient
    nk = k.n_vertices
    # union-find over product vertices u*nk + v
    parent: dict[int, int] = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    edges = []
    for x in range(1, rank + 1):
        hx = [(u, t) for u, o in enumerate(h.out) if (t := o.get(x)) is not None]
        if not hx:
            continue
        kx = [(v, t) for v, o in enumerate(k.out) if (t := o.get(x)) is not None]
        for u, tu in hx:
            for v, tv in kx:
                a, b = u * nk + v, tu * nk + tv
                edges.append((a, x, b))
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[ra] = rb
    find(0)
    comps: dict[int, list] = {}
    verts: dict[int, set] = {}
    for a, x, b in edges:
        r = find(a)
        comps.setdefault(r, []).append((a, x, b))
        verts.setdefault(r, set()).update((a, b))
    based_root = find(0)
    h_labels = vertex_labels(h)
    k_labels = vertex_labels(k)
    result = []
    others = []
    for r in set(list(comps) + [based_root]):
        es = comps.get(r, [])
        vs = verts.get(r, {0} if r == based_root else set())
        if r == based_root:
            vs = vs | {0}
        comp_rank = len(es) - len(vs) + 1
        if r != based_root and comp_rank <= 0:
            continue
        if r == based_root:
            anchor = 0
        else:
            anchor = min(vs, key=lambda a: (shortlex_key(h_labels[a // nk]),
                                           shortlex_key(k_labels[a % nk])))
        ids = {a: i for i, a in enumerate(sorted(vs))}
        g = from_edges(rank, len(ids), [(ids[a], x, ids[b]) for a, x, b in es], ids[anchor])
        pu = h_labels[anchor // nk]
        pv = k_labels[anchor % nk]
        y = Word(concat_letters(pv, invert_letters(pu)), rank)
        if pu:
            g = conjugate_graph(g, Word(invert_letters(pu), rank))
        comp = PullbackComponent(g, y, based=(r == based_root))
        if r == based_root:
            result.append(comp)
        else:
            others.append(comp)
    others.sort(key=lambda c: (class_key(c.graph), shortlex_key(c.coset_witness.letters)))
    return result + others


def intersection(h: SubgroupGraph, k: SubgroupGraph) -> SubgroupGraph:
    return pullback(h, k)[0].graph


# --- bounded property checks ----------------------------------------------------


@dataclass
class BoundedVerdict:
    """Outcome of a check that is only exhaustive up to a stated bound."""

    verdict: str
    bound: int | None = None
    witness: object = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        w = self.witness
        if isinstance(w, Word):
            w = str(w)
        return {"verdict": self.verdict, "bound": self.bound, "witness": w, **self.details}


def root_index(g: SubgroupGraph, x: Sequence[int]) -> int | None:
    """Least ``m >= 1`` with ``x^m`` in H, or None when ``<x> ∩ H`` is trivial.

    Reading ``x`` is an injective partial map on vertices, so the orbit of
    the basepoint either returns to it or runs off the graph; this is the
    based component of the pullback of H with the cycle spelling ``x``.
    """
    v = 0
    m = 0
    while True:
        v = g.read(x, v)
        if v is None:
            return None
        m += 1
        if v == 0:
            return m
        if m > g.n_vertices:
            return None


def purity_check(g: SubgroupGraph, root_len_bound: int) -> BoundedVerdict:
    """Look for ``x`` (not a proper power, ``|x| <= bound``) with ``x^m ∈ H``, ``m >= 2``.

    Only words readable from the basepoint can have a power in H, so the
    search walks paths of the graph.
    """
    if root_len_bound < 1:
        raise ValueError("bound must be >= 1")
    from .words import root as word_root

    order = _letter_order(g.rank_ambient)
    stack: list[tuple[tuple[int, ...], int]] = [((), 0)]
    checked = 0
    while stack:
        w, v = stack.pop()
        if w and v != 0:
            checked += 1
            m = root_index(g, w)
            if m is not None and m >= 2:
                r, k = word_root(Word(reduce_letters(w), g.rank_ambient))
                return BoundedVerdict("impure", root_len_bound, r,
                                      {"power": m * k, "checked": checked})
        if len(w) < root_len_bound:
            for x in order:
                if w and w[-1] == -x:
                    continue
                t = g.step(v, x)
                if t is not None:
                    stack.append((w + (x,), t))
    return BoundedVerdict("pure-up-to-bound", root_len_bound, None, {"checked": checked})


def random_reduced_word(rng: random.Random, rank: int, length: int) -> tuple[int, ...]:
    letters = _letter_order(rank)
    w: list[int] = []
    while len(w) < length:
        x = rng.choice(letters)
        if w and w[-1] == -x:
            continue
        w.append(x)
    return tuple(w)


@dataclass
class InertiaReport:
    trials: int
    seed: int
    gen_len_bound: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "gen_len_bound": self.gen_len_bound,
            "violations": [
                {"K": [str(w) for w in ks], "rank_K": rk, "rank_H_cap_K": ri}
                for ks, rk, ri in self.violations
            ],
        }


def inertia_sample(g: SubgroupGraph, trials: int, gen_len_bound: int, seed: int) -> InertiaReport:
    """Check ``r(H ∩ K) <= r(K)`` on seeded random subgroups K."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    rank = g.rank_ambient
    report = InertiaReport(trials, seed, gen_len_bound)
    for _ in range(trials):
        n_gens = rng.randint(1, 3)
        gens = [Word(random_reduced_word(rng, rank, rng.randint(1, gen_len_bound)), rank)
                for _ in range(n_gens)]
        k = fold(gens, rank)
        rk = rank_of(k)
        ri = rank_of(intersection(g, k))
        if ri > rk:
            report.violations.append((gens, rk, ri))
    return report


class PreconditionError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


def _distance_to_core(g: SubgroupGraph) -> list[int]:
    c = cyclic_core(g)
    dist = [-1] * g.n_vertices
    queue = deque(c.vertices)
    for v in c.vertices:
        dist[v] = 0
    while queue:
        v = queue.popleft()
        for _, t in g.neighbours(v):
            if dist[t] < 0:
                dist[t] = dist[v] + 1
                queue.append(t)
    return dist


def coset_distance(g: SubgroupGraph, u: Word) -> int:
    """Distance in the Schreier graph from the vertex ``H u^-1`` to the cyclic core.

    Letters read past the finite graph run out along a hanging tree, each
    one adding a unit of distance.
    """
    dist = _distance_to_core(g)
    letters = invert_letters(u.letters)
    v = 0
    for i, x in enumerate(letters):
        t = g.step(v, x)
        if t is None:
            return dist[v] + len(letters) - i
        v = t
    return dist[v]


def coset_displacement_check(g: SubgroupGraph, h: Word, conjugators: Sequence[Word]) -> bool:
    """Every coset carrying a closed ``h``-path lies within ``|h|/2`` of the core."""
    if h.is_identity():
        raise PreconditionError("h must be non-trivial")
    if rank_of(g) == 0:
        raise PreconditionError("H is trivial, no conjugate of h lies in it")
    for u in conjugators:
        if not member(g, h.conj(u)):
            raise PreconditionError(f"h^u is not in H for u = {u}", witness=u)
    return all(2 * coset_distance(g, u) <= len(h) for u in conjugators)


class TracedFold:
    """Folding that remembers how paths spell products of the input words.

    Every edge carries a tag, a word over symbols ``1..m`` standing for the
    ``m`` input words.  Identifying two vertices records a group-valued
    offset in the union-find, so the tag of a closed path at the basepoint
    spells the element it reads as a product of the inputs.  When the inputs
    are not a free basis of what they generate, spellings are correct but
    not unique.
    """

    def __init__(self, words: Sequence[Word], rank: int):
        self.rank = rank
        self.parent: list[int] = []
        self.offset: list[tuple[int, ...]] = []
        self.out: list[dict | None] = []
        self.inc: list[dict | None] = []
        base = self._new()
        for i, w in enumerate(words):
            letters = w.letters
            v = base
            for j, x in enumerate(letters):
                t = base if j == len(letters) - 1 else self._new()
                self._add(v, x, t, (i + 1,) if j == 0 else ())
                v = t
        self.base, self.base_offset = self._find(base)

    def _new(self) -> int:
        self.parent.append(len(self.parent))
        self.offset.append(())
        self.out.append({})
        self.inc.append({})
        return len(self.parent) - 1

    def _find(self, v: int) -> tuple[int, tuple[int, ...]]:
        path = []
        while self.parent[v] != v:
            path.append(v)
            v = self.parent[v]
        root = v
        acc: tuple[int, ...] = ()
        for u in reversed(path):
            acc = concat_letters(acc, self.offset[u])
            self.offset[u] = acc
            self.parent[u] = root
        return (root, self.offset[path[0]]) if path else (root, ())

    def _norm_target(self, entry):
        t, tag = entry
        rt, ot = self._find(t)
        return rt, concat_letters(tag, invert_letters(ot))

    def _norm_source(self, entry):
        s, tag = entry
        rs, os_ = self._find(s)
        return rs, concat_letters(os_, tag)

    def _add(self, u: int, x: int, v: int, tag: tuple[int, ...]) -> None:
        pending = [(u, x, v, tag)]
        while pending:
            u, x, v, tag = pending.pop()
            if x < 0:
                u, v, x, tag = v, u, -x, invert_letters(tag)
            ru, ou = self._find(u)
            rv, ov = self._find(v)
            tag = concat_letters(concat_letters(ou, tag), invert_letters(ov))
            cur = self.out[ru].get(x)
            if cur is not None:
                t1, tag1 = self._norm_target(cur)
                if t1 != rv:
                    self._merge(t1, rv, concat_letters(invert_letters(tag1), tag), pending)
                continue
            cur = self.inc[rv].get(x)
            if cur is not None:
                s1, tag1 = self._norm_source(cur)
                if s1 != ru:
                    self._merge(s1, ru, concat_letters(tag1, invert_letters(tag)), pending)
                continue
            self.out[ru][x] = (rv, tag)
            self.inc[rv][x] = (ru, tag)

    def _merge(self, keep: int, gone: int, off: tuple[int, ...], pending) -> None:
        """Make root ``gone`` a child of root ``keep`` with offset ``off``."""
        moved = []
        for x, (t, tag) in self.out[gone].items():
            rt, _ = self._find(t)
            if rt != gone:
                del self.inc[rt][x]
            moved.append((gone, x, t, tag))
        for x, (s, tag) in self.inc[gone].items():
            rs, _ = self._find(s)
            if rs == gone:
                continue
            del self.out[rs][x]
            moved.append((s, x, gone, tag))
        self.out[gone] = self.inc[gone] = None
        self.parent[gone] = keep
        self.offset[gone] = off
        pending.extend(moved)

    def spell(self, w: Word) -> tuple[int, ...] | None:
        """Product of input-word symbols equal to ``w``, or None when ``w`` is not a member."""
        v = self.base
        acc: tuple[int, ...] = ()
        for x in w.letters:
            if x > 0:
                e = self.out[v].get(x)
                if e is None:
                    return None
                v, tag = self._norm_target(e)
            else:
                e = self.inc[v].get(-x)
                if e is None:
                    return None
                v, tag = self._norm_source(e)
                tag = invert_letters(tag)
            acc = concat_letters(acc, tag)
        if v != self.base:
            return None
        o = self.base_offset
        return concat_letters(concat_letters(invert_letters(o), acc), o)

"""Endomorphisms of a free group, acting on the right: ``x -> (x)f``.

``compose(f, g)`` applies ``f`` first and then ``g``; this matches the
right-action notation, so ``x (f g) = (x f) g``.
"""

from __future__ import annotations

import json
from typing import Sequence

from . import stallings
from .words import (
    Word,
    WordError,
    concat_letters,
    exponent_vector,
    format_letters,
    invert_letters,
    parse_letters,
    reduce_letters,
)


class MorphismError(ValueError):
    pass


def apply_letters(images: Sequence[tuple[int, ...]], inv_images: Sequence[tuple[int, ...]],
                  letters: Sequence[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        img = images[x - 1] if x > 0 else inv_images[-x - 1]
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


class Endomorphism:
    """Generator-image table of an endomorphism of the free group of rank ``rank``."""

    __slots__ = ("rank", "images", "inv_images", "_auto")

    def __init__(self, rank: int, images: Sequence[Sequence[int] | Word | str]):
        if len(images) != rank:
            raise MorphismError(f"expected {rank} images, got {len(images)}")
        imgs = []
        for im in images:
            if isinstance(im, Word):
                if im.rank != rank:
                    raise WordError(f"image {im} has rank {im.rank}, expected {rank}")
                letters = im.letters
            elif isinstance(im, str):
                letters = reduce_letters(parse_letters(im))
            else:
                letters = reduce_letters(im)
            for x in letters:
                if x == 0 or abs(x) > rank:
                    raise WordError(f"letter {x} out of range for rank {rank}")
            imgs.append(tuple(letters))
        self.rank = rank
        self.images = tuple(imgs)
        self.inv_images = tuple(invert_letters(im) for im in imgs)
        self._auto = None

    @classmethod
    def parse(cls, images: Sequence[str], rank: int | None = None) -> "Endomorphism":
        return cls(len(images) if rank is None else rank, list(images))

    @classmethod
    def identity(cls, rank: int) -> "Endomorphism":
        return cls(rank, [(k,) for k in range(1, rank + 1)])

    @classmethod
    def inversion(cls, rank: int) -> "Endomorphism":
        return cls(rank, [(-k,) for k in range(1, rank + 1)])

    @classmethod
    def from_json(cls, data: dict) -> "Endomorphism":
        return cls(int(data["rank"]), [str(w) for w in data["images"]])

    def to_json(self) -> dict:
        return {"rank": self.rank, "images": [format_letters(im) for im in self.images]}

    def __eq__(self, other) -> bool:
        return isinstance(other, Endomorphism) and (self.rank, self.images) == (other.rank, other.images)

    def __hash__(self) -> int:
        return hash((self.rank, self.images))

    def __repr__(self) -> str:
        names = [format_letters((k,)) for k in range(1, self.rank + 1)]
        body = ", ".join(f"{n}->{format_letters(im)}" for n, im in zip(names, self.images))
        return f"Endomorphism({body})"

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def image(self, k: int) -> Word:
        return Word(self.images[k - 1], self.rank)

    def apply_letters(self, letters: Sequence[int]) -> tuple[int, ...]:
        return apply_letters(self.images, self.inv_images, letters)

    def max_image_length(self) -> int:
        return max((len(im) for im in self.images), default=0)


def load(path) -> Endomorphism:
    with open(path) as fh:
        return Endomorphism.from_json(json.load(fh))


def _check(f: Endomorphism, w: Word) -> None:
    if w.rank != f.rank:
        raise WordError(f"rank mismatch: word rank {w.rank}, endomorphism rank {f.rank}")


def apply(f: Endomorphism, w: Word) -> Word:
    _check(f, w)
    return Word(f.apply_letters(w.letters), f.rank)


def compose(f: Endomorphism, g: Endomorphism) -> Endomorphism:
    """``f`` then ``g``."""
    if f.rank != g.rank:
        raise WordError("rank mismatch")
    return Endomorphism(f.rank, [g.apply_letters(im) for im in f.images])


def power(f: Endomorphism, k: int) -> Endomorphism:
    if k < 0:
        return power(invert_automorphism(f), -k)
    out = Endomorphism.identity(f.rank)
    for _ in range(k):
        out = compose(out, f)
    return out


def inner(y: Word) -> Endomorphism:
    """Right conjugation ``x -> y^-1 x y``."""
    yi = invert_letters(y.letters)
    return Endomorphism(y.rank, [concat_letters(concat_letters(yi, (k,)), y.letters)
                                 for k in range(1, y.rank + 1)])


def twist(f: Endomorphism, y: Word) -> Endomorphism:
    """``f`` followed by conjugation by ``y``; its fixed words form the eigengroup of ``y``."""
    _check(f, y)
    yi = invert_letters(y.letters)
    return Endomorphism(f.rank, [concat_letters(concat_letters(yi, im), y.letters) for im in f.images])


def image_graph(f: Endomorphism) -> stallings.SubgroupGraph:
    return stallings.fold(f.images, f.rank)


def is_automorphism(f: Endomorphism) -> bool:
    """Surjectivity test; free groups of finite rank are Hopfian."""
    if f._auto is None:
        f._auto = stallings.is_full_rose(image_graph(f))
    return f._auto


def invert_automorphism(f: Endomorphism) -> Endomorphism:
    """Inverse of an automorphism, by spelling each generator in the image words."""
    if not is_automorphism(f):
        raise MorphismError(f"{f} is not an automorphism")
    speller = stallings.TracedFold([Word(im, f.rank) for im in f.images], f.rank)
    images = []
    for k in range(1, f.rank + 1):
        expr = speller.spell(Word((k,), f.rank))
        assert expr is not None
        images.append(expr)
    inv = Endomorphism(f.rank, images)
    inv._auto = True
    if compose(f, inv) != Endomorphism.identity(f.rank):
        raise AssertionError("inverse failed its composition check")
    return inv


def restrict(f: Endomorphism, h: stallings.SubgroupGraph) -> tuple[Endomorphism, list[Word]]:
    """``f`` restricted to an invariant subgroup, in the coordinates of ``basis_of(h)``."""
    if h.rank_ambient != f.rank:
        raise WordError("rank mismatch")
    basis = stallings.basis_of(h)
    images = []
    for b in basis:
        im = apply(f, b)
        ok, sp = stallings.member(h, im, spell=True)
        if not ok:
            raise MorphismError(f"H is not invariant: image of {b} is {im}, not in H")
        images.append(sp.letters)
    img = stallings.fold([apply(f, b) for b in basis], f.rank)
    if not stallings.same_subgroup(img, h):
        raise MorphismError("H is not invariant: the images of its basis generate a proper subgroup")
    return Endomorphism(len(basis), images), basis


def unspell(w: Word, basis: Sequence[Word]) -> Word:
    """Translate a word in basis coordinates back to the ambient group."""
    rank = basis[0].rank if basis else 0
    out: tuple[int, ...] = ()
    for x in w.letters:
        b = basis[abs(x) - 1].letters
        out = concat_letters(out, b if x > 0 else invert_letters(b))
    return Word(out, rank)


def embed(w: Word, rank: int, offset: int = 0) -> Word:
    """Reinterpret ``w`` in a bigger free group, shifting generator indices."""
    if rank < w.rank + offset:
        raise WordError("target rank too small")
    return Word(tuple(x + offset if x > 0 else x - offset for x in w.letters), rank)


# --- abelianization -------------------------------------------------------------


def ab_matrix(f: Endomorphism) -> list[list[int]]:
    """Row ``i`` is the exponent vector of the image of generator ``i``."""
    return [exponent_vector(Word(im, f.rank)) for im in f.images]


def mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
            for i in range(len(a))]


def hermite_rows(m: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form: returns ``(H, U)`` with ``U m = H``, ``U`` unimodular."""
    rows = [list(r) for r in m]
    nr = len(rows)
    nc = len(rows[0]) if rows else 0
    u = [[int(i == j) for j in range(nr)] for i in range(nr)]
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        # gcd-eliminate column c below row r
        while True:
            piv = None
            for i in range(r, nr):
                if rows[i][c] != 0 and (piv is None or abs(rows[i][c]) < abs(rows[piv][c])):
                    piv = i
            if piv is None:
                break
            rows[r], rows[piv] = rows[piv], rows[r]
            u[r], u[piv] = u[piv], u[r]
            done = True
            for i in range(r + 1, nr):
                if rows[i][c]:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[r])]
                    if rows[i][c]:
                        done = False
            if done:
                break
        if all(rows[i][c] == 0 for i in range(r, nr)):
            continue
        if rows[r][c] < 0:
            rows[r] = [-a for a in rows[r]]
            u[r] = [-a for a in u[r]]
        for i in range(r):
            q = rows[i][c] // rows[r][c]
            if q:
                rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                u[i] = [a - q * b for a, b in zip(u[i], u[r])]
        r += 1
    return rows, u


def ab_solve(m: list[list[int]], v: Sequence[int]) -> list[int] | None:
    """Integer solution ``x`` of ``x m = v``, or None."""
    if not m:
        return [] if not any(v) else None
    if len(m[0]) != len(v):
        raise MorphismError("dimension mismatch")
    h, u = hermite_rows(m)
    nr, nc = len(h), len(v)
    rest = list(v)
    y = [0] * nr
    r = 0
    for c in range(nc):
        if r < nr and h[r][c] != 0 and all(h[r][k] == 0 for k in range(c)):
            if rest[c] % h[r][c]:
                return None
            q = rest[c] // h[r][c]
            y[r] = q
            rest = [a - q * b for a, b in zip(rest, h[r])]
            r += 1
        elif rest[c] != 0:
            return None
    if any(rest):
        return None
    x = [sum(y[i] * u[i][j] for i in range(nr)) for j in range(nr)]
    check = [sum(x[i] * m[i][j] for i in range(nr)) for j in range(nc)]
    assert check == list(v)
    return x


def is_primitive_abelianized(w: Word) -> bool:
    """gcd of the exponent sums is 1 (necessary, not sufficient, for primitivity)."""
    from math import gcd

    g = 0
    for e in exponent_vector(w):
        g = gcd(g, e)
    return g == 1


# --- Whitehead automorphisms -------------------------------------------------------


def whitehead(rank: int, subset, a: int) -> Endomorphism:
    """Whitehead automorphism ``(A, a)``: ``x -> a^-1? x a?`` by membership of ``x^-1``, ``x`` in ``A``.

    ``a`` must lie in ``A`` and ``a^-1`` must not.
    """
    subset = frozenset(subset)
    if a not in subset or -a in subset:
        raise MorphismError("need a in A and a^-1 not in A")
    images = []
    for k in range(1, rank + 1):
        if k == abs(a):
            images.append((k,))
            continue
        img = (k,)
        if -k in subset:
            img = (-a,) + img
        if k in subset:
            img = img + (a,)
        images.append(img)
    return Endomorphism(rank, images)


def whitehead_moves(rank: int) -> list[Endomorphism]:
    """All non-trivial Whitehead automorphisms of the second kind, without repeats."""
    letters = [x for k in range(1, rank + 1) for x in (k, -k)]
    seen = set()
    out = []
    for a in letters:
        rest = [x for x in letters if abs(x) != abs(a)]
        for mask in range(1 << len(rest)):
            subset = {a} | {x for i, x in enumerate(rest) if mask >> i & 1}
            w = whitehead(rank, subset, a)
            if w.images in seen or w == Endomorphism.identity(rank):
                continue
            seen.add(w.images)
            out.append(w)
    return out


def permutation_move(rank: int, perm: Sequence[int], signs: Sequence[int]) -> Endomorphism:
    """Whitehead automorphism of the first kind: ``a_k -> a_perm[k]^signs[k]``."""
    return Endomorphism(rank, [(signs[k] * (perm[k] + 1),) for k in range(rank)])


def random_automorphism(rng, rank: int, max_moves: int = 6) -> Endomorphism:
    """Seeded composition of 1..``max_moves`` random Whitehead automorphisms."""
    letters = [x for k in range(1, rank + 1) for x in (k, -k)]
    f = Endomorphism.identity(rank)
    for _ in range(rng.randint(1, max_moves)):
        if rng.random() < 0.2:
            perm = list(range(rank))
            rng.shuffle(perm)
            move = permutation_move(rank, perm, [rng.choice((1, -1)) for _ in range(rank)])
        else:
            a = rng.choice(letters)
            subset = {a} | {x for x in letters if abs(x) != abs(a) and rng.random() < 0.5}
            move = whitehead(rank, subset, a)
        f = compose(f, move)
    f._auto = True
    return f

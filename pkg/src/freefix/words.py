"""Reduced words in a free group of finite rank.

Letters are signed integers: ``k`` is the k-th generator and ``-k`` its
inverse.  The textual form uses ``a``..``z`` for generators, the uppercase
letter for the inverse and ``1`` for the identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_TEXT_RANK = 26


class WordError(ValueError):
    """Malformed word or a rank mismatch between operands."""


def letter_str(x: int) -> str:
    if x > 0:
        return chr(ord("a") + x - 1)
    return chr(ord("A") - x - 1)


def letter_key(x: int) -> int:
    # a < A < b < B < ...
    return 2 * abs(x) - (1 if x > 0 else 0)


def reduce_letters(raw: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in raw:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def concat_letters(u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
    """Freely reduced product of two reduced letter sequences."""
    i = 0
    n = min(len(u), len(v))
    while i < n and u[len(u) - 1 - i] == -v[i]:
        i += 1
    return tuple(u[: len(u) - i]) + tuple(v[i:])


def invert_letters(u: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in reversed(u))


def shortlex_key(u: Sequence[int]) -> tuple:
    return (len(u), tuple(letter_key(x) for x in u))


def parse_letters(text: str) -> tuple[int, ...]:
    letters = []
    for ch in text:
        if ch.isspace() or ch == "1":
            continue
        if "a" <= ch <= "z":
            letters.append(ord(ch) - ord("a") + 1)
        elif "A" <= ch <= "Z":
            letters.append(-(ord(ch) - ord("A") + 1))
        else:
            raise WordError(f"bad character {ch!r} in word {text!r}")
    return tuple(letters)


def format_letters(u: Sequence[int]) -> str:
    if not u:
        return "1"
    return "".join(letter_str(x) for x in u)


@dataclass(frozen=True, slots=True)
class Word:
    """A freely reduced word together with the rank of its ambient group.

    Construct with :func:`reduce` or :meth:`Word.parse`; the constructor
    itself trusts its input.
    """

    letters: tuple[int, ...]
    rank: int

    @classmethod
    def parse(cls, text: str, rank: int) -> "Word":
        return reduce(parse_letters(text), rank)

    @classmethod
    def identity(cls, rank: int) -> "Word":
        return cls((), rank)

    @classmethod
    def generator(cls, index: int, rank: int) -> "Word":
        return reduce((index,), rank)

    def __str__(self) -> str:
        return format_letters(self.letters)

    def __repr__(self) -> str:
        return f"Word({format_letters(self.letters)!r}, rank={self.rank})"

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else invert(self)
        out: tuple[int, ...] = ()
        for _ in range(abs(k)):
            out = concat_letters(out, base.letters)
        return Word(out, self.rank)

    def is_identity(self) -> bool:
        return not self.letters

    def conj(self, y: "Word") -> "Word":
        """Right conjugate ``y^-1 self y``."""
        return invert(y) * self * y

    def sort_key(self) -> tuple:
        return shortlex_key(self.letters)


def _check_rank(letters: Iterable[int], rank: int) -> None:
    if rank < 0:
        raise WordError(f"rank must be non-negative, got {rank}")
    for x in letters:
        if x == 0 or abs(x) > rank:
            raise WordError(f"letter {x} out of range for rank {rank}")


def reduce(raw: Iterable[int] | str, rank: int) -> Word:
    if isinstance(raw, str):
        raw = parse_letters(raw)
    raw = tuple(raw)
    _check_rank(raw, rank)
    return Word(reduce_letters(raw), rank)


def _same_rank(u: Word, v: Word) -> None:
    if u.rank != v.rank:
        raise WordError(f"rank mismatch: {u.rank} vs {v.rank}")


def concat(u: Word, v: Word) -> Word:
    _same_rank(u, v)
    return Word(concat_letters(u.letters, v.letters), u.rank)


def invert(u: Word) -> Word:
    return Word(invert_letters(u.letters), u.rank)


def cyclic_reduce(u: Word) -> tuple[Word, Word]:
    """Split ``u`` as ``conjugator * core * conjugator^-1``."""
    w = u.letters
    i = 0
    while len(w) - 2 * i >= 2 and w[i] == -w[len(w) - 1 - i]:
        i += 1
    core = w[i : len(w) - i]
    return Word(core, u.rank), Word(w[:i], u.rank)


def _primitive_period(w: tuple[int, ...]) -> int:
    n = len(w)
    for p in range(1, n // 2 + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return p
    return n


def root(u: Word) -> tuple[Word, int]:
    """Return ``(r, k)`` with ``u == r**k`` and ``r`` not a proper power."""
    if u.is_identity():
        raise WordError("the identity has no root")
    core, conj = cyclic_reduce(u)
    p = _primitive_period(core.letters)
    r = Word(core.letters[:p], u.rank)
    return conj * r * invert(conj), len(core) // p


def is_proper_power(u: Word) -> bool:
    return not u.is_identity() and root(u)[1] > 1


def cyclic_normal_form(letters: Sequence[int]) -> tuple[int, ...]:
    """Least cyclic rotation (shortlex) of the cyclic reduction."""
    w = tuple(letters)
    i = 0
    while len(w) - 2 * i >= 2 and w[i] == -w[len(w) - 1 - i]:
        i += 1
    core = w[i : len(w) - i]
    if not core:
        return ()
    rots = [core[k:] + core[:k] for k in range(len(core))]
    return min(rots, key=shortlex_key)


def conjugator(u: Word, v: Word) -> Word | None:
    """Some ``c`` with ``c^-1 u c == v``, or None when not conjugate."""
    _same_rank(u, v)
    cu, su = cyclic_reduce(u)
    cv, sv = cyclic_reduce(v)
    if len(cu) != len(cv):
        return None
    if not cu.letters:
        return Word.identity(u.rank)
    a, b = cu.letters, cv.letters
    n = len(a)
    for k in range(n):
        if a[k:] + a[:k] == b:
            # a rotated by k equals b: b = p^-1 a p with p = a[:k]
            p = Word(a[:k], u.rank)
            c = su * p * invert(sv)
            assert invert(c) * u * c == v
            return c
    return None


def exponent_vector(u: Word) -> list[int]:
    vec = [0] * u.rank
    for x in u.letters:
        vec[abs(x) - 1] += 1 if x > 0 else -1
    return vec


def all_reduced_words(rank: int, max_len: int) -> list[tuple[int, ...]]:
    """Every reduced letter tuple of length at most ``max_len``, shortlex."""
    letters = [x for k in range(1, rank + 1) for x in (k, -k)]
    out = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        out.extend(nxt)
        frontier = nxt
    return out

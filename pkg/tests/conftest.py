import os
import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from freefix.morphisms import random_automorphism
from freefix.words import Word, reduce

settings.register_profile("default", max_examples=60, deadline=None)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def letters(rank: int, max_size: int = 12):
    return st.lists(st.sampled_from([x for k in range(1, rank + 1) for x in (k, -k)]), max_size=max_size)


def words(rank: int, max_size: int = 12):
    return letters(rank, max_size).map(lambda w: reduce(w, rank))


def w(text: str, rank: int) -> Word:
    return Word.parse(text, rank)


@st.composite
def automorphisms(draw, ranks=(2, 3), max_moves=6):
    seed = draw(st.integers(0, 2**32 - 1))
    rank = draw(st.sampled_from(ranks))
    return random_automorphism(random.Random(seed), rank, max_moves)


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])

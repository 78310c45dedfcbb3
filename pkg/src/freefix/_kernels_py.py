"""Pure-Python prefix-displacement tree, used when the compiled kernel is missing."""

from __future__ import annotations

from typing import Sequence

import numpy as np

BACKEND = "python"


def displacement_tree(pre_images: Sequence[Sequence[int]], rank: int, depth: int, cap: int):
    """Breadth-first tree of reduced prefixes with their displacements.

    ``pre_images[i]`` is the inverse image word of the i-th signed letter in
    the order ``a, A, b, B, ...``.  A prefix ``p`` has displacement
    ``d(p) = (p f)^-1 p``, updated as ``d(px) = (x f)^-1 d(p) x``.  Prefixes
    whose displacement is longer than ``cap`` are dropped with their
    subtrees.  Prefixes sharing a displacement share a state id.

    Returns ``(parent, letter, level, state, n_states, pruned)``.
    """
    if len(pre_images) != 2 * rank:
        raise ValueError("need one pre-image per signed letter")
    letters = [x for k in range(1, rank + 1) for x in (k, -k)]
    pre = [tuple(p) for p in pre_images]
    parent = [-1]
    letter = [0]
    level = [0]
    state = [0]
    disp: list[tuple[int, ...]] = [()]
    ids: dict[tuple[int, ...], int] = {(): 0}
    pruned = 0
    start, end = 0, 1
    for k in range(1, depth + 1):
        for node in range(start, end):
            last = letter[node]
            d = disp[node]
            for li, x in enumerate(letters):
                if x == -last:
                    continue
                out = list(pre[li])
                for y in d:
                    if out and out[-1] == -y:
                        out.pop()
                    else:
                        out.append(y)
                if out and out[-1] == -x:
                    out.pop()
                else:
                    out.append(x)
                if len(out) > cap:
                    pruned += 1
                    continue
                t = tuple(out)
                s = ids.get(t)
                if s is None:
                    s = ids[t] = len(ids)
                parent.append(node)
                letter.append(x)
                level.append(k)
                state.append(s)
                disp.append(t)
        start, end = end, len(parent)
    return (
        np.asarray(parent, dtype=np.int64),
        np.asarray(letter, dtype=np.int32),
        np.asarray(level, dtype=np.int32),
        np.asarray(state, dtype=np.int64),
        len(ids),
        pruned,
    )

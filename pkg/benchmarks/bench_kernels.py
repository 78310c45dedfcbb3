"""Time the compiled and pure-Python displacement-tree kernels on corpus maps."""

import argparse
import statistics
import time

from freefix import kernels
from freefix.morphisms import Endomorphism

CASES = {
    "ex1": (["a", "ab", "dc", "dcd", "BabCDcde", "bfb"], 5, 64),
    "ex2": (["BAbaBab", "BAbabABab", "BAbaaabbc"], 7, 48),
    "abcd": (["a", "ab", "dc", "dcd"], 7, 48),
}


def pre_images(f: Endomorphism) -> list:
    out = []
    for k in range(f.rank):
        out.append(f.inv_images[k])
        out.append(f.images[k])
    return out


def timed(backend, pre, rank, depth, cap, repeat):
    runs = []
    for _ in range(repeat):
        t = time.perf_counter()
        res = backend.displacement_tree(pre, rank, depth, cap)
        runs.append(time.perf_counter() - t)
    return statistics.median(runs), len(res[0])


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--depth", type=int, help="override the per-case tree depth")
    args = p.parse_args(argv)
    if kernels.compiled_backend is None:
        print("compiled kernel not built; reinstall without FREEFIX_NO_EXT")
        return 1
    print(f"{'case':6} {'depth':>5} {'nodes':>9} {'python s':>9} {'cython s':>9} {'speedup':>8}")
    for name, (images, depth, cap) in CASES.items():
        f = Endomorphism.parse(images)
        depth = args.depth or depth
        pre = pre_images(f)
        tp, n = timed(kernels.python_backend, pre, f.rank, depth, cap, args.repeat)
        tc, m = timed(kernels.compiled_backend, pre, f.rank, depth, cap, args.repeat)
        if n != m:
            raise SystemExit(f"{name}: backends disagree on node count ({n} vs {m})")
        print(f"{name:6} {depth:5d} {n:9d} {tp:9.3f} {tc:9.3f} {tp / tc:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

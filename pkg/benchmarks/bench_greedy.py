"""Benchmark the compiled greedy-matching kernel against the numpy fallback.

The kernel runs once per profile pair while building the O(N^2) similarity
matrix, so per-call overhead at the small grid sizes typical of word
profiles is what matters most.

Usage: python benchmarks/bench_greedy.py [--sizes 4,8,16,32,64,128] [--repeats 2000]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from tagrec._greedy_pure import greedy_match as pure_kernel

try:
    from tagrec._greedy import greedy_match as native_kernel
except ImportError:
    native_kernel = None


def time_kernel(kernel, grids, repeats: int) -> float:
    start = time.perf_counter()
    for _ in range(repeats):
        for grid in grids:
            kernel(grid)
    return (time.perf_counter() - start) / (repeats * len(grids))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="4,8,16,32,64,128", help="comma-separated square grid sizes")
    parser.add_argument("--repeats", type=int, default=2000, help="timing repetitions per grid")
    parser.add_argument("--grids-per-size", type=int, default=5)
    args = parser.parse_args()

    if native_kernel is None:
        print("compiled kernel not built; showing the numpy fallback only")

    rng = np.random.default_rng(0)
    sizes = [int(s) for s in args.sizes.split(",")]
    print(f"{'size':>6} {'pure (us)':>12} {'native (us)':>12} {'speedup':>9}")
    for size in sizes:
        grids = [np.ascontiguousarray(rng.random((size, size))) for _ in range(args.grids_per_size)]
        repeats = max(1, args.repeats // size)
        t_pure = time_kernel(pure_kernel, grids, repeats)
        if native_kernel is None:
            print(f"{size:>6} {t_pure * 1e6:>12.2f} {'-':>12} {'-':>9}")
            continue
        for grid in grids:  # outputs must agree bit-for-bit
            assert native_kernel(grid) == pure_kernel(grid)
        t_native = time_kernel(native_kernel, grids, repeats)
        print(f"{size:>6} {t_pure * 1e6:>12.2f} {t_native * 1e6:>12.2f} {t_pure / t_native:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

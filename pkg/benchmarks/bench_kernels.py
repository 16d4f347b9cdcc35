#!/usr/bin/env python3
"""Benchmark the compiled pairwise kernels against the blocked-numpy
fallback.

Usage: python benchmarks/bench_kernels.py [--sizes 300,2000] [--repeats 5]
"""

import argparse
import time

import numpy as np

from ginicorr import _kernels_np

try:
    from ginicorr import _kernels as compiled
except ImportError:
    compiled = None

KERNELS = (
    ("symgini_components", lambda k, x, y: k.symgini_components(x, y)),
    ("regular_gini_sums", lambda k, x, y: k.regular_gini_sums(x, y)),
    ("kendall_stats", lambda k, x, y: k.kendall_stats(x, y)),
    ("kendall_g_all", lambda k, x, y: k.kendall_g_all(x, y)),
    ("gini_g_all", lambda k, x, y: k.gini_g_all(x, y)),
    ("scatter_pair_sums", lambda k, x, y: k.scatter_pair_sums(x, y, 1.1, -0.2, 0.9)),
    ("if_sums_all", lambda k, x, y: k.if_sums_all(x, y)),
)


def best_time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="300,2000")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if compiled is None:
        print("compiled extension not available; timing the numpy fallback only")

    rng = np.random.default_rng(0)
    print(f"{'kernel':22s} {'n':>6s} {'numpy':>10s} {'compiled':>10s} {'speedup':>8s}")
    for n in sizes:
        x = rng.normal(size=n)
        y = 0.5 * x + rng.normal(size=n)
        for name, call in KERNELS:
            t_np = best_time(lambda: call(_kernels_np, x, y), args.repeats)
            if compiled is not None:
                t_c = best_time(lambda: call(compiled, x, y), args.repeats)
                print(f"{name:22s} {n:6d} {t_np*1e3:9.2f}ms {t_c*1e3:9.2f}ms {t_np/t_c:7.1f}x")
            else:
                print(f"{name:22s} {n:6d} {t_np*1e3:9.2f}ms {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()

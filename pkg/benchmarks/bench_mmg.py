"""Compiled vs pure-numpy MMG update kernel.

Usage: python3 benchmarks/bench_mmg.py [--n 100000] [--counters 64,1024] [--repeat 3]

Feeds bucketed N(0, 5) samples (b = 0.05) through both versions of the kernel,
checks that they leave identical state and prints the best-of-``repeat`` time.
"""

import argparse
import time

import numpy as np

from streamdist._jit import USE_NUMBA, python_version
from streamdist.bucketing import BucketSpec, bucket_indices
from streamdist.mmg import _mmg_update_batch


def run(kernel, xs, ws, k):
    items = np.zeros(k, dtype=np.int64)
    counts = np.zeros(k, dtype=np.uint64)
    t0 = time.perf_counter()
    size, _ = kernel(items, counts, 0, k // 2, xs, ws)
    dt = time.perf_counter() - t0
    return dt, items[:size].copy(), counts[:size].copy()


def best_of(kernel, xs, ws, k, repeat):
    runs = [run(kernel, xs, ws, k) for _ in range(repeat)]
    return min(r[0] for r in runs), runs[0][1], runs[0][2]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--counters", default="64,1024")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    xs = bucket_indices(rng.normal(0, 5, args.n), BucketSpec(0.05))
    ws = np.ones(args.n, dtype=np.uint64)
    py = python_version(_mmg_update_batch)
    if USE_NUMBA:
        run(_mmg_update_batch, xs[:10], ws[:10], 8)  # compile outside the timed region
    else:
        print("numba disabled; both columns time the Python kernel")

    print(f"{'k':>6} {'numba_ms':>10} {'python_ms':>10} {'speedup':>8}  same_state")
    for k in (int(v) for v in args.counters.split(",")):
        t_jit, i1, c1 = best_of(_mmg_update_batch, xs, ws, k, args.repeat)
        t_py, i2, c2 = best_of(py, xs, ws, k, max(1, args.repeat // 3))
        same = np.array_equal(i1, i2) and np.array_equal(c1, c2)
        print(f"{k:>6} {t_jit * 1e3:>10.2f} {t_py * 1e3:>10.1f} {t_py / t_jit:>8.1f}  {same}")


if __name__ == "__main__":
    main()

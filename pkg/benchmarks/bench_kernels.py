#!/usr/bin/env python3
"""Benchmark the compiled fold-assignment kernel against the pure one.

Both backends produce bit-identical assignments (verified here on every
size); this script only measures speed. Run from the repo root:

    python benchmarks/bench_kernels.py
"""

from __future__ import annotations

import time

import numpy as np

from yolofold import _kernel_py
from yolofold.rng import SplitMix64

try:
    from yolofold import _speedups
except ImportError:
    _speedups = None

SIZES = [
    (500, 8, 5),
    (2_000, 12, 10),
    (10_000, 24, 10),
    (50_000, 40, 10),
]
REPEATS = 3


def make_case(n: int, n_labels: int, seed: int):
    rng = np.random.default_rng(seed)
    labels = rng.random((n, n_labels)) * rng.choice(
        [0.0, 1.0, 2.0, 400.0], size=(n, n_labels))
    order = list(range(n))
    SplitMix64(seed).shuffle(order)
    return labels, order


def time_backend(fn, labels, k, order, tie_seed) -> tuple[float, list[int]]:
    best = float("inf")
    result = None
    for _ in range(REPEATS):
        start = time.perf_counter()
        result = fn(labels, k, order, tie_seed)
        best = min(best, time.perf_counter() - start)
    return best, list(result)


def main() -> None:
    if _speedups is None:
        print("compiled kernel not built; showing pure-python timings only")
    print(f"{'images':>8} {'labels':>7} {'k':>3} {'pure (s)':>10} "
          f"{'compiled (s)':>13} {'speedup':>8}")
    for n, n_labels, k in SIZES:
        labels, order = make_case(n, n_labels, seed=n)
        pure_t, pure_out = time_backend(
            _kernel_py.assign_stratified, labels, k, order, 42)
        if _speedups is None:
            print(f"{n:>8} {n_labels:>7} {k:>3} {pure_t:>10.4f} {'-':>13} {'-':>8}")
            continue
        fast_t, fast_out = time_backend(
            _speedups.assign_stratified, labels, k, order, 42)
        assert pure_out == fast_out, "backends disagree"
        print(f"{n:>8} {n_labels:>7} {k:>3} {pure_t:>10.4f} "
              f"{fast_t:>13.4f} {pure_t / fast_t:>7.1f}x")


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Time the compiled kernels against the NumPy fallback.

Run from the repository root after an editable install:

    python benchmarks/bench_kernels.py [--repeats 5]

Prints one row per kernel with the best wall time of each backend and the
speedup of the compiled one.  Exits with a note instead of a table when the
compiled extension is not built.
"""

import argparse
import time

import numpy as np

from qcskew import _kernels_py

try:
    from qcskew import _kernels_cy
except ImportError:
    _kernels_cy = None


def best_time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def make_cases(rng):
    n_tri = 10**6
    a = rng.standard_normal(n_tri) + 1j * rng.standard_normal(n_tri)
    b = a + 0.5 * (rng.standard_normal(n_tri) + 1j * rng.standard_normal(n_tri))
    c = a + 0.5 * (rng.standard_normal(n_tri) + 1j * rng.standard_normal(n_tri))
    circle = np.exp(1j * np.linspace(0.0, 2.0 * np.pi, 10**6, endpoint=False))
    poly = np.exp(1j * np.linspace(0.0, 2.0 * np.pi, 4096, endpoint=False))
    return [
        ("skew_batch (1e6 triangles)", lambda impl: impl.skew_batch(a, b, c)),
        ("circle_minmax (1e6 points)", lambda impl: impl.circle_minmax(0.1 + 0.2j, circle)),
        ("ratio_scan (mu=0.5, 1e6)", lambda impl: impl.ratio_scan(0.5, 10**6)),
        ("polygon_diameter (4096 pts)", lambda impl: impl.polygon_diameter(poly)),
        ("polygon_area (4096 pts)", lambda impl: impl.polygon_area_signed(poly)),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    cases = make_cases(rng)
    if _kernels_cy is None:
        print("compiled extension not built; only the NumPy fallback is available")
        for name, fn in cases:
            t = best_time(lambda: fn(_kernels_py), args.repeats)
            print(f"{name:<30} python {1000 * t:8.2f} ms")
        return

    print(f"{'kernel':<30} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for name, fn in cases:
        tp = best_time(lambda: fn(_kernels_py), args.repeats)
        tc = best_time(lambda: fn(_kernels_cy), args.repeats)
        print(f"{name:<30} {1000 * tp:10.2f} {1000 * tc:10.2f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()

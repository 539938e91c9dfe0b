#!/usr/bin/env python3
"""Benchmark the truncated-series kernels: numba JIT vs pure numpy.

Run from the repository root:

    PYTHONPATH=src python3 benchmarks/bench_kernels.py [--repeats N]

The numba path is warmed up (and its compilation cached) before timing,
so the table reports steady-state per-call cost.
"""

import argparse
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from funcseries import _kernels  # noqa: E402

ORDERS = [16, 64, 256, 1024]
RNG = np.random.default_rng(7)


def random_series(order, nonzero0=False, zero0=False):
    c = RNG.normal(size=order + 1) + 1j * RNG.normal(size=order + 1)
    if nonzero0:
        c[0] += 2.0
    if zero0:
        c[0] = 0.0
    return np.ascontiguousarray(c)


def time_call(fn, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=7)
    ns = ap.parse_args()

    backends = sorted(_kernels.IMPLEMENTATIONS)
    print(f"backends available: {', '.join(backends)} (active: {_kernels.BACKEND})")
    if "numba" not in backends:
        print("numba not importable; timing the numpy path only")

    header = f"{'op':16s} {'order':>6s}" + "".join(f" {b:>12s}" for b in backends)
    if len(backends) == 2:
        header += f" {'speedup':>9s}"
    print(header)
    print("-" * len(header))

    for op in ("series_mul", "series_div", "series_compose"):
        for order in ORDERS:
            a = random_series(order)
            b = random_series(order, nonzero0=True)
            if op == "series_compose":
                args = (a, random_series(order, zero0=True), order)
            else:
                args = (a, b, order)
            times = {}
            for backend in backends:
                fn = _kernels.IMPLEMENTATIONS[backend][op]
                fn(*args)  # warm up (JIT compile on first numba call)
                times[backend] = time_call(fn, args, ns.repeats)
            row = f"{op:16s} {order:6d}"
            for backend in backends:
                row += f" {times[backend] * 1e6:10.1f}us"
            if len(backends) == 2:
                row += f" {times['numpy'] / times['numba']:8.2f}x"
            print(row)


if __name__ == "__main__":
    main()

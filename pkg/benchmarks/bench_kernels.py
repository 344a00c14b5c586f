#!/usr/bin/env python3
"""Benchmark the compiled partial-sum kernel against the NumPy fallback.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from spectre import _kernels
from spectre._kernels import py_partial_sums_at


def make_runs(nruns):
    ks = np.arange(1, nruns + 1, dtype=np.float64)
    return 1.0 / ks, np.full(nruns, 2, dtype=np.int64)


def bench(fn, values, counts, checkpoints, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(values, counts, checkpoints)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    print(f"active kernel implementation: {_kernels.IMPL}")
    checkpoints = np.array([10**4, 10**5, 10**6, 10**7], dtype=np.int64)
    values, counts = make_runs(6 * 10**6)
    impls = [("numpy fallback", py_partial_sums_at)]
    try:
        from spectre._kernels import _core
        impls.append(("cython", _core.partial_sums_at))
    except ImportError:
        print("compiled kernel unavailable; benchmarking fallback only")
    results = {}
    for name, fn in impls:
        best, out = bench(fn, values, counts, checkpoints)
        results[name] = (best, out)
        print(f"{name:>16}: {best*1e3:8.2f} ms   "
              f"sums={np.array2string(out, precision=4)}")
    if len(results) == 2:
        ref = results["numpy fallback"][1]
        alt = results["cython"][1]
        assert np.allclose(ref, alt, rtol=0, atol=1e-9), \
            "implementations disagree"
        speed = results["numpy fallback"][0] / results["cython"][0]
        print(f"speedup: {speed:.1f}x")


if __name__ == "__main__":
    main()

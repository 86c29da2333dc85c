#!/usr/bin/env python3
"""Benchmark the compiled core against the numpy fallback.

Times the three hot elementwise kernels on large arrays and the full
spectrum estimation end to end under each backend.  Run from the repo
root after building the extension:

    python setup.py build_ext --inplace
    python benchmarks/bench_backends.py [--samples N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from pml._core import _pure

try:
    from pml._core import _speedups
except ImportError:
    _speedups = None


def time_call(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_elementwise(n):
    rng = np.random.default_rng(1)
    # mixture covering every branch of each kernel
    x = np.ascontiguousarray(
        np.concatenate(
            [
                rng.uniform(-0.2, 0.2, n // 4),
                rng.uniform(-4.0, 4.0, n // 2),
                rng.uniform(-12.0, 12.0, n - n // 4 - n // 2),
            ]
        )
    )
    print(f"\nelementwise kernels on {n:,} points (best of 5):")
    header = f"  {'function':<10} {'numpy':>12} {'cython':>12} {'speedup':>9}"
    print(header)
    for name in ("erf", "dawson", "k2"):
        t_py = time_call(getattr(_pure, name), x)
        if _speedups is not None:
            t_cy = time_call(getattr(_speedups, name), x)
            print(f"  {name:<10} {t_py * 1e3:>10.2f}ms {t_cy * 1e3:>10.2f}ms {t_py / t_cy:>8.1f}x")
        else:
            print(f"  {name:<10} {t_py * 1e3:>10.2f}ms {'n/a':>12} {'':>9}")


def bench_pipeline(samples):
    """simulate + estimate l=0..10 in a subprocess per backend."""
    import tempfile

    phases = 120
    print(f"\nend-to-end spectrum ({phases} phases x {samples} samples, l = 0..10, s = -1):")
    with tempfile.TemporaryDirectory() as tmp:
        data = os.path.join(tmp, "d.csv")
        subprocess.run(
            [sys.executable, "-m", "pml.cli", "simulate", "--state", "sv",
             "--zeta", "1.317", "--psi", "0", "--eta", "0.8",
             "--phases", str(phases), "--samples", str(samples),
             "--seed", "7", "-o", data],
            check=True, capture_output=True,
        )
        results = {}
        for backend in ("python", "cython"):
            if backend == "cython" and _speedups is None:
                print("  cython     n/a (extension not built)")
                continue
            env = dict(os.environ, PML_BACKEND=backend)
            out = os.path.join(tmp, f"m_{backend}.json")
            best = float("inf")
            for _ in range(3):
                t0 = time.perf_counter()
                subprocess.run(
                    [sys.executable, "-m", "pml.cli", "estimate", "-i", data,
                     "--l", "0:10", "--s", "-1", "-o", out],
                    check=True, capture_output=True, env=env,
                )
                best = min(best, time.perf_counter() - t0)
            results[backend] = best
            with open(out) as fh:
                rec = next(r for r in json.load(fh)["moments"] if r["l"] == 2)
            print(f"  {backend:<10} {best:>8.2f}s   Psi_2 = {rec['re']:+.6f} +- {rec['stderr_re']:.6f}")
        if len(results) == 2:
            print(f"  speedup    {results['python'] / results['cython']:.2f}x (includes interpreter startup and I/O)")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--points", type=int, default=2_000_000,
                        help="array length for the elementwise benchmark")
    parser.add_argument("--samples", type=int, default=5000,
                        help="samples per phase for the pipeline benchmark")
    args = parser.parse_args()
    print(f"compiled extension available: {_speedups is not None}")
    bench_elementwise(args.points)
    bench_pipeline(args.samples)


if __name__ == "__main__":
    main()

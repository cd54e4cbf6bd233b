#!/usr/bin/env python3
"""Benchmark the compiled split-step kernels against the numpy fallback.

Times the two pointwise kernels in isolation and one full Strang evolution
under each backend, printing a small table with speedups.
"""

import argparse
import math
import time

import numpy as np

from causticnls import _kernels_py
from causticnls import kernels
from causticnls.propagators import RunConfig, SemiclassicalParams, SplitScheme, evolve
from causticnls.spectral import GridSpec, WaveField

try:
    from causticnls import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None


def time_call(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_pointwise(sizes, repeat):
    rng = np.random.default_rng(7)
    print(f"{'kernel':24s} {'N':>8s} {'numpy':>12s} {'cython':>12s} {'speedup':>8s}")
    for n in sizes:
        u = (rng.standard_normal(n) + 1j * rng.standard_normal(n)).astype(np.complex128)
        m = np.exp(-0.05j * np.arange(n) ** 2 % (2 * np.pi))
        for label, py_fn, cy_fn in [
            (
                "nonlinear_phase sigma=2",
                lambda: _kernels_py.nonlinear_phase_inplace(u.copy(), 1e-3, 2.0),
                (lambda: _kernels_cy.nonlinear_phase_inplace(u.copy(), 1e-3, 2.0))
                if _kernels_cy
                else None,
            ),
            (
                "multiply",
                lambda: _kernels_py.multiply_inplace(u.copy(), m),
                (lambda: _kernels_cy.multiply_inplace(u.copy(), m)) if _kernels_cy else None,
            ),
        ]:
            t_py = time_call(py_fn, repeat)
            if cy_fn is None:
                print(f"{label:24s} {n:8d} {t_py * 1e6:10.1f}us {'n/a':>12s} {'n/a':>8s}")
            else:
                t_cy = time_call(cy_fn, repeat)
                print(
                    f"{label:24s} {n:8d} {t_py * 1e6:10.1f}us {t_cy * 1e6:10.1f}us "
                    f"{t_py / t_cy:7.2f}x"
                )


def bench_evolution(n, steps, repeat):
    grid = GridSpec(0.0, 2.0 * math.pi, n)
    x = grid.nodes() - math.pi
    u0 = WaveField(grid, np.exp(-2.0 * x * x).astype(np.complex128))
    params = SemiclassicalParams(epsilon=1.0, sigma=2.0, alpha=1.0, coupling=1.0)
    dt = 1e-3
    cfg = RunConfig(params, SplitScheme.STRANG, steps * dt, dt)

    backends = [("numpy", _kernels_py)]
    if _kernels_cy is not None:
        backends.append(("cython", _kernels_cy))

    print(f"\nfull Strang evolution, N={n}, {steps} steps:")
    times = {}
    saved = (kernels.nonlinear_phase_inplace, kernels.multiply_inplace)
    try:
        for label, impl in backends:
            kernels.nonlinear_phase_inplace = impl.nonlinear_phase_inplace
            kernels.multiply_inplace = impl.multiply_inplace
            times[label] = time_call(lambda: evolve(u0, cfg), repeat)
            print(f"  {label:8s} {times[label] * 1e3:10.1f} ms")
    finally:
        kernels.nonlinear_phase_inplace, kernels.multiply_inplace = saved
    if "cython" in times:
        print(f"  speedup  {times['numpy'] / times['cython']:10.2f}x")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", type=int, nargs="+", default=[1024, 4096, 8192, 32768])
    parser.add_argument("--steps", type=int, default=500)
    parser.add_argument("--repeat", type=int, default=7)
    args = parser.parse_args()

    if _kernels_cy is None:
        print("compiled extension not available; timing the numpy fallback only\n")
    bench_pointwise(args.sizes, args.repeat)
    bench_evolution(max(args.sizes), args.steps, max(3, args.repeat // 2))


if __name__ == "__main__":
    main()

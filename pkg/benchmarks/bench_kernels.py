#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the three hot loops (Levinson recursion, direct convolution, series
exponential) at several sizes and prints a comparison table.  Run after an
editable install; if the extension is missing only the fallback column is
reported.
"""

import time

import numpy as np

from opuclab._kernels import _pure

try:
    from opuclab._kernels import _fast
except ImportError:
    _fast = None


def _timeit(fn, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _moments(n):
    # geometric Bernstein-Szego moments: positive definite at any order
    return (0.4 ** np.arange(n + 1) / (1 - 0.16)).astype(np.complex128)


def bench_levinson(sizes=(256, 1024, 4096)):
    for n in sizes:
        m = _moments(n)
        yield (f"levinson N={n}",
               _timeit(lambda: _pure.levinson(m, n)),
               _timeit(lambda: _fast.levinson(m, n)) if _fast else None)


def bench_convolve(sizes=(64, 127)):
    rng = np.random.default_rng(7)
    for n in sizes:
        a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        b = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        yield (f"convolve_direct len={n}",
               _timeit(lambda: _pure.convolve_direct(a, b), repeat=20),
               _timeit(lambda: _fast.convolve_direct(a, b), repeat=20)
               if _fast else None)


def bench_exp(sizes=(256, 1024, 4096)):
    for n in sizes:
        f = np.zeros(n + 1, dtype=np.complex128)
        f[1:] = 0.5 ** np.arange(1, n + 1) / np.arange(1, n + 1)
        yield (f"exp_series N={n}",
               _timeit(lambda: _pure.exp_series(f, n)),
               _timeit(lambda: _fast.exp_series(f, n)) if _fast else None)


def main():
    print(f"{'kernel':28s} {'numpy (s)':>12s} {'cython (s)':>12s} {'speedup':>9s}")
    rows = list(bench_levinson()) + list(bench_convolve()) + list(bench_exp())
    for name, t_pure, t_fast in rows:
        if t_fast is None:
            print(f"{name:28s} {t_pure:12.6f} {'n/a':>12s} {'n/a':>9s}")
        else:
            print(f"{name:28s} {t_pure:12.6f} {t_fast:12.6f} {t_pure / t_fast:8.1f}x")
    if _fast is None:
        print("\ncompiled extension not available; rebuild with "
              "`pip install -e . --no-build-isolation`")


if __name__ == "__main__":
    main()

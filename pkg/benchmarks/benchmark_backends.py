#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback path.

Times the three hot kernels (power iteration, Aberth rooting, Jacobi EVD)
on representative problem sizes, plus LAPACK ``eigh`` as the EVD
reference.  Run once normally and once with ``RPIDOA_NO_NUMBA=1`` to
compare end-to-end, or just run this script: it exercises both code
paths in-process.
"""

import time

import numpy as np

from rpidoa._backend import HAS_NUMBA
from rpidoa._kernels import (
    _aberth_compiled,
    _aberth_vectorized,
    _power_iteration_body,
    aberth_initial_guesses,
    jacobi_kernel,
    power_iteration_kernel,
)


def timeit(fn, *args, repeat=5):
    fn(*args)  # warm-up (JIT compilation on the numba path)
    best = np.inf
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def spiked_covariance(dim, seed):
    rng = np.random.default_rng(seed)
    steer = np.exp(-1j * np.pi * np.sin(0.7) * np.arange(dim))
    noise = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    cov = np.outer(steer, steer.conj()) + 0.02 * (noise @ noise.conj().T) / dim
    return (cov + cov.conj().T) / 2


def music_poly(dim, seed):
    cov = spiked_covariance(dim, seed)
    lam, vec = np.linalg.eigh(cov)
    u = vec[:, -1]
    proj = np.eye(dim, dtype=complex) - np.outer(u, u.conj())
    coeffs = np.array([np.trace(proj, offset=m) for m in range(-(dim - 1), dim)])
    return coeffs / np.max(np.abs(coeffs))


def main():
    print(f"numba available: {HAS_NUMBA}")
    print(f"{'kernel':34s} {'size':>6s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")

    for dim in (64, 126, 256, 542):
        cov = spiked_covariance(dim, seed=dim)
        v0 = np.ones(dim, dtype=complex) / np.sqrt(dim)
        t_fast = timeit(lambda: power_iteration_kernel(cov, v0.copy(), 1e-6, 200))
        t_slow = timeit(lambda: _power_iteration_body(cov, v0.copy(), 1e-6, 200))
        print(f"{'power iteration':34s} {dim:6d} {t_fast*1e3:9.2f}m {t_slow*1e3:9.2f}m "
              f"{t_slow/t_fast:7.1f}x")

    for dim in (32, 64, 128, 272):
        coeffs = music_poly(dim, seed=dim)
        guesses = aberth_initial_guesses(coeffs)
        t_fast = timeit(lambda: _aberth_compiled(coeffs.copy(), guesses.copy(), 1e-13, 120))
        t_slow = timeit(lambda: _aberth_vectorized(coeffs.copy(), guesses.copy(), 1e-13, 120))
        t_roots = timeit(lambda: np.roots(coeffs[::-1]))
        label = f"aberth rooting (deg {2 * dim - 2})"
        print(f"{label:34s} {dim:6d} {t_fast*1e3:9.2f}m {t_slow*1e3:9.2f}m "
              f"{t_slow/t_fast:7.1f}x   [np.roots {t_roots*1e3:.2f}m]")

    for dim in (16, 32, 64):
        cov = spiked_covariance(dim, seed=dim)
        t_fast = timeit(lambda: jacobi_kernel(cov, 1e-13, 40))
        t_eigh = timeit(lambda: np.linalg.eigh(cov))
        label = "jacobi EVD vs LAPACK eigh"
        print(f"{label:34s} {dim:6d} {t_fast*1e3:9.2f}m {t_eigh*1e3:9.2f}m "
              f"{t_fast/t_eigh:7.1f}x slower")
    if not HAS_NUMBA:
        print("note: RPIDOA_NO_NUMBA is set or numba is missing; the 'numba' column "
              "shows the uncompiled source timings")


if __name__ == "__main__":
    main()

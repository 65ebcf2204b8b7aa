"""Numba/numpy backend selection for the hot kernels.

Set ``RPIDOA_NO_NUMBA=1`` in the environment to force the pure-numpy
fallback path (also used automatically when numba is not installed).
``benchmarks/benchmark_backends.py`` compares the two paths.
"""

from __future__ import annotations

import os
from warnings import warn


def _numba_disabled_by_env() -> bool:
    return os.environ.get("RPIDOA_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}


HAS_NUMBA = False
if not _numba_disabled_by_env():
    try:
        import numba  # noqa: F401

        HAS_NUMBA = True
    except ImportError:  # pragma: no cover - depends on the install
        warn("numba is not installed; rpidoa will use the slower pure-numpy kernels")


def compile_kernel(func):
    """Return an njit-compiled version of ``func``, or ``func`` itself.

    The same source serves both backends: kernels are written in the
    numba-compilable subset of numpy so the fallback is the identical
    algorithm interpreted by numpy.
    """
    if HAS_NUMBA:
        from numba import njit

        return njit(cache=True)(func)
    return func

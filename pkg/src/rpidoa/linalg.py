"""Complex dense linear algebra: covariance, Hermitian EVD, root finding.

The EVD is the full-decomposition baseline the fast estimators are
measured against.  The default implementation wraps LAPACK via
``numpy.linalg.eigh``; an independent cyclic-Jacobi implementation
(numba-accelerated) is available through ``method="jacobi"`` and serves
as a cross-check that does not share code with LAPACK.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import aberth_initial_guesses, aberth_kernel, jacobi_kernel
from .array_model import SnapshotMatrix
from .errors import RootFindingError

HERMITIAN_RTOL = 1e-12
#: degree above which polynomial rooting switches from the companion
#: matrix to Aberth-Ehrlich iteration
COMPANION_MAX_DEGREE = 64

_TRIM_RTOL = 1e-12
_ROOT_RESIDUAL_RTOL = 1e-6


@dataclass(frozen=True)
class HermitianMatrix:
    """Square complex matrix verified to be Hermitian at construction."""

    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.complex128)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("matrix contains non-finite entries")
        scale = np.max(np.abs(data))
        if scale > 0 and np.max(np.abs(data - data.conj().T)) > HERMITIAN_RTOL * scale:
            raise ValueError("matrix is not Hermitian within tolerance")
        data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def dim(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class EvdResult:
    """Full eigendecomposition, eigenvalues sorted descending.

    Column ``i`` of ``eigenvectors`` pairs with ``eigenvalues[i]``; each
    column is unit-norm with its largest-modulus component rotated to be
    real and positive, making decompositions comparable across methods.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class PolynomialRoots:
    """All roots of a complex polynomial given by ascending coefficients.

    Construction verifies the residual bound |f(z_i)| <= 1e-6 * max|c|
    for every root and raises :class:`RootFindingError` otherwise.
    """

    coefficients: np.ndarray
    roots: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coefficients, dtype=np.complex128)
        roots = np.asarray(self.roots, dtype=np.complex128)
        if len(coeffs) - 1 != len(roots):
            raise ValueError("root count does not match polynomial degree")
        scale = np.max(np.abs(coeffs))
        if len(roots) > 0:
            residuals = np.abs(np.polyval(coeffs[::-1], roots))
            worst = float(residuals.max())
            if worst > _ROOT_RESIDUAL_RTOL * scale:
                raise RootFindingError(
                    f"worst root residual {worst:.3e} exceeds "
                    f"{_ROOT_RESIDUAL_RTOL:.0e} * max|c| = {_ROOT_RESIDUAL_RTOL * scale:.3e}",
                    partial_roots=roots,
                )
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "roots", roots)


def _as_hermitian_array(matrix) -> np.ndarray:
    if isinstance(matrix, HermitianMatrix):
        return matrix.data
    return HermitianMatrix(np.asarray(matrix)).data


def sample_covariance(snapshots: SnapshotMatrix | np.ndarray) -> HermitianMatrix:
    """Time-averaged outer product of the snapshot columns.

    The average is symmetrized so the result is exactly Hermitian.
    """
    data = snapshots.data if isinstance(snapshots, SnapshotMatrix) else np.asarray(snapshots)
    if data.ndim != 2 or data.shape[1] < 1:
        raise ValueError("snapshot block must be N x K with K >= 1")
    k = data.shape[1]
    cov = data @ data.conj().T / k
    cov = (cov + cov.conj().T) / 2.0
    return HermitianMatrix(cov)


def canonicalize_phase(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-modulus entry is real-positive."""
    vectors = np.array(vectors, copy=True)
    for col in range(vectors.shape[1]):
        idx = int(np.argmax(np.abs(vectors[:, col])))
        pivot = vectors[idx, col]
        mag = abs(pivot)
        if mag > 0:
            vectors[:, col] *= pivot.conjugate() / mag
    return vectors


def hermitian_evd(matrix, method: str = "lapack") -> EvdResult:
    """Full Hermitian eigendecomposition with deterministic phases.

    ``method="lapack"`` uses ``numpy.linalg.eigh``; ``method="jacobi"``
    runs the independent cyclic-Jacobi kernel (slower, useful as a
    cross-check and for the backend benchmark).
    """
    data = _as_hermitian_array(matrix)
    if method == "lapack":
        eigvals, eigvecs = np.linalg.eigh(data)
    elif method == "jacobi":
        eigvals, eigvecs, _sweeps = jacobi_kernel(data, 1e-14, 40)
    else:
        raise ValueError(f"unknown EVD method {method!r}")
    order = np.argsort(eigvals)[::-1]
    eigvals = np.ascontiguousarray(eigvals[order])
    eigvecs = canonicalize_phase(eigvecs[:, order])
    return EvdResult(eigenvalues=eigvals, eigenvectors=eigvecs)


def _trim_high_order(coeffs: np.ndarray) -> np.ndarray:
    """Drop numerically-zero leading (highest-power) coefficients."""
    scale = np.max(np.abs(coeffs))
    if scale == 0.0:
        raise ValueError("zero polynomial has no roots")
    keep = len(coeffs)
    while keep > 1 and abs(coeffs[keep - 1]) <= _TRIM_RTOL * scale:
        keep -= 1
    if keep == 1:
        raise ValueError("polynomial is constant after trimming; no roots")
    return coeffs[:keep]


def polynomial_roots(coefficients, method: str = "auto") -> PolynomialRoots:
    """All complex roots of a polynomial with ascending coefficients.

    ``auto`` uses the balanced companion matrix (``numpy.roots``) up to
    degree :data:`COMPANION_MAX_DEGREE` and Aberth-Ehrlich iteration
    beyond, where the companion eigenproblem becomes the dominant cost.
    """
    coeffs = np.atleast_1d(np.asarray(coefficients, dtype=np.complex128))
    if coeffs.ndim != 1:
        raise ValueError("coefficients must be a 1-D sequence")
    coeffs = _trim_high_order(coeffs)
    degree = len(coeffs) - 1
    scale = np.max(np.abs(coeffs))
    work = coeffs / scale

    # constant-term zeros are exact roots at the origin
    n_zero_roots = 0
    while n_zero_roots < degree and work[n_zero_roots] == 0.0:
        n_zero_roots += 1
    reduced = work[n_zero_roots:]

    if method == "auto":
        method = "companion" if degree <= COMPANION_MAX_DEGREE else "aberth"
    if method == "companion":
        roots = np.roots(reduced[::-1])
    elif method == "aberth":
        guesses = aberth_initial_guesses(reduced)
        roots, _iters, converged = aberth_kernel(
            np.ascontiguousarray(reduced), np.ascontiguousarray(guesses), 1e-13, 120
        )
        if not converged:
            raise RootFindingError(
                "Aberth iteration did not converge within the iteration cap",
                partial_roots=roots,
            )
    else:
        raise ValueError(f"unknown root-finding method {method!r}")

    if n_zero_roots:
        roots = np.concatenate([roots, np.zeros(n_zero_roots, dtype=np.complex128)])
    return PolynomialRoots(coefficients=coeffs, roots=roots)

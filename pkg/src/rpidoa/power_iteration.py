"""Dominant-eigenpair extraction by power iteration.

Covers the initial-vector constructions whose orthogonality behaviour
against the array manifold is analyzed in :func:`orthogonality_defect`,
the iteration loop itself with its convergence diagnostics, and the
closed-form upper bound on the iteration count.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._kernels import power_iteration_kernel
from .array_model import ArrayGeometry, steering_vector
from .linalg import HermitianMatrix, _as_hermitian_array, canonicalize_phase

DEFAULT_EPSILON = 1e-6
DEFAULT_MAX_ITERATIONS = 200


# ---------------------------------------------------------------------------
# initial-vector constructions


@dataclass(frozen=True)
class AllOnes:
    """Every element 1 (case I)."""


@dataclass(frozen=True)
class Alternating:
    """Odd elements +1, even elements -1 (case II)."""


@dataclass(frozen=True)
class HalvesSigned:
    """First half +1 (rounded up for odd sizes), second half -1 (case III)."""


@dataclass(frozen=True)
class DftColumn:
    """Normalized DFT-style ramp exp(-1j*k*A), A = 2*pi/(N*sqrt(N)) (case IV)."""


@dataclass(frozen=True)
class TwoHot:
    """Ones at two 1-based positions m < n, zeros elsewhere (case V)."""

    m: int
    n: int

    def __post_init__(self):
        _check_hot_indices((self.m, self.n))


@dataclass(frozen=True)
class ThreeHot:
    """Ones at three 1-based positions m < n < k (case VI)."""

    m: int
    n: int
    k: int

    def __post_init__(self):
        _check_hot_indices((self.m, self.n, self.k))


@dataclass(frozen=True)
class FourHot:
    """Ones at four 1-based positions m < n < k < l (case VII)."""

    m: int
    n: int
    k: int
    l: int

    def __post_init__(self):
        _check_hot_indices((self.m, self.n, self.k, self.l))


@dataclass(frozen=True)
class BasisVector:
    """Standard basis vector with a 1 at 1-based position k (case VIII)."""

    k: int

    def __post_init__(self):
        _check_hot_indices((self.k,))


@dataclass(frozen=True)
class RowSum:
    """Row sums of the iterated matrix divided by the sum of all entries.

    Equivalent to one free iteration applied to the all-ones vector, so
    it inherits whatever alignment the matrix itself provides.
    """


@dataclass(frozen=True)
class NearSignal:
    """Manifold-phase ramp for a hinted angle, i.e. a start vector already
    close to the signal direction."""

    theta_hint_deg: float
    spacing: float = 0.5


@dataclass(frozen=True)
class RandomInit:
    """Seeded circularly-symmetric complex Gaussian draw."""

    seed: int


@dataclass(frozen=True)
class CustomInit:
    """Caller-provided start vector (must be nonzero)."""

    vector: np.ndarray

    def __post_init__(self):
        vector = np.atleast_1d(np.asarray(self.vector, dtype=np.complex128))
        if vector.ndim != 1:
            raise ValueError("custom initial vector must be 1-D")
        if not np.any(vector != 0):
            raise ValueError("custom initial vector must be nonzero")
        vector = vector.copy()
        vector.setflags(write=False)
        object.__setattr__(self, "vector", vector)


InitialVectorSpec = (
    AllOnes
    | Alternating
    | HalvesSigned
    | DftColumn
    | TwoHot
    | ThreeHot
    | FourHot
    | BasisVector
    | RowSum
    | NearSignal
    | RandomInit
    | CustomInit
)


def _check_hot_indices(indices: tuple[int, ...]) -> None:
    for idx in indices:
        if int(idx) != idx or idx < 1:
            raise ValueError(f"hot indices must be positive integers, got {indices}")
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise ValueError(f"hot indices must be strictly increasing, got {indices}")


def _hot_vector(dim: int, indices: tuple[int, ...]) -> np.ndarray:
    if indices[-1] > dim:
        raise ValueError(f"hot index {indices[-1]} exceeds dimension {dim}")
    v = np.zeros(dim, dtype=np.complex128)
    for idx in indices:
        v[idx - 1] = 1.0
    return v


def make_initial_vector(spec: InitialVectorSpec, matrix) -> np.ndarray:
    """Build the unit-norm start vector described by ``spec`` for ``matrix``."""
    data = _as_hermitian_array(matrix)
    dim = data.shape[0]
    if isinstance(spec, AllOnes):
        v = np.ones(dim, dtype=np.complex128)
    elif isinstance(spec, Alternating):
        v = np.where(np.arange(dim) % 2 == 0, 1.0, -1.0).astype(np.complex128)
    elif isinstance(spec, HalvesSigned):
        v = np.where(np.arange(dim) < (dim + 1) // 2, 1.0, -1.0).astype(np.complex128)
    elif isinstance(spec, DftColumn):
        step = 2.0 * np.pi / (dim * np.sqrt(dim))
        v = np.exp(-1j * step * np.arange(1, dim + 1))
    elif isinstance(spec, TwoHot):
        v = _hot_vector(dim, (spec.m, spec.n))
    elif isinstance(spec, ThreeHot):
        v = _hot_vector(dim, (spec.m, spec.n, spec.k))
    elif isinstance(spec, FourHot):
        v = _hot_vector(dim, (spec.m, spec.n, spec.k, spec.l))
    elif isinstance(spec, BasisVector):
        v = _hot_vector(dim, (spec.k,))
    elif isinstance(spec, RowSum):
        total = data.sum()
        if abs(total) == 0:
            raise ValueError("matrix entries sum to zero; row-sum start undefined")
        v = data.sum(axis=1) / total
        if not np.any(v != 0):
            raise ValueError("row sums are identically zero; row-sum start undefined")
    elif isinstance(spec, NearSignal):
        phase_step = 2.0 * np.pi * spec.spacing * np.sin(np.deg2rad(spec.theta_hint_deg))
        v = np.exp(-1j * phase_step * np.arange(dim))
    elif isinstance(spec, RandomInit):
        rng = np.random.default_rng(spec.seed)
        v = (rng.standard_normal(dim) + 1j * rng.standard_normal(dim)) / np.sqrt(2.0)
    elif isinstance(spec, CustomInit):
        if spec.vector.shape[0] != dim:
            raise ValueError(
                f"custom vector length {spec.vector.shape[0]} does not match dim {dim}"
            )
        v = spec.vector.copy()
    else:
        raise ValueError(f"unknown initial-vector spec {spec!r}")
    return v / np.linalg.norm(v)


def orthogonality_defect(geometry: ArrayGeometry, theta_deg: float, v0: np.ndarray) -> float:
    """|a(theta)^T v0| with the plain (unconjugated) transpose.

    Zero means the start vector cannot pick up the incident wave and
    power iteration from it may converge to the wrong eigenvector.
    """
    v0 = np.asarray(v0, dtype=np.complex128)
    if v0.shape != (geometry.n_antennas,):
        raise ValueError(
            f"v0 has shape {v0.shape}, expected ({geometry.n_antennas},)"
        )
    return float(abs(np.sum(steering_vector(geometry, theta_deg) * v0)))


# ---------------------------------------------------------------------------
# the iteration itself


@dataclass(frozen=True)
class PowerIterationResult:
    """Dominant eigenpair estimate plus convergence diagnostics.

    ``iterations`` counts matrix-vector products; ``residual_history``
    holds the relative change of the max-normalized iterate at each
    step, so its final entry is <= epsilon exactly when ``converged``.
    """

    dominant_eigenvalue: float
    dominant_eigenvector: np.ndarray
    iterations: int
    residual_history: np.ndarray = field(repr=False)
    converged: bool = True


def rayleigh_quotient(matrix, v: np.ndarray) -> float:
    """(v^H R v) / (v^H v), asserted real for the Hermitian input."""
    data = _as_hermitian_array(matrix)
    v = np.asarray(v, dtype=np.complex128)
    denom = np.vdot(v, v).real
    if denom == 0.0:
        raise ValueError("Rayleigh quotient of the zero vector is undefined")
    quotient = np.vdot(v, data @ v) / denom
    if abs(quotient.imag) > 1e-12 * max(1.0, abs(quotient.real)):
        raise ValueError(
            f"Rayleigh quotient has non-negligible imaginary part {quotient.imag:.3e}"
        )
    return float(quotient.real)


def power_iterate(
    matrix,
    spec: InitialVectorSpec | np.ndarray,
    epsilon: float = DEFAULT_EPSILON,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> PowerIterationResult:
    """Iterate ``v <- R v`` until the normalized iterate stops moving.

    Each iterate is scaled by its largest-modulus entry (the running
    eigenvalue estimate); the loop stops once the relative vector change
    drops below ``epsilon``.  Exhausting ``max_iterations`` returns
    ``converged=False`` rather than raising, so callers can decide.  The
    reported eigenvalue is the Rayleigh quotient of the final iterate
    and the eigenvector carries the canonical (real-positive pivot)
    phase.
    """
    if not (epsilon > 0):
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if max_iterations < 1:
        raise ValueError(f"max_iterations must be >= 1, got {max_iterations}")
    data = _as_hermitian_array(matrix)
    if isinstance(spec, np.ndarray):
        spec = CustomInit(spec)
    v0 = make_initial_vector(spec, data)
    v, _factor, iterations, residuals, converged, degenerate = power_iteration_kernel(
        data, v0, float(epsilon), int(max_iterations)
    )
    if degenerate:
        raise ValueError("iterate collapsed to zero; initial vector lies in the null space")
    v = v / np.linalg.norm(v)
    v = canonicalize_phase(v[:, None])[:, 0]
    eigenvalue = max(0.0, rayleigh_quotient(data, v))
    return PowerIterationResult(
        dominant_eigenvalue=eigenvalue,
        dominant_eigenvector=v,
        iterations=int(iterations),
        residual_history=np.asarray(residuals, dtype=np.float64),
        converged=bool(converged),
    )


def iteration_bound(epsilon: float, dim: int, lambda_ratio: float) -> float:
    """Upper bound on the iteration count from the relative error budget.

    Evaluates (log2(eps) - log2(dim - 1)) / log2(lambda_ratio), the
    number of iterations after which the non-dominant contamination of
    the iterate is guaranteed below ``epsilon``.  Diagnostic only: it
    assumes the start vector does not favor any non-dominant direction.
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon}")
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    if not (0.0 < lambda_ratio < 1.0):
        raise ValueError(f"lambda_ratio must be in (0, 1), got {lambda_ratio}")
    return (np.log2(epsilon) - np.log2(dim - 1)) / np.log2(lambda_ratio)


__all__ = [
    "AllOnes",
    "Alternating",
    "HalvesSigned",
    "DftColumn",
    "TwoHot",
    "ThreeHot",
    "FourHot",
    "BasisVector",
    "RowSum",
    "NearSignal",
    "RandomInit",
    "CustomInit",
    "InitialVectorSpec",
    "PowerIterationResult",
    "make_initial_vector",
    "orthogonality_defect",
    "power_iterate",
    "rayleigh_quotient",
    "iteration_bound",
    "DEFAULT_EPSILON",
    "DEFAULT_MAX_ITERATIONS",
]

"""The four DOA estimators.

Two fast estimators obtain the dominant covariance eigenvector by power
iteration: ``rpi_ri_estimate`` reads the phase between overlapping
subarrays (rotational invariance), ``rpi_pr_estimate`` roots the noise
projector polynomial.  ``esprit_fd_estimate`` and
``root_music_fd_estimate`` are the same two read-outs driven by a full
eigendecomposition and serve as baselines.

All angle read-outs share the manifold convention a_n = e^{-j n phi},
phi = 2*pi*(d/lambda)*sin(theta), so both the subarray ratio and the
unit-circle signal root carry e^{-j phi}; the measured argument is
negated before the arcsin map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .array_model import ArrayGeometry, SnapshotMatrix
from .errors import EstimationFailureError
from .linalg import HermitianMatrix, hermitian_evd, polynomial_roots, sample_covariance
from .power_iteration import (
    DEFAULT_EPSILON,
    DEFAULT_MAX_ITERATIONS,
    InitialVectorSpec,
    PowerIterationResult,
    RowSum,
    power_iterate,
)


class Method(str, Enum):
    """Estimator identifiers, matching the CLI method names."""

    RPI_RI = "rpi-ri"
    RPI_PR = "rpi-pr"
    ESPRIT_FD = "esprit"
    ROOT_MUSIC_FD = "root-music"


@dataclass(frozen=True)
class DoaEstimate:
    """Estimated arrival angle plus method diagnostics.

    ``phase`` is the estimated inter-element phase shift phi;
    ``candidate_angles`` lists the angles of every polynomial root that
    maps into the arcsin domain (rooting methods only).
    """

    theta_deg: float
    method: Method
    pi_iterations: int = 0
    candidate_angles: tuple[float, ...] = ()
    phase: float = 0.0


@dataclass(frozen=True)
class StackedData:
    """Two overlapping (N-1)-element subarray blocks stacked vertically."""

    data: np.ndarray

    @property
    def subarray_size(self) -> int:
        return self.data.shape[0] // 2


def stack_subarrays(snapshots: SnapshotMatrix) -> StackedData:
    """Stack rows 1..N-1 over rows 2..N of the snapshot block."""
    data = snapshots.data if isinstance(snapshots, SnapshotMatrix) else np.asarray(snapshots)
    n = data.shape[0]
    if n < 3:
        raise ValueError(f"overlapping subarrays need at least 3 antennas, got {n}")
    return StackedData(np.vstack([data[: n - 1], data[1:]]))


def stacked_covariance_from_covariance(covariance: HermitianMatrix) -> HermitianMatrix:
    """Assemble the stacked-subarray covariance from the plain N x N one.

    The stacked rows are views of the same antennas, so every block of
    the (2N-2)-dimensional covariance is a block of the plain covariance
    and no second pass over the K snapshots is needed.
    """
    cov = covariance.data if isinstance(covariance, HermitianMatrix) else np.asarray(covariance)
    n = cov.shape[0]
    if n < 3:
        raise ValueError(f"overlapping subarrays need at least 3 antennas, got {n}")
    m = n - 1
    stacked = np.empty((2 * m, 2 * m), dtype=np.complex128)
    stacked[:m, :m] = cov[:m, :m]
    stacked[:m, m:] = cov[:m, 1:]
    stacked[m:, :m] = cov[1:, :m]
    stacked[m:, m:] = cov[1:, 1:]
    return HermitianMatrix(stacked)


def stacked_covariance(snapshots: SnapshotMatrix) -> HermitianMatrix:
    """Sample covariance of the stacked subarray data."""
    data = snapshots.data if isinstance(snapshots, SnapshotMatrix) else np.asarray(snapshots)
    if data.shape[0] < 3:
        raise ValueError(f"overlapping subarrays need at least 3 antennas, got {data.shape[0]}")
    return stacked_covariance_from_covariance(sample_covariance(data))


def noise_projector(signal_vector: np.ndarray) -> np.ndarray:
    """Rank-(N-1) projector I - u (u^H u)^{-1} u^H onto the noise subspace."""
    u = np.asarray(signal_vector, dtype=np.complex128)
    gram = np.vdot(u, u).real
    if gram == 0.0:
        raise ValueError("signal vector must be nonzero")
    projector = np.eye(u.shape[0], dtype=np.complex128) - np.outer(u, u.conj()) / gram
    return (projector + projector.conj().T) / 2.0


def music_polynomial_coefficients(projector: np.ndarray) -> np.ndarray:
    """Ascending coefficients of z^{N-1} * a^T(1/z) P a(z).

    For a Hermitian idempotent ``P`` the quadratic form collapses to the
    diagonal sums of ``P`` itself: coefficient of z^{m+N-1} is the sum
    of the m-th diagonal.
    """
    n = projector.shape[0]
    coeffs = np.empty(2 * n - 1, dtype=np.complex128)
    for m in range(-(n - 1), n):
        coeffs[m + n - 1] = np.trace(projector, offset=m)
    return coeffs


def _theta_from_phase(phase: float, geometry: ArrayGeometry, method: Method, **diag) -> float:
    sin_theta = phase / (2.0 * np.pi * geometry.spacing)
    if abs(sin_theta) > 1.0:
        raise EstimationFailureError(
            f"estimated phase {phase:.6f} maps outside the arcsin domain "
            f"(sin theta = {sin_theta:.6f})",
            method=method.value,
            phase=phase,
            **diag,
        )
    return float(np.degrees(np.arcsin(sin_theta)))


def _phase_from_stacked_vector(u: np.ndarray, method: Method) -> float:
    """Phase of the rotation linking the two subarray halves of ``u``."""
    half = u.shape[0] // 2
    upper, lower = u[:half], u[half:]
    gram = np.vdot(upper, upper).real
    if gram == 0.0:
        raise EstimationFailureError(
            "upper subarray component of the signal vector is zero",
            method=method.value,
        )
    ratio = np.vdot(upper, lower) / gram
    return float(-np.angle(ratio))


def _select_root(roots: np.ndarray, method: Method) -> complex:
    """Root strictly inside the unit circle with the largest modulus.

    Exact modulus ties break toward the smallest |arg z|.
    """
    inside = roots[np.abs(roots) < 1.0]
    if inside.size == 0:
        nearest = roots[int(np.argmin(np.abs(np.abs(roots) - 1.0)))] if roots.size else None
        raise EstimationFailureError(
            "no polynomial root strictly inside the unit circle",
            method=method.value,
            nearest_root=nearest,
        )
    order = sorted(range(inside.size), key=lambda i: (-np.abs(inside[i]), abs(np.angle(inside[i]))))
    return complex(inside[order[0]])


def _candidate_angles(roots: np.ndarray, geometry: ArrayGeometry) -> tuple[float, ...]:
    angles = []
    for z in roots:
        sin_theta = -np.angle(z) / (2.0 * np.pi * geometry.spacing)
        if abs(sin_theta) <= 1.0:
            angles.append(float(np.degrees(np.arcsin(sin_theta))))
    return tuple(angles)


def _converged_pi(matrix, init, epsilon, max_iterations, method: Method) -> PowerIterationResult:
    result = power_iterate(matrix, init, epsilon=epsilon, max_iterations=max_iterations)
    if not result.converged:
        raise EstimationFailureError(
            f"power iteration did not converge within {max_iterations} iterations "
            f"(last residual {result.residual_history[-1]:.3e})",
            method=method.value,
            pi_result=result,
        )
    return result


def _rooting_estimate(
    projector: np.ndarray,
    geometry: ArrayGeometry,
    method: Method,
    pi_iterations: int,
) -> DoaEstimate:
    coeffs = music_polynomial_coefficients(projector)
    roots = polynomial_roots(coeffs).roots
    selected = _select_root(roots, method)
    phase = float(-np.angle(selected))
    theta = _theta_from_phase(phase, geometry, method, selected_root=selected)
    return DoaEstimate(
        theta_deg=theta,
        method=method,
        pi_iterations=pi_iterations,
        candidate_angles=_candidate_angles(roots, geometry),
        phase=phase,
    )


def rpi_ri_estimate(
    snapshots: SnapshotMatrix,
    geometry: ArrayGeometry,
    init: InitialVectorSpec | None = None,
    epsilon: float = DEFAULT_EPSILON,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    *,
    covariance: HermitianMatrix | None = None,
) -> DoaEstimate:
    """Rotational-invariance estimate from a power-iterated signal vector.

    Builds the stacked subarray covariance, extracts its dominant
    eigenvector by power iteration, and reads the angle off the phase of
    the least-squares ratio between the two subarray halves.  Pass the
    stacked covariance via ``covariance`` if it is already available.
    """
    init = RowSum() if init is None else init
    cov = stacked_covariance(snapshots) if covariance is None else covariance
    pi = _converged_pi(cov, init, epsilon, max_iterations, Method.RPI_RI)
    phase = _phase_from_stacked_vector(pi.dominant_eigenvector, Method.RPI_RI)
    theta = _theta_from_phase(phase, geometry, Method.RPI_RI, pi_result=pi)
    return DoaEstimate(
        theta_deg=theta,
        method=Method.RPI_RI,
        pi_iterations=pi.iterations,
        phase=phase,
    )


def rpi_pr_estimate(
    snapshots: SnapshotMatrix,
    geometry: ArrayGeometry,
    init: InitialVectorSpec | None = None,
    epsilon: float = DEFAULT_EPSILON,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    *,
    covariance: HermitianMatrix | None = None,
) -> DoaEstimate:
    """Polynomial-rooting estimate from a power-iterated signal vector.

    Power-iterates the plain covariance for the signal direction, forms
    the complementary noise projector, and roots its spectrum
    polynomial; the root inside the unit circle closest to it carries
    the angle.
    """
    init = RowSum() if init is None else init
    cov = sample_covariance(snapshots) if covariance is None else covariance
    pi = _converged_pi(cov, init, epsilon, max_iterations, Method.RPI_PR)
    projector = noise_projector(pi.dominant_eigenvector)
    return _rooting_estimate(projector, geometry, Method.RPI_PR, pi.iterations)


def esprit_fd_estimate(
    snapshots: SnapshotMatrix,
    geometry: ArrayGeometry,
    *,
    covariance: HermitianMatrix | None = None,
) -> DoaEstimate:
    """Rotational-invariance baseline using the full eigendecomposition."""
    cov = stacked_covariance(snapshots) if covariance is None else covariance
    evd = hermitian_evd(cov)
    u = evd.eigenvectors[:, 0]
    phase = _phase_from_stacked_vector(u, Method.ESPRIT_FD)
    theta = _theta_from_phase(phase, geometry, Method.ESPRIT_FD)
    return DoaEstimate(theta_deg=theta, method=Method.ESPRIT_FD, phase=phase)


def root_music_fd_estimate(
    snapshots: SnapshotMatrix,
    geometry: ArrayGeometry,
    *,
    covariance: HermitianMatrix | None = None,
) -> DoaEstimate:
    """Polynomial-rooting baseline using the full eigendecomposition.

    The noise projector is built from the N-1 minor eigenvectors rather
    than from the complement of the dominant one.
    """
    cov = sample_covariance(snapshots) if covariance is None else covariance
    evd = hermitian_evd(cov)
    minor = evd.eigenvectors[:, 1:]
    projector = minor @ minor.conj().T
    projector = (projector + projector.conj().T) / 2.0
    return _rooting_estimate(projector, geometry, Method.ROOT_MUSIC_FD, 0)


ESTIMATORS = {
    Method.RPI_RI: rpi_ri_estimate,
    Method.RPI_PR: rpi_pr_estimate,
    Method.ESPRIT_FD: esprit_fd_estimate,
    Method.ROOT_MUSIC_FD: root_music_fd_estimate,
}

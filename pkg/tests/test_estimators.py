import numpy as np
import pytest

from rpidoa import (
    ArrayGeometry,
    EstimationFailureError,
    Method,
    SnapshotMatrix,
    SourceScenario,
    esprit_fd_estimate,
    hermitian_evd,
    music_polynomial_coefficients,
    noise_projector,
    polynomial_roots,
    power_iterate,
    rpi_pr_estimate,
    rpi_ri_estimate,
    root_music_fd_estimate,
    sample_covariance,
    stack_subarrays,
    stacked_covariance,
    stacked_covariance_from_covariance,
    steering_vector,
    synthesize_snapshots,
)
from rpidoa.power_iteration import RowSum

ALL_ESTIMATORS = [rpi_ri_estimate, rpi_pr_estimate, esprit_fd_estimate, root_music_fd_estimate]


def make_block(n, theta, k=64, snr_db=0.0, seed=1, noiseless=False, spacing=0.5):
    geom = ArrayGeometry(n, spacing)
    scenario = SourceScenario(theta, snr_db, k, seed)
    return geom, synthesize_snapshots(geom, scenario, noiseless=noiseless)


# ---------------------------------------------------------------------------
# subarray stacking


def test_stack_three_antennas():
    snaps = SnapshotMatrix(np.array([[1.0], [2.0], [3.0]], dtype=complex))
    stacked = stack_subarrays(snaps)
    np.testing.assert_allclose(stacked.data, [[1.0], [2.0], [2.0], [3.0]])
    assert stacked.subarray_size == 2


def test_stack_rejects_two_antennas():
    with pytest.raises(ValueError):
        stack_subarrays(SnapshotMatrix(np.ones((2, 4), dtype=complex)))


def test_stack_noiseless_shift_invariance():
    geom, snaps = make_block(8, 35.0, noiseless=True)
    stacked = stack_subarrays(snaps).data
    phase = 2 * np.pi * 0.5 * np.sin(np.deg2rad(35.0))
    upper, lower = stacked[:7], stacked[7:]
    np.testing.assert_allclose(lower, np.exp(-1j * phase) * upper, atol=1e-12)


def test_stacked_covariance_matches_direct_computation():
    geom, snaps = make_block(12, -20.0, k=50, seed=7)
    direct = sample_covariance(stack_subarrays(snaps).data).data
    assembled = stacked_covariance(snaps).data
    np.testing.assert_allclose(assembled, direct, rtol=1e-12, atol=1e-14)


# ---------------------------------------------------------------------------
# noiseless exactness


@pytest.mark.parametrize("estimator", ALL_ESTIMATORS)
@pytest.mark.parametrize("theta", [-60.0, -15.0, 0.0, 30.0, 75.0])
def test_noiseless_round_trip(estimator, theta):
    geom, snaps = make_block(8, theta, noiseless=True, seed=2)
    est = estimator(snaps, geom)
    assert abs(est.theta_deg - theta) < 1e-5


def test_noiseless_broadside_phase_zero():
    geom, snaps = make_block(8, 0.0, noiseless=True)
    ri = rpi_ri_estimate(snaps, geom)
    assert abs(ri.phase) < 1e-9
    assert abs(ri.theta_deg) < 1e-9
    pr = rpi_pr_estimate(snaps, geom)
    # the split double root lands on the positive real axis
    assert abs(pr.theta_deg) < 1e-6
    assert abs(pr.phase) < 1e-7


def test_noiseless_music_root_sits_on_unit_circle():
    geom, snaps = make_block(8, 50.0, noiseless=True)
    cov = sample_covariance(snaps)
    pi = power_iterate(cov, RowSum())
    projector = noise_projector(pi.dominant_eigenvector)
    roots = polynomial_roots(music_polynomial_coefficients(projector)).roots
    phase = 2 * np.pi * 0.5 * np.sin(np.deg2rad(50.0))
    assert np.min(np.abs(roots - np.exp(-1j * phase))) < 1e-7


def test_theta_phase_consistency():
    geom, snaps = make_block(16, 42.0, snr_db=10.0, seed=5)
    for estimator in ALL_ESTIMATORS:
        est = estimator(snaps, geom)
        recovered = np.degrees(np.arcsin(est.phase / (2 * np.pi * geom.spacing)))
        assert abs(recovered - est.theta_deg) < 1e-10


# ---------------------------------------------------------------------------
# projector properties


def test_noise_projector_properties():
    rng = np.random.default_rng(3)
    for seed in range(5):
        u = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        u /= np.linalg.norm(u)
        p = noise_projector(u)
        assert np.max(np.abs(p - p.conj().T)) < 1e-12
        assert np.linalg.norm(p @ p - p) < 1e-10
        assert np.linalg.norm(p @ u) < 1e-10
        assert abs(np.trace(p).real - 11.0) < 1e-8


def test_fd_projector_equals_complement_on_noiseless_data():
    geom, snaps = make_block(8, 25.0, noiseless=True)
    cov = sample_covariance(snaps)
    evd = hermitian_evd(cov)
    from_minor = evd.eigenvectors[:, 1:] @ evd.eigenvectors[:, 1:].conj().T
    from_complement = noise_projector(evd.eigenvectors[:, 0])
    assert np.linalg.norm(from_minor - from_complement) < 1e-10
    pr = rpi_pr_estimate(snaps, geom)
    rm = root_music_fd_estimate(snaps, geom)
    # identical projectors up to 1e-10, so only the double-root split differs
    assert abs(pr.theta_deg - rm.theta_deg) < 1e-5


# ---------------------------------------------------------------------------
# cross-method agreement and invariances


def test_rpi_ri_tracks_esprit_at_high_snr():
    geom, snaps = make_block(16, 50.0, k=200, snr_db=20.0, seed=11)
    ri = rpi_ri_estimate(snaps, geom)
    es = esprit_fd_estimate(snaps, geom)
    assert abs(ri.theta_deg - es.theta_deg) < 1e-4


def test_rpi_pr_tracks_root_music_at_moderate_snr():
    geom, snaps = make_block(16, 50.0, k=500, snr_db=0.0, seed=13)
    pr = rpi_pr_estimate(snaps, geom)
    rm = root_music_fd_estimate(snaps, geom)
    assert abs(pr.theta_deg - rm.theta_deg) < 0.05


def test_snapshot_scaling_leaves_estimates_unchanged():
    geom, snaps = make_block(12, -33.0, k=100, snr_db=5.0, seed=17)
    scaled = SnapshotMatrix((2.0 + 3.0j) * snaps.data)
    for estimator in ALL_ESTIMATORS:
        base = estimator(snaps, geom)
        after = estimator(scaled, geom)
        assert abs(base.theta_deg - after.theta_deg) < 1e-8


def test_precomputed_covariance_path_is_equivalent():
    geom, snaps = make_block(10, 12.0, k=80, snr_db=3.0, seed=23)
    cov = sample_covariance(snaps)
    stacked = stacked_covariance_from_covariance(cov)
    assert (
        rpi_pr_estimate(snaps, geom).theta_deg
        == rpi_pr_estimate(snaps, geom, covariance=cov).theta_deg
    )
    assert (
        rpi_ri_estimate(snaps, geom).theta_deg
        == rpi_ri_estimate(snaps, geom, covariance=stacked).theta_deg
    )
    assert (
        esprit_fd_estimate(snaps, geom).theta_deg
        == esprit_fd_estimate(snaps, geom, covariance=stacked).theta_deg
    )
    assert (
        root_music_fd_estimate(snaps, geom).theta_deg
        == root_music_fd_estimate(snaps, geom, covariance=cov).theta_deg
    )


# ---------------------------------------------------------------------------
# diagnostics and failure paths


def test_candidate_angles_for_rooting_methods():
    geom, snaps = make_block(8, 50.0, snr_db=0.0, seed=29)
    pr = rpi_pr_estimate(snaps, geom)
    assert 0 < len(pr.candidate_angles) <= 14
    assert any(abs(c - pr.theta_deg) < 1e-9 for c in pr.candidate_angles)
    ri = rpi_ri_estimate(snaps, geom)
    assert ri.candidate_angles == ()


def test_method_tags_and_iteration_counts():
    geom, snaps = make_block(8, 10.0, seed=31)
    assert rpi_ri_estimate(snaps, geom).method is Method.RPI_RI
    assert rpi_pr_estimate(snaps, geom).method is Method.RPI_PR
    assert esprit_fd_estimate(snaps, geom).method is Method.ESPRIT_FD
    assert root_music_fd_estimate(snaps, geom).method is Method.ROOT_MUSIC_FD
    assert rpi_ri_estimate(snaps, geom).pi_iterations >= 1
    assert esprit_fd_estimate(snaps, geom).pi_iterations == 0
    assert root_music_fd_estimate(snaps, geom).pi_iterations == 0


def test_arcsin_domain_violation_raises_estimation_failure():
    # a phase ramp steeper than 2*pi*d has no physical angle at d = 0.3
    geom = ArrayGeometry(6, spacing=0.3)
    ramp = np.exp(-1j * 2.5 * np.arange(6))
    snaps = SnapshotMatrix(np.outer(ramp, np.ones(8)))
    with pytest.raises(EstimationFailureError) as info:
        rpi_ri_estimate(snaps, geom)
    assert info.value.method == "rpi-ri"
    assert "phase" in str(info.value)


def test_pi_non_convergence_raises_estimation_failure():
    geom, snaps = make_block(8, 20.0, snr_db=-10.0, seed=37)
    with pytest.raises(EstimationFailureError):
        rpi_pr_estimate(snaps, geom, epsilon=1e-16, max_iterations=3)

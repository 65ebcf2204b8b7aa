import numpy as np
import pytest

from rpidoa import (
    ArrayGeometry,
    HermitianMatrix,
    RootFindingError,
    SourceScenario,
    hermitian_evd,
    music_polynomial_coefficients,
    noise_projector,
    polynomial_roots,
    sample_covariance,
    steering_vector,
    synthesize_snapshots,
)


def random_hermitian(dim, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2


def random_psd(dim, seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return a @ a.conj().T / dim


def test_hermitian_matrix_rejects_non_hermitian():
    bad = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)
    with pytest.raises(ValueError):
        HermitianMatrix(bad)


def test_hermitian_matrix_rejects_non_square():
    with pytest.raises(ValueError):
        HermitianMatrix(np.zeros((2, 3), dtype=complex))


def test_covariance_single_column_outer_product():
    y = np.array([[1.0 + 1.0j], [2.0 - 1.0j]])
    cov = sample_covariance(y)
    np.testing.assert_allclose(cov.data, np.outer(y[:, 0], y[:, 0].conj()), atol=1e-15)


def test_covariance_noiseless_rank_one():
    geom = ArrayGeometry(8)
    snaps = synthesize_snapshots(geom, SourceScenario(50.0, 0.0, 64, seed=3), noiseless=True)
    cov = sample_covariance(snaps)
    eigvals = hermitian_evd(cov).eigenvalues
    assert eigvals[1] <= 1e-12 * eigvals[0]


def test_covariance_trace_tracks_signal_plus_noise_power():
    geom = ArrayGeometry(64)
    snaps = synthesize_snapshots(geom, SourceScenario(50.0, 0.0, 1000, seed=21))
    cov = sample_covariance(snaps)
    assert abs(np.trace(cov.data).real / 64 - 2.0) < 0.2


def test_covariance_is_positive_semidefinite():
    geom = ArrayGeometry(12)
    snaps = synthesize_snapshots(geom, SourceScenario(-20.0, -5.0, 40, seed=8))
    eigvals = hermitian_evd(sample_covariance(snaps)).eigenvalues
    assert eigvals.min() >= -1e-10 * eigvals.max()


def test_evd_diagonal_case():
    result = hermitian_evd(np.diag([3.0, 1.0]).astype(complex))
    np.testing.assert_allclose(result.eigenvalues, [3.0, 1.0])
    np.testing.assert_allclose(np.abs(result.eigenvectors), np.eye(2), atol=1e-14)


def test_evd_rank_one_outer_product():
    geom = ArrayGeometry(6)
    a = steering_vector(geom, 33.0)
    result = hermitian_evd(np.outer(a, a.conj()))
    assert abs(result.eigenvalues[0] - 6.0) < 1e-12
    np.testing.assert_allclose(result.eigenvalues[1:], 0.0, atol=1e-12)


def test_evd_reconstruction_random_8x8():
    h = random_hermitian(8, seed=42)
    result = hermitian_evd(h)
    recon = result.eigenvectors @ np.diag(result.eigenvalues) @ result.eigenvectors.conj().T
    assert np.linalg.norm(recon - h) <= 1e-8 * np.linalg.norm(h)


def test_evd_eigenpair_residuals_and_orthonormality():
    h = random_psd(16, seed=7)
    result = hermitian_evd(h)
    scale = np.linalg.norm(h)
    for i in range(16):
        v = result.eigenvectors[:, i]
        assert np.linalg.norm(h @ v - result.eigenvalues[i] * v) <= 1e-8 * scale
    gram = result.eigenvectors.conj().T @ result.eigenvectors
    np.testing.assert_allclose(gram, np.eye(16), atol=1e-8)


def test_evd_canonical_phase_pivot_real_positive():
    result = hermitian_evd(random_hermitian(5, seed=11))
    for i in range(5):
        v = result.eigenvectors[:, i]
        pivot = v[np.argmax(np.abs(v))]
        assert abs(pivot.imag) < 1e-12
        assert pivot.real > 0


@pytest.mark.parametrize("dim", [2, 3, 5, 8, 16, 33])
def test_jacobi_matches_lapack(dim):
    h = random_hermitian(dim, seed=100 + dim)
    lap = hermitian_evd(h, method="lapack")
    jac = hermitian_evd(h, method="jacobi")
    scale = np.max(np.abs(lap.eigenvalues))
    np.testing.assert_allclose(jac.eigenvalues, lap.eigenvalues, atol=1e-10 * scale)
    # columns may differ by phase only when eigenvalues are simple
    alignment = np.abs(np.sum(lap.eigenvectors.conj() * jac.eigenvectors, axis=0))
    np.testing.assert_allclose(alignment, 1.0, atol=1e-8)


def test_evd_rejects_unknown_method():
    with pytest.raises(ValueError):
        hermitian_evd(np.eye(3, dtype=complex), method="qr")


def test_polynomial_roots_quadratics():
    roots = polynomial_roots([-1.0, 0.0, 1.0]).roots  # z^2 - 1
    np.testing.assert_allclose(sorted(roots, key=lambda z: z.real), [-1.0, 1.0], atol=1e-10)
    roots = polynomial_roots([1.0, 0.0, 1.0]).roots  # z^2 + 1
    np.testing.assert_allclose(sorted(roots, key=lambda z: z.imag), [-1.0j, 1.0j], atol=1e-10)


def test_polynomial_roots_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        polynomial_roots([0.0, 0.0, 0.0])


def test_polynomial_roots_trims_leading_near_zeros():
    # cubic term is numerically zero relative to the rest
    result = polynomial_roots([-1.0, 0.0, 1.0, 1e-300])
    assert len(result.roots) == 2


def test_polynomial_roots_origin_roots_kept():
    result = polynomial_roots([0.0, 0.0, 1.0, 1.0])  # z^2 (1 + z)
    roots = sorted(result.roots, key=lambda z: z.real)
    np.testing.assert_allclose(roots, [-1.0, 0.0, 0.0], atol=1e-10)


def music_polynomial(n, theta_deg, seed=None, snr_db=None, k=64):
    geom = ArrayGeometry(n)
    noiseless = snr_db is None
    scenario = SourceScenario(theta_deg, snr_db or 0.0, k, seed=seed or 0)
    snaps = synthesize_snapshots(geom, scenario, noiseless=noiseless)
    cov = sample_covariance(snaps)
    evd = hermitian_evd(cov)
    projector = noise_projector(evd.eigenvectors[:, 0])
    return music_polynomial_coefficients(projector)


def test_noiseless_music_polynomial_has_signal_root():
    # degree-14 polynomial from a noiseless 8-antenna block at 50 degrees
    coeffs = music_polynomial(8, 50.0)
    assert len(coeffs) == 15
    phase = 2 * np.pi * 0.5 * np.sin(np.deg2rad(50.0))
    signal_root = np.exp(-1j * phase)
    # direct evaluation at the manifold root
    value = abs(np.polyval(coeffs[::-1], signal_root))
    assert value <= 1e-10 * np.max(np.abs(coeffs))
    roots = polynomial_roots(coeffs).roots
    assert np.min(np.abs(roots - signal_root)) <= 1e-7


def test_music_roots_conjugate_reciprocal_pairing():
    coeffs = music_polynomial(12, 35.0, seed=5, snr_db=0.0)
    roots = polynomial_roots(coeffs).roots
    for z in roots:
        partner = 1.0 / np.conj(z)
        assert np.min(np.abs(roots - partner)) <= 1e-6 * max(1.0, abs(partner))


@pytest.mark.parametrize("method", ["companion", "aberth"])
def test_rooting_methods_agree_on_music_polynomial(method):
    coeffs = music_polynomial(16, -25.0, seed=9, snr_db=5.0)
    result = polynomial_roots(coeffs, method=method)
    reference = np.sort_complex(np.roots(coeffs[::-1]))
    np.testing.assert_allclose(np.sort_complex(result.roots), reference, atol=1e-7)


def test_aberth_handles_degree_above_companion_threshold():
    coeffs = music_polynomial(64, 50.0, seed=3, snr_db=0.0, k=1000)
    result = polynomial_roots(coeffs)  # auto -> aberth at degree 126
    assert len(result.roots) == 126
    residual = np.max(np.abs(np.polyval(coeffs[::-1], result.roots)))
    assert residual <= 1e-8 * np.max(np.abs(coeffs))


def test_root_residual_contract_enforced():
    # an exactly-representable poly with a fake far-off root must be rejected
    from rpidoa.linalg import PolynomialRoots

    with pytest.raises(RootFindingError):
        PolynomialRoots(
            coefficients=np.array([-1.0, 0.0, 1.0], dtype=complex),
            roots=np.array([2.0, -1.0], dtype=complex),
        )

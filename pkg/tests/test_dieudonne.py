import numpy as np
import pytest

from conftest import random_spec
from ptssh.closed_form import chessboard_pseudometric, general_pseudometric
from ptssh.dieudonne import (BandStatus, PseudometricSet, RankAmbiguityError, Source,
                             SpectrumError, band_restricted_solve, dieudonne_operator,
                             eigvec_metric, hermitian_coordinates, hermitian_from_coordinates,
                             mutual_projection_defect, projection_defect, pseudometric_kernel,
                             residual, spectrum_is_real_simple)
from ptssh.models import HamiltonianSpec, build_hamiltonian, pt_parity
from ptssh.numerics import hermitian_factor


def H_of(kind, n, lam=0.0, rho=0.0, omega=0.0):
    return build_hamiltonian(HamiltonianSpec(kind, n, lam, rho, omega))


def test_residual_examples():
    H = H_of("ssh", 4, 0.2)
    assert residual(H, np.eye(4)) == 0.0
    for kind in ("ssh", "dssh", "robin"):
        G = H_of(kind, 6, 0.0 if kind == "robin" else 0.3, 0.4, -0.7)
        assert residual(G, pt_parity(6)) <= 1e-15
    G = H_of("ssh", 4, 0.3, 0.0, 0.2)
    expected = np.linalg.norm(G.conj().T - G) / (np.linalg.norm(G) * 2)
    assert residual(G, np.eye(4)) == pytest.approx(expected)
    assert residual(G, np.eye(4)) > 0


def test_residual_shape_mismatch():
    with pytest.raises(ValueError):
        residual(np.eye(3), np.eye(4))


def test_hermitian_coordinates_roundtrip_and_isometry(rng):
    A = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    X = A + A.conj().T
    v = hermitian_coordinates(X)
    assert v.shape == (25,)
    assert np.allclose(hermitian_from_coordinates(v), X)
    assert np.linalg.norm(v) == pytest.approx(np.linalg.norm(X))


def test_operator_matches_direct_map(rng):
    H = H_of("dssh", 4, 0.3, 0.2, 0.5)
    A = dieudonne_operator(H)
    B = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    X = B + B.conj().T
    direct = 1j * (H.conj().T @ X - X @ H)
    assert np.allclose(A @ hermitian_coordinates(X), hermitian_coordinates(direct))


def test_kernel_hermitian_simple_contains_identity():
    H = H_of("ssh", 4)
    K = pseudometric_kernel(H)
    assert len(K) == 4 and K.source is Source.ORACLE
    assert projection_defect([np.eye(4)], K.matrices) < 1e-10


def test_kernel_dssh_gamma0_contains_chessboard():
    H = H_of("dssh", 4, 0.5)
    K = pseudometric_kernel(H)
    assert len(K) == 4
    C = [chessboard_pseudometric("dssh", 4, 0.5, k) for k in range(1, 5)]
    assert projection_defect(C, K.matrices) < 1e-8


def test_kernel_robin_members_have_small_residual():
    K = pseudometric_kernel(H_of("robin", 4, 0, 1.0, 0.3))
    assert len(K) == 4
    assert max(K.residuals) < 1e-10
    assert K.independent


@pytest.mark.parametrize("kind", ["ssh", "dssh", "robin"])
@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_kernel_dimension_equals_n_on_real_simple_spectra(kind, n, rng):
    for _ in range(50):
        H = build_hamiltonian(random_spec(rng, kind, n, real_simple=True))
        assert len(pseudometric_kernel(H)) == n


def test_rank_ambiguity_is_reported():
    H = H_of("robin", 4, 0, 1.0, 0.3)
    s = np.linalg.svd(dieudonne_operator(H), compute_uv=False)
    nonzero = s[s > 1e-8]
    i = int(np.argmin(nonzero[:-1] / nonzero[1:]))
    assert nonzero[i] / nonzero[i + 1] < 10
    with pytest.raises(RankAmbiguityError):
        pseudometric_kernel(H, tol=np.sqrt(nonzero[i] * nonzero[i + 1]))


def test_kernel_rejects_non_positive_tol():
    with pytest.raises(ValueError):
        pseudometric_kernel(np.eye(2), tol=0.0)


def test_eigvec_metric_hermitian_gives_identity():
    H = H_of("ssh", 6, 0.3)
    assert np.allclose(eigvec_metric(H, np.ones(6)), np.eye(6), atol=1e-10)


def test_eigvec_metric_robin_positive():
    H = H_of("robin", 4, 0, 1.0, 0.3)
    theta = eigvec_metric(H, np.ones(4))
    assert residual(H, theta) < 1e-8
    assert hermitian_factor(theta).success


def test_eigvec_metric_indefinite_weights():
    H = H_of("robin", 4, 0, 1.0, 0.3)
    theta = eigvec_metric(H, [1, -1, 1, -1])
    assert np.allclose(theta, theta.conj().T)
    assert not hermitian_factor(theta).success


def test_eigvec_metric_errors():
    with pytest.raises(SpectrumError):
        eigvec_metric(H_of("robin", 4, 0, 0.0, 5.0), np.ones(4))
    with pytest.raises(SpectrumError):
        eigvec_metric(np.eye(3), np.ones(3))
    with pytest.raises(ValueError):
        eigvec_metric(H_of("ssh", 4), np.ones(3))


def test_eigvec_metric_in_kernel_span(rng):
    for kind in ("ssh", "dssh", "robin"):
        spec = random_spec(rng, kind, 6, real_simple=True)
        H = build_hamiltonian(spec)
        theta = eigvec_metric(H, rng.uniform(0.5, 2.0, 6))
        assert projection_defect([theta], pseudometric_kernel(H).matrices) < 1e-8


def test_pseudometric_set_rejects_non_hermitian():
    with pytest.raises(ValueError):
        PseudometricSet((np.array([[0, 1], [0, 0]]),), Source.ORACLE, (0.0,))


def test_band_solve_ssh_n6_tail_matches_closed_form():
    H = H_of("ssh", 6, 0.4, 0.2, 0.3)
    r = band_restricted_solve(H, 4)
    assert r.status is BandStatus.BASIS_FOUND
    assert len(r.matrices) == 1
    P = general_pseudometric("ssh", 6, 0.4, 0.2, 0.3, 4)
    assert mutual_projection_defect(r.matrices, [P]) < 1e-8
    assert residual(H, r.matrices[0]) <= 1e-8


def test_band_solve_ssh_n6_cutoff():
    r = band_restricted_solve(H_of("ssh", 6, 0.4, 0.2, 0.3), 3)
    assert r.status is BandStatus.CUTOFF_VIOLATION
    assert r.violation_norm > 1e-8
    assert r.matrices == ()


def test_band_solve_robin_no_cutoff():
    H = H_of("robin", 6, 0, 0.5, 0.3)
    for k in range(1, 7):
        r = band_restricted_solve(H, k)
        assert r.status is BandStatus.BASIS_FOUND
        assert all(residual(H, X) <= 1e-8 for X in r.matrices)


@pytest.mark.parametrize("kind", ["ssh", "dssh", "robin"])
def test_band_solve_full_k_is_parity(kind):
    H = H_of(kind, 6, 0.0 if kind == "robin" else 0.35, 0.3, -0.2)
    r = band_restricted_solve(H, 6)
    assert r.status is BandStatus.BASIS_FOUND
    assert mutual_projection_defect(r.matrices, [pt_parity(6)]) < 1e-10


def test_band_solve_chessboard_gamma0():
    H = H_of("ssh", 6, 0.3)
    for k in range(1, 7):
        r = band_restricted_solve(H, k, chessboard=True)
        assert r.status is BandStatus.BASIS_FOUND
        P = chessboard_pseudometric("ssh", 6, 0.3, k)
        assert projection_defect([P], r.matrices) < 1e-8


def test_band_solve_k_range():
    with pytest.raises(ValueError):
        band_restricted_solve(np.eye(4), 0)
    with pytest.raises(ValueError):
        band_restricted_solve(np.eye(4), 5)


@pytest.mark.parametrize("n", [6, 8])
def test_ssh_cutoff_pattern_over_random_draws(n, rng):
    for _ in range(5):
        spec = random_spec(rng, "ssh", n, real_simple=True, lam_range=(0.1, 0.8))
        H = build_hamiltonian(spec)
        status = [band_restricted_solve(H, k).status for k in range(1, n + 1)]
        assert all(s is BandStatus.CUTOFF_VIOLATION for s in status[: n - 3])
        assert all(s is BandStatus.BASIS_FOUND for s in status[n - 3:])


def test_dssh_band_ansatz_never_obstructed(rng):
    # the dSSH chain is similar to a rescaled Robin chain, so each band has a solution
    spec = random_spec(rng, "dssh", 8, real_simple=True, lam_range=(0.1, 0.8))
    H = build_hamiltonian(spec)
    assert all(band_restricted_solve(H, k).status is BandStatus.BASIS_FOUND for k in range(1, 9))

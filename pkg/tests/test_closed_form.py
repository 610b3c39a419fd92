import numpy as np
import pytest

from conftest import random_spec
from ptssh.closed_form import (CutoffError, admissible_ks, available_ks, band_mask,
                               chessboard_pseudometric, closed_form_set, general_pseudometric,
                               robin_pseudometric, zero_support)
from ptssh.dieudonne import (BandStatus, Source, band_restricted_solve, mutual_projection_defect,
                             pseudometric_kernel, residual)
from ptssh.models import HamiltonianSpec, build_hamiltonian, pt_parity

EXACT = 1e-12


def H_of(kind, n, lam=0.0, rho=0.0, omega=0.0):
    return build_hamiltonian(HamiltonianSpec(kind, n, lam, rho, omega))


# -- support -------------------------------------------------------------------

def test_support_n4_k1_is_diagonal():
    assert np.array_equal(zero_support("dssh", 4, 1).mask, np.eye(4, dtype=bool))


def test_support_n4_k4_is_antidiagonal():
    assert np.array_equal(zero_support("ssh", 4, 4).mask, np.fliplr(np.eye(4, dtype=bool)))


def test_support_n4_k3_positions():
    got = set(zero_support("dssh", 4, 3).positions())
    assert got == {(1, 3), (2, 2), (2, 4), (3, 1), (3, 3), (4, 2)}


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_support_symmetric_and_banded(n):
    for k in range(1, n + 1):
        S = zero_support(None, n, k)
        assert np.array_equal(S.mask, S.mask.T)
        assert not np.any(S.mask & ~band_mask(n, k))
        assert S.allowed(*S.positions()[0])


def test_support_k_range():
    with pytest.raises(ValueError):
        zero_support("ssh", 4, 0)


# -- Robin -----------------------------------------------------------------------

def test_robin_k_equals_n_is_parity():
    assert np.array_equal(robin_pseudometric(4, 0.3, 0.8, 4), pt_parity(4))


def test_robin_k1_structure():
    rho, omega = 0.4, 0.9
    xi = complex(rho, -omega)
    P = robin_pseudometric(4, rho, omega, 1)
    assert np.allclose(np.diag(P), 1)
    assert np.allclose(np.abs(np.diag(P, 1)), omega)
    assert np.allclose(np.abs(np.diag(P, -1)), omega)
    assert P[0, 3] == pytest.approx(1j * omega * xi ** 2)
    assert P[3, 0] == pytest.approx(-1j * omega * xi.conjugate() ** 2)


def test_robin_k3_entries():
    rho, omega = 0.3, 0.7
    P = robin_pseudometric(4, rho, omega, 3)
    expected = np.array([[0, 0, 1, 1j * omega], [0, 1, rho, 1],
                         [1, rho, 1, 0], [-1j * omega, 1, 0, 0]])
    assert np.allclose(P, expected, rtol=0, atol=0)


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_robin_omega0_k1_is_identity(n):
    assert np.array_equal(robin_pseudometric(n, 1.7, 0.0, 1), np.eye(n))


def test_robin_k_out_of_range():
    with pytest.raises(ValueError):
        robin_pseudometric(4, 0.1, 0.1, 5)


@pytest.mark.parametrize("n", range(2, 11))
def test_robin_exact_for_every_n(n, rng):
    for _ in range(5):
        rho, omega = rng.normal(size=2)
        H = H_of("robin", n, 0, rho, omega)
        for k in range(1, n + 1):
            P = robin_pseudometric(n, rho, omega, k)
            assert residual(H, P) <= EXACT
            assert np.array_equal(P, P.conj().T)
            assert not np.any((P != 0) & ~band_mask(n, k))


# -- gamma = 0 chessboard -----------------------------------------------------------

def test_chessboard_ssh_k1_identity():
    for lam in (-0.6, 0.0, 0.45):
        assert np.array_equal(chessboard_pseudometric("ssh", 4, lam, 1), np.eye(4))


def test_chessboard_k_equals_n_is_parity():
    for kind in ("ssh", "dssh"):
        assert np.array_equal(chessboard_pseudometric(kind, 6, 0.3, 6), pt_parity(6))


def test_chessboard_dssh_n4_values():
    lam = 0.5
    p, m = 1 + lam, 1 - lam
    P1 = chessboard_pseudometric("dssh", 4, lam, 1)
    assert np.allclose(P1, np.diag([m ** 3, p * m ** 2, p ** 2 * m, p ** 3]))
    P2 = chessboard_pseudometric("dssh", 4, lam, 2)
    assert np.allclose(np.diag(P2, 1), [m ** 2, p * m, p ** 2])
    assert np.count_nonzero(P2) == 6


def test_chessboard_rejects_robin_and_odd_n():
    with pytest.raises(ValueError):
        chessboard_pseudometric("robin", 4, 0.0, 1)
    with pytest.raises(ValueError):
        chessboard_pseudometric("ssh", 5, 0.1, 1)


@pytest.mark.parametrize("kind", ["ssh", "dssh"])
@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_chessboard_exact_and_supported(kind, n, rng):
    for lam in rng.uniform(-0.95, 0.95, size=4):
        H = H_of(kind, n, lam)
        for k in range(1, n + 1):
            P = chessboard_pseudometric(kind, n, lam, k)
            assert residual(H, P) <= EXACT
            assert np.array_equal(P, P.T) and not np.any(P.imag)
            assert np.array_equal(P != 0, zero_support(kind, n, k).mask)


@pytest.mark.parametrize("kind", ["ssh", "dssh"])
def test_chessboard_lambda0_all_ones(kind):
    for k in range(1, 7):
        P = chessboard_pseudometric(kind, 6, 0.0, k)
        assert np.all(P[P != 0] == 1)


# -- general -----------------------------------------------------------------

def test_general_ssh_k4_parity():
    assert np.array_equal(general_pseudometric("ssh", 4, 0.3, 0.5, 0.2, 4), pt_parity(4))


def test_general_ssh_n4_k3_pattern():
    lam, rho, omega = 0.3, 0.5, 0.2
    p, m = 1 + lam, 1 - lam
    W = robin_pseudometric(4, rho, omega, 3)
    factors = np.array([[0, 0, p, 1], [0, m, 1, p], [p, 1, m, 0], [1, p, 0, 0]])
    assert np.allclose(general_pseudometric("ssh", 4, lam, rho, omega, 3), factors * W)


@pytest.mark.parametrize("kind", ["ssh", "dssh"])
def test_general_lambda0_reduces_to_robin(kind):
    for k in (4, 5, 6):
        assert np.allclose(general_pseudometric(kind, 6, 0.0, 0.4, -0.3, k),
                           robin_pseudometric(6, 0.4, -0.3, k), rtol=0, atol=0)


def test_general_dssh_n6_k4_cross_checked_by_band_solver(rng):
    lam, rho, omega = rng.uniform(-0.8, 0.8), rng.normal(), rng.normal()
    H = H_of("dssh", 6, lam, rho, omega)
    P = general_pseudometric("dssh", 6, lam, rho, omega, 4)
    assert residual(H, P) < 1e-10
    r = band_restricted_solve(H, 4)
    assert r.status is BandStatus.BASIS_FOUND
    assert mutual_projection_defect([P], r.matrices) < 1e-8


def test_general_ssh_cutoff():
    with pytest.raises(CutoffError):
        general_pseudometric("ssh", 6, 0.4, 0.2, 0.3, 3)
    assert admissible_ks("ssh", 8) == [6, 7, 8]
    assert admissible_ks("dssh", 4) == [1, 2, 3, 4]


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12])
def test_general_exact(n, rng):
    for _ in range(4):
        lam, rho, omega = rng.uniform(-0.9, 0.9), rng.normal(), rng.normal()
        for kind in ("ssh", "dssh"):
            H = H_of(kind, n, lam, rho, omega)
            for k in admissible_ks(kind, n):
                P = general_pseudometric(kind, n, lam, rho, omega, k)
                assert residual(H, P) <= EXACT
                assert np.array_equal(P, P.conj().T)


# -- sets and completeness ---------------------------------------------------------

def test_closed_form_set_metadata():
    spec = HamiltonianSpec("ssh", 6, 0.3, 0.2, 0.1)
    S = closed_form_set(spec)
    assert S.source is Source.CLOSED_FORM and S.ks == (4, 5, 6)
    assert available_ks(spec) == [4, 5, 6]
    assert available_ks(spec.with_params(rho=0.0, omega=0.0)) == list(range(1, 7))


@pytest.mark.parametrize("kind,n", [("robin", 3), ("robin", 4), ("robin", 6), ("robin", 8),
                                    ("ssh", 4), ("ssh", 8), ("dssh", 4), ("dssh", 8)])
def test_complete_set_spans_oracle_kernel(kind, n, rng):
    for _ in range(3):
        spec = random_spec(rng, kind, n, real_simple=True)
        if kind != "robin":
            spec = spec.with_params(rho=0.0, omega=0.0)
        S = closed_form_set(spec)
        K = pseudometric_kernel(build_hamiltonian(spec))
        assert len(S) == n and S.independent
        assert mutual_projection_defect(S.matrices, K.matrices) < 1e-8


def test_general_dssh_set_is_complete(rng):
    spec = random_spec(rng, "dssh", 6, real_simple=True)
    S = closed_form_set(spec)
    K = pseudometric_kernel(build_hamiltonian(spec))
    assert len(S) == 6
    assert mutual_projection_defect(S.matrices, K.matrices) < 1e-8

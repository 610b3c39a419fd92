"""Dense complex linear algebra used by every other module."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import config


class NumericalError(RuntimeError):
    """A decomposition failed to converge or produced non-finite output."""


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    right_eigenvectors: np.ndarray
    #: 2-norm condition number of the unit-column eigenvector matrix; ``inf``
    #: when that matrix is numerically singular
    condition_estimate: float

    @property
    def diagonalizable(self) -> bool:
        return self.condition_estimate < config.DIAGONALIZABLE_COND


@dataclass(frozen=True)
class HermitianFactor:
    omega: np.ndarray | None
    success: bool
    min_eigenvalue: float


def _square(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def eigenvector_condition(V: np.ndarray) -> float:
    norms = np.linalg.norm(V, axis=0)
    if np.any(norms == 0):
        return np.inf
    s = sla.svdvals(V / norms)
    if s[-1] <= s[0] * np.finfo(float).eps:
        return np.inf
    return float(s[0] / s[-1])


def eig(A) -> EigenDecomposition:
    A = _square(A)
    try:
        w, V = sla.eig(A)
    except sla.LinAlgError as exc:
        raise NumericalError(f"eigenvalue iteration did not converge: {exc}") from exc
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(V))):
        raise NumericalError("eigen-decomposition returned non-finite values")
    V = V / np.linalg.norm(V, axis=0)
    return EigenDecomposition(w, V, eigenvector_condition(V))


def sort_spectrum(w) -> np.ndarray:
    """Sort by real part, then imaginary part."""
    w = np.asarray(w)
    return w[np.lexsort((w.imag, w.real))]


def min_singular_value(A) -> float:
    A = _square(A)
    try:
        s = sla.svdvals(A)
    except sla.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc
    return float(s[-1])


def is_hermitian(A, rtol: float = config.RESIDUAL_TOL) -> bool:
    A = np.asarray(A)
    scale = max(np.linalg.norm(A), 1e-300)
    return np.linalg.norm(A - A.conj().T) <= rtol * scale


def hermitian_factor(theta) -> HermitianFactor:
    """Factor ``theta = omega^H omega``; fails softly for non-positive input.

    Positivity is decided on the eigenvalues (smallest one above
    ``POSITIVITY_RTOL * ||theta||_2``), so this agrees with an eigenvalue test
    by construction.  The factor itself is the upper Cholesky factor.
    """
    theta = _square(theta)
    if not is_hermitian(theta):
        raise ValueError("metric candidate is not hermitian")
    theta = 0.5 * (theta + theta.conj().T)
    evals = np.linalg.eigvalsh(theta)
    norm2 = float(np.max(np.abs(evals))) if evals.size else 0.0
    lo = float(evals[0])
    if norm2 == 0 or lo <= config.POSITIVITY_RTOL * norm2:
        return HermitianFactor(None, False, lo)
    try:
        omega = sla.cholesky(theta, lower=False)
    except sla.LinAlgError:
        # eigenvalue route for matrices Cholesky rejects at the threshold edge
        w, U = np.linalg.eigh(theta)
        omega = (U * np.sqrt(w)) @ U.conj().T
    return HermitianFactor(omega, True, lo)


def is_tridiagonal(A) -> bool:
    A = np.asarray(A)
    n = A.shape[0]
    i, j = np.indices((n, n))
    return not np.any(A[np.abs(i - j) > 1])


def charpoly_tridiagonal(H) -> np.ndarray:
    """Coefficients of ``det(x I - H)``, highest degree first.

    Built from the leading principal minors
    ``p_k(x) = (x - a_kk) p_{k-1}(x) - a_{k,k-1} a_{k-1,k} p_{k-2}(x)``.
    Meant as an independent spectral oracle for small ``n``; the roots are
    badly conditioned beyond a dozen sites.
    """
    H = _square(H)
    if not is_tridiagonal(H):
        raise ValueError("charpoly_tridiagonal needs a tridiagonal matrix")
    n = H.shape[0]
    prev = np.array([1.0 + 0j])
    cur = np.array([1.0 + 0j, -H[0, 0]])
    for k in range(1, n):
        nxt = np.polysub(np.polymul([1.0, -H[k, k]], cur),
                         np.concatenate([[0, 0], H[k, k - 1] * H[k - 1, k] * prev]))
        prev, cur = cur, nxt
    return cur


def charpoly_roots(coeffs) -> np.ndarray:
    return sort_spectrum(np.roots(coeffs))

"""Brute-force solutions of the intertwining equation ``H^H X = X H``.

Hermitian matrices are handled in real coordinates: the diagonal entries, then
``sqrt(2) Re X_ij`` and ``sqrt(2) Im X_ij`` for ``i < j`` in row-major order.
With that scaling the Frobenius inner product becomes the Euclidean one.

For hermitian ``X`` the image ``H^H X - X H`` is anti-hermitian, so
``X -> i (H^H X - X H)`` is a real-linear map of the ``n^2``-dimensional real
space of hermitian matrices into itself; its null space is the set of
pseudometrics.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import config
from .models import HamiltonianSpec, boundary_coupling
from .numerics import _square, sort_spectrum

#: a band solution counts as hermitian when the smallest singular value of the
#: column-normalized constraint operator, relative to ||H||_F, is below this
BAND_VIOLATION_TOL = 1e-8


class RankAmbiguityError(ValueError):
    """Singular values on both sides of the null-space tolerance are too close to call."""


class SpectrumError(ValueError):
    """The spectrum is complex or degenerate where a real simple one is required."""


class Source(enum.Enum):
    ORACLE = "oracle"
    CLOSED_FORM = "closed_form"
    BAND_RESTRICTED = "band_restricted"


class BandStatus(enum.Enum):
    BASIS_FOUND = "basis_found"
    CUTOFF_VIOLATION = "cutoff_violation"
    EMPTY = "empty"


def residual(H, P) -> float:
    """``||H^H P - P H||_F / max(1, ||H||_F ||P||_F)``."""
    H = np.asarray(H, dtype=complex)
    P = np.asarray(P, dtype=complex)
    if H.shape != P.shape or H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"shape mismatch: H {H.shape}, P {P.shape}")
    num = np.linalg.norm(H.conj().T @ P - P @ H)
    return float(num / max(1.0, np.linalg.norm(H) * np.linalg.norm(P)))


def hermiticity_defect(X) -> float:
    X = np.asarray(X)
    scale = np.linalg.norm(X)
    return 0.0 if scale == 0 else float(np.linalg.norm(X - X.conj().T) / scale)


def gram_condition(matrices) -> float:
    if not matrices:
        return np.inf
    V = np.array([hermitian_coordinates(0.5 * (M + M.conj().T)) for M in matrices])
    s = np.linalg.svd(V, compute_uv=False)
    if s[-1] == 0:
        return np.inf
    # cond(V V^T) = cond(V)^2
    return float((s[0] / s[-1]) ** 2)


@dataclass(frozen=True)
class PseudometricSet:
    matrices: tuple
    source: Source
    residuals: tuple
    spec: HamiltonianSpec | None = None
    #: k index of each member (1-based); ``None`` for oracle bases
    ks: tuple | None = None
    gram_condition: float = field(init=False)

    def __post_init__(self):
        mats = tuple(np.asarray(M, dtype=complex) for M in self.matrices)
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "residuals", tuple(float(r) for r in self.residuals))
        if len(self.residuals) != len(mats):
            raise ValueError("one residual per matrix is required")
        for idx, M in enumerate(mats):
            if hermiticity_defect(M) > config.RESIDUAL_TOL:
                raise ValueError(f"member {idx} is not hermitian")
        object.__setattr__(self, "gram_condition", gram_condition(mats))

    def __len__(self):
        return len(self.matrices)

    @property
    def independent(self) -> bool:
        return bool(np.isfinite(self.gram_condition) and self.gram_condition < 1e12)


@dataclass(frozen=True)
class BandSolveResult:
    status: BandStatus
    matrices: tuple
    violation_norm: float
    k: int


# -- hermitian coordinates -------------------------------------------------

def _upper(n):
    return np.triu_indices(n, 1)


def hermitian_coordinates(X) -> np.ndarray:
    """Real coordinate vector (length ``n^2``) of a hermitian matrix or stack."""
    X = np.asarray(X)
    n = X.shape[-1]
    iu, ju = _upper(n)
    diag = np.real(np.diagonal(X, axis1=-2, axis2=-1))
    off = X[..., iu, ju]
    return np.concatenate([diag, np.sqrt(2) * off.real, np.sqrt(2) * off.imag], axis=-1)


def hermitian_from_coordinates(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = int(round(np.sqrt(v.shape[-1])))
    if n * n != v.shape[-1]:
        raise ValueError(f"coordinate length {v.shape[-1]} is not a square")
    m = n * (n - 1) // 2
    iu, ju = _upper(n)
    X = np.zeros(v.shape[:-1] + (n, n), dtype=complex)
    idx = np.arange(n)
    X[..., idx, idx] = v[..., :n]
    upper = (v[..., n:n + m] + 1j * v[..., n + m:]) / np.sqrt(2)
    X[..., iu, ju] = upper
    X[..., ju, iu] = upper.conj()
    return X


def dieudonne_operator(H) -> np.ndarray:
    """Real ``n^2 x n^2`` matrix of ``X -> i (H^H X - X H)`` in hermitian coordinates."""
    H = _square(H)
    n = H.shape[0]
    basis = hermitian_from_coordinates(np.eye(n * n))
    images = 1j * (H.conj().T @ basis - basis @ H)
    return hermitian_coordinates(images).T


# -- oracle kernel ---------------------------------------------------------

def pseudometric_kernel(H, tol: float | None = None, spec: HamiltonianSpec | None = None
                        ) -> PseudometricSet:
    """Orthonormal real basis of all hermitian solutions of ``H^H X = X H``.

    ``tol`` defaults to ``n^2 * eps * s_max``.  If the smallest singular value
    kept above ``tol`` and the largest one discarded below it are within a
    factor of 10 of each other, the rank is ambiguous and
    :class:`RankAmbiguityError` is raised.
    """
    H = _square(H)
    n = H.shape[0]
    A = dieudonne_operator(H)
    _, s, vt = np.linalg.svd(A)
    smax = s[0] if s.size else 0.0
    if tol is None:
        tol = n * n * np.finfo(float).eps * max(smax, 1.0)
    if tol <= 0:
        raise ValueError("tol must be positive")
    null = s <= tol
    if null.any() and (~null).any():
        above, below = s[~null][-1], s[null][0]
        if above < 10 * below:
            raise RankAmbiguityError(
                f"singular values {above:.3e} and {below:.3e} straddle tol={tol:.3e}")
    mats = hermitian_from_coordinates(vt[null])
    mats = [0.5 * (M + M.conj().T) for M in mats]
    return PseudometricSet(tuple(mats), Source.ORACLE, tuple(residual(H, M) for M in mats), spec)


def projection_defect(members, basis) -> float:
    """Largest relative distance of a member from the real span of ``basis``."""
    members = list(members)
    basis = list(basis)
    if not members:
        return 0.0
    X = np.array([hermitian_coordinates(0.5 * (M + M.conj().T)) for M in members])
    if not basis:
        return 1.0
    B = np.array([hermitian_coordinates(0.5 * (M + M.conj().T)) for M in basis]).T
    Q, R = np.linalg.qr(B)
    keep = np.abs(np.diag(R)) > 1e-12 * np.abs(R).max()
    Q = Q[:, keep]
    worst = 0.0
    for x in X:
        norm = np.linalg.norm(x)
        if norm == 0:
            continue
        worst = max(worst, np.linalg.norm(x - Q @ (Q.T @ x)) / norm)
    return float(worst)


def mutual_projection_defect(a, b) -> float:
    return max(projection_defect(a, b), projection_defect(b, a))


# -- eigenvector construction ----------------------------------------------

def eigvec_metric(H, kappas) -> np.ndarray:
    """``sum_k kappa_k v_k v_k^H`` over unit eigenvectors ``v_k`` of ``H^H``.

    Eigenvectors are ordered by ascending eigenvalue.
    """
    H = _square(H)
    n = H.shape[0]
    kappas = np.asarray(kappas, dtype=float)
    if kappas.shape != (n,):
        raise ValueError(f"need {n} weights, got {kappas.shape}")
    w, V = np.linalg.eig(H.conj().T)
    radius = max(1.0, float(np.max(np.abs(w))))
    if np.max(np.abs(w.imag)) > config.SPECTRAL_RTOL * radius:
        raise SpectrumError("spectrum is not real")
    order = np.argsort(w.real)
    w, V = w.real[order], V[:, order]
    if n > 1 and np.min(np.diff(w)) <= config.SIMPLE_GAP:
        raise SpectrumError("spectrum is degenerate")
    V = V / np.linalg.norm(V, axis=0)
    theta = (V * kappas) @ V.conj().T
    return 0.5 * (theta + theta.conj().T)


def spectrum_is_real_simple(H) -> bool:
    w = sort_spectrum(np.linalg.eigvals(_square(H)))
    radius = max(1.0, float(np.max(np.abs(w))))
    if np.max(np.abs(w.imag)) > config.SPECTRAL_RTOL * radius:
        return False
    r = np.sort(w.real)
    return len(r) < 2 or float(np.min(np.diff(r))) > config.SIMPLE_GAP


# -- band-restricted ansatz --------------------------------------------------

def band_restricted_solve(H, k: int, chessboard: bool = False) -> BandSolveResult:
    """Solve the intertwining equation inside the ``k``-th band ansatz.

    The unknowns are real symmetric weights ``M_ij`` multiplying the phase
    pattern of the Robin pseudometric ``W_k(rho, omega)`` read off ``H[0, 0]``,
    so ``X = M * W_k`` is hermitian by construction and occupies the outermost
    ``2(n-k)+1`` antidiagonals.  ``chessboard`` further restricts the support to
    the parity pattern of the ``gamma = 0`` families.

    ``violation_norm`` is the smallest singular value of the column-normalized
    constraint operator divided by ``||H||_F``.  When it is above
    :data:`BAND_VIOLATION_TOL` while an unconstrained complex solution with the
    same band exists, the hermitian ansatz is obstructed and the result is
    ``CUTOFF_VIOLATION``.
    """
    from .closed_form import robin_pseudometric, zero_support

    H = _square(H)
    n = H.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}, got {k}")
    rho, omega = boundary_coupling(H)
    W = robin_pseudometric(n, rho, omega, k)
    mask = np.abs(W) > 0
    if chessboard:
        mask &= zero_support(None, n, k).mask
    rows, cols = np.nonzero(np.triu(mask))
    scale = max(np.linalg.norm(H), 1e-300)
    Hd = H.conj().T

    cols_op = []
    for i, j in zip(rows, cols):
        E = np.zeros((n, n), dtype=complex)
        E[i, j] = W[i, j]
        E[j, i] = W[j, i]
        R = Hd @ E - E @ H
        cols_op.append(np.concatenate([R.real.ravel(), R.imag.ravel()]))
    if not cols_op:
        return BandSolveResult(BandStatus.EMPTY, (), np.inf, k)
    A = np.array(cols_op).T
    A = A / np.linalg.norm(np.array(cols_op), axis=1)
    _, s, vt = np.linalg.svd(A)
    if s.size < A.shape[1]:
        s = np.concatenate([s, np.zeros(A.shape[1] - s.size)])
    violation = float(s[-1] / scale) if scale > 0 else float(s[-1])

    if violation <= BAND_VIOLATION_TOL:
        null = vt[s / scale <= BAND_VIOLATION_TOL]
        norms = np.linalg.norm(np.array(cols_op), axis=1)
        mats = []
        for v in null:
            weights = v / norms
            weights = weights * np.sign(weights[np.argmax(np.abs(weights))])
            X = np.zeros((n, n), dtype=complex)
            X[rows, cols] = weights * W[rows, cols]
            X[cols, rows] = weights * W[cols, rows]
            mats.append(X / np.linalg.norm(X))
        return BandSolveResult(BandStatus.BASIS_FOUND, tuple(mats), violation, k)

    if _complex_band_solution_exists(H, mask):
        return BandSolveResult(BandStatus.CUTOFF_VIOLATION, (), violation, k)
    return BandSolveResult(BandStatus.EMPTY, (), violation, k)


def _complex_band_solution_exists(H, mask) -> bool:
    """Whether some nonzero complex ``X`` on the band mask satisfies the equation."""
    n = H.shape[0]
    band = np.abs(np.add.outer(np.arange(n), np.arange(n)) - (n - 1))
    width = int(band[mask].max()) if mask.any() else -1
    rows, cols = np.nonzero(band <= width)
    Hd = H.conj().T
    cols_op = []
    for i, j in zip(rows, cols):
        # X -> H^H X - X H with X = e_ij; complex-linear, so one column per entry
        R = np.zeros((n, n), dtype=complex)
        R[:, j] += Hd[:, i]
        R[i, :] -= H[j, :]
        cols_op.append(R.ravel())
    A = np.array(cols_op).T
    s = np.linalg.svd(A, compute_uv=False)
    smin = s[-1] if s.size >= A.shape[1] else 0.0
    return bool(smin <= BAND_VIOLATION_TOL * max(np.linalg.norm(H), 1e-300))

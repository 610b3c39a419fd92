"""Explicit pseudometric families.

Three constructions, all indexed by ``k = 1..n`` with the ``k``-th member
living on the outermost ``2(n-k)+1`` antidiagonals (1-based ``(i, j)`` below):

* Robin chain (``lambda = 0``), any ``gamma``;
* ``gamma = 0`` SSH and dSSH chains, whose members have a chessboard support;
* general ``(lambda, gamma)``: the Robin element ``w_ij`` times a monomial in
  ``(1 + lambda)`` and ``(1 - lambda)``.  For SSH only ``k >= n - 2`` exists.

Every general-family matrix is checked against the Hamiltonian before it is
returned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .dieudonne import PseudometricSet, Source, residual
from .models import HamiltonianSpec, ModelKind, build_hamiltonian


class CutoffError(ValueError):
    """The requested member lies beyond the band-ansatz cutoff."""


class CertificationError(RuntimeError):
    """A constructed matrix failed the intertwining residual test."""


@dataclass(frozen=True)
class SupportPattern:
    n: int
    k: int
    mask: np.ndarray

    def allowed(self, i: int, j: int) -> bool:
        """1-based membership test."""
        return bool(self.mask[i - 1, j - 1])

    def positions(self) -> list[tuple[int, int]]:
        return [(int(i) + 1, int(j) + 1) for i, j in zip(*np.nonzero(self.mask))]


def _check_k(n: int, k: int):
    if int(k) != k or not 1 <= k <= n:
        raise ValueError(f"k must be an integer in 1..{n}, got {k}")


def _grid(n):
    i, j = np.indices((n, n)) + 1
    return i, j


def band_mask(n: int, k: int) -> np.ndarray:
    i, j = _grid(n)
    return np.abs(i + j - n - 1) <= n - k


def zero_support(kind, n: int, k: int) -> SupportPattern:
    """Nonzero pattern of the ``gamma = 0`` families (identical for SSH and dSSH).

    Allowed positions satisfy ``|i + j - n - 1| <= n - k``, ``|i - j| < k`` and
    ``i + j - k`` odd.
    """
    if kind is not None:
        ModelKind.parse(kind)
    _check_k(n, k)
    i, j = _grid(n)
    mask = band_mask(n, k) & (np.abs(i - j) < k) & ((i + j - k) % 2 == 1)
    return SupportPattern(n, k, mask)


def robin_pseudometric(n: int, rho: float, omega: float, k: int) -> np.ndarray:
    """``k``-th pseudometric of the Robin chain with ``gamma = rho + i omega``.

    With ``xi = rho - i omega`` the nonzero elements are::

        i omega (-xi)^(j-i-k)          j - i >= k
        -i omega (-conj xi)^(i-j-k)    i - j >= k
        rho                            otherwise, i + j - k even
        1                              otherwise, i + j - k odd
    """
    if n < 1:
        raise ValueError("n must be positive")
    _check_k(n, k)
    xi = complex(rho, -omega)
    # powers of -xi by repeated multiplication, p[m] = (-xi)^m
    powers = [1.0 + 0j]
    for _ in range(n):
        powers.append(powers[-1] * -xi)
    P = np.zeros((n, n), dtype=complex)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if abs(i + j - n - 1) > n - k:
                continue
            if j - i >= k:
                v = 1j * omega * powers[j - i - k]
            elif i - j >= k:
                v = -1j * omega * powers[i - j - k].conjugate()
            elif (i + j - k) % 2 == 0:
                v = rho
            else:
                v = 1.0
            P[i - 1, j - 1] = v
    return P


def _ssh_weights(n: int, lam: float, k: int) -> np.ndarray:
    """``(1 +- lambda)`` factors of the SSH tail ``k >= n - 2``.

    In mirrored coordinates ``a = n + 1 - i``, ``b = j``: distance 2 carries
    ``(1+lambda)(1-lambda)``, distance 1 carries the coupling magnitude of bond
    ``min(a, b)``, and the diagonal ``a = b`` carries ``(1-lambda)^2`` at inner
    sites of the ``k = n - 2`` member and 1 otherwise.
    """
    plus, minus = 1.0 + lam, 1.0 - lam
    M = np.zeros((n, n))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            a, b = n + 1 - i, j
            d = abs(a - b)
            if d > n - k:
                continue
            if d == 2:
                v = plus * minus
            elif d == 1:
                v = plus if min(a, b) % 2 == 1 else minus
            elif k == n - 2 and 1 < a < n:
                v = minus * minus
            else:
                v = 1.0
            M[i - 1, j - 1] = v
    return M


def _dssh_weights(n: int, lam: float, k: int) -> np.ndarray:
    """``(1+lambda)^a (1-lambda)^b`` factors of the dSSH family, any ``k``.

    ``2a = (i + j) - delta`` and ``2b = -(i + j) - delta`` up to a common shift
    making the smallest exponent on the band zero, where ``delta`` is 0 on
    the 1-entries of the Robin pattern, 1 on its rho-entries and
    ``|i - j| - k + 1`` on its wedges.
    """
    i, j = _grid(n)
    d = np.abs(i - j)
    delta = np.where(d >= k, d - k + 1, np.where((i + j - k) % 2 == 0, 1, 0))
    band = band_mask(n, k)
    ea = (i + j) - delta
    eb = -(i + j) - delta
    ea = np.where(band, (ea - ea[band].min()) // 2, 0)
    eb = np.where(band, (eb - eb[band].min()) // 2, 0)
    M = (1.0 + lam) ** ea * (1.0 - lam) ** eb
    return np.where(band, M, 0.0)


def _ssh_chessboard(n: int, lam: float, k: int) -> np.ndarray:
    i, j = _grid(n)
    mask = zero_support(ModelKind.SSH, n, k).mask
    d = np.abs(i - j)
    e = np.abs(i + j - n - 1)
    if k % 2 == 0:
        plus = (e + k + n) % 4 == 0
    else:
        plus = (d + k + 1) % 4 == 2
    values = np.where(plus, 1.0 + lam, 1.0 - lam)
    if len(np.unique(plus[mask])) == 1:
        values = np.ones_like(values)
    return np.where(mask, values, 0.0)


def _require_even(kind: ModelKind, n: int):
    if n % 2:
        raise ValueError(f"{kind.value} requires an even dimension, got n={n}")


def chessboard_pseudometric(kind, n: int, lam: float, k: int) -> np.ndarray:
    """``k``-th pseudometric of the ``gamma = 0`` SSH or dSSH chain (real symmetric)."""
    kind = ModelKind.parse(kind)
    if kind is ModelKind.ROBIN:
        raise ValueError("chessboard family is defined for ssh and dssh only")
    _require_even(kind, n)
    _check_k(n, k)
    if kind is ModelKind.SSH:
        P = _ssh_chessboard(n, lam, k)
    else:
        P = _dssh_weights(n, lam, k) * zero_support(kind, n, k).mask
    return P.astype(complex)


def admissible_ks(kind, n: int) -> list[int]:
    """Members available from :func:`general_pseudometric`."""
    kind = ModelKind.parse(kind)
    if kind is ModelKind.SSH:
        return list(range(max(1, n - 2), n + 1))
    return list(range(1, n + 1))


def general_pseudometric(kind, n: int, lam: float, rho: float, omega: float, k: int,
                         certify: bool = True) -> np.ndarray:
    """``k``-th pseudometric of the full ``(lambda, gamma)`` SSH or dSSH chain.

    Element ``(i, j)`` is a ``(1 +- lambda)`` monomial times the Robin element
    at the same position and ``k``.  SSH members with ``k < n - 2`` raise
    :class:`CutoffError`.  The dSSH chain is a diagonal similarity of a
    rescaled Robin chain, so every ``k`` is available there.
    """
    kind = ModelKind.parse(kind)
    if kind is ModelKind.ROBIN:
        if lam != 0:
            raise ValueError("the Robin chain has lambda = 0")
        return robin_pseudometric(n, rho, omega, k)
    _require_even(kind, n)
    _check_k(n, k)
    if k not in admissible_ks(kind, n):
        raise CutoffError(
            f"ssh pseudometrics exist in the band ansatz only for k >= n-2 = {n - 2}; "
            f"k={k} lies beyond the cutoff (no hermitian solution with this support)")
    W = robin_pseudometric(n, rho, omega, k)
    M = _ssh_weights(n, lam, k) if kind is ModelKind.SSH else _dssh_weights(n, lam, k)
    P = M * W
    if certify:
        H = build_hamiltonian(HamiltonianSpec(kind, n, lam, rho, omega))
        r = residual(H, P)
        if not r <= config.RESIDUAL_TOL:
            raise CertificationError(
                f"{kind.value} n={n} k={k}: residual {r:.3e} exceeds {config.RESIDUAL_TOL:g}")
    return P


def closed_form_matrix(spec: HamiltonianSpec, k: int) -> np.ndarray:
    """Dispatch to the family matching ``spec``."""
    if spec.kind is ModelKind.ROBIN:
        return robin_pseudometric(spec.n, spec.rho, spec.omega, k)
    if spec.rho == 0 and spec.omega == 0:
        return chessboard_pseudometric(spec.kind, spec.n, spec.lam, k)
    return general_pseudometric(spec.kind, spec.n, spec.lam, spec.rho, spec.omega, k)


def available_ks(spec: HamiltonianSpec) -> list[int]:
    if spec.kind is ModelKind.SSH and (spec.rho != 0 or spec.omega != 0):
        return admissible_ks(spec.kind, spec.n)
    return list(range(1, spec.n + 1))


def closed_form_set(spec: HamiltonianSpec, ks=None) -> PseudometricSet:
    """Closed-form members ``ks`` (default: every available one) with residuals."""
    ks = available_ks(spec) if ks is None else [int(k) for k in ks]
    H = build_hamiltonian(spec)
    mats = [closed_form_matrix(spec, k) for k in ks]
    return PseudometricSet(tuple(mats), Source.CLOSED_FORM,
                           tuple(residual(H, P) for P in mats), spec, tuple(ks))

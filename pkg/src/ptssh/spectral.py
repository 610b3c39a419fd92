"""Spectra over parameter grids, exceptional-point boundaries and pseudospectra."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import config, kernels
from .models import (HamiltonianSpec, ModelKind, RobinCoordinates, build_hamiltonian,
                     build_swapped, robin_from_gamma)
from .numerics import _square, eig


class BracketError(ValueError):
    """The probe interval does not bracket the requested transition."""


SWEEP_KINDS = ("ssh", "dssh", "swapped")


@dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    count: int

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"axis {self.name!r} needs a positive count")
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(f"axis {self.name!r} bounds must be finite")
        if self.count > 1 and self.hi < self.lo:
            raise ValueError(f"axis {self.name!r} has max < min")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, int(self.count))

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.count - 1) if self.count > 1 else 0.0


@dataclass(frozen=True)
class SweepGrid:
    """Row-major grid; the last axis varies fastest."""

    axes: tuple
    eigenvalues: np.ndarray     # (points, n), sorted by (Re, Im)
    all_real: np.ndarray        # (points,)
    cond_estimate: np.ndarray   # (points,)

    @property
    def shape(self) -> tuple:
        return tuple(a.count for a in self.axes)

    def coordinates(self) -> np.ndarray:
        """``(points, len(axes))`` parameter values in row-major order."""
        mesh = np.meshgrid(*[a.values for a in self.axes], indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


def _reality(w: np.ndarray, tol: float) -> np.ndarray:
    radius = np.maximum(1.0, np.max(np.abs(w), axis=-1))
    return np.max(np.abs(w.imag), axis=-1) <= tol * radius


def _sorted_rows(w: np.ndarray) -> np.ndarray:
    out = np.empty_like(w)
    for p in range(w.shape[0]):
        out[p] = w[p][np.lexsort((w[p].imag, w[p].real))]
    return out


def spectrum_is_real(H, tol: float = config.SPECTRAL_RTOL) -> bool:
    """``max |Im| <= tol * max(1, spectral radius)``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    w = eig(H).eigenvalues
    return bool(_reality(w[None, :], tol)[0])


def quasi_hermitian_class(H, tol: float = config.SPECTRAL_RTOL) -> bool:
    """Real spectrum and numerically diagonalizable."""
    d = eig(H)
    return bool(_reality(d.eigenvalues[None, :], tol)[0]) and d.diagonalizable


def _evaluate(stack: np.ndarray, axes: tuple) -> SweepGrid:
    w, cond = kernels.eig_cond_batch(stack)
    return SweepGrid(tuple(axes), _sorted_rows(w), _reality(w, config.SPECTRAL_RTOL), cond)


def _family_stack(kind: str, n: int, lams, gammas) -> np.ndarray:
    lams = np.broadcast_to(np.asarray(lams, dtype=float), np.shape(gammas))
    gammas = np.asarray(gammas, dtype=complex)
    m = gammas.size
    stack = np.empty((m, n, n), dtype=complex)
    for p, (lam, g) in enumerate(zip(lams.ravel(), gammas.ravel())):
        if kind == "swapped":
            stack[p] = build_swapped(n, lam, g.real, g.imag)
        else:
            stack[p] = build_hamiltonian(HamiltonianSpec(kind, n, lam, g.real, g.imag))
    return stack


def sweep_theta(kind: str, n: int, gamma: complex, theta: Axis) -> SweepGrid:
    """Spectrum at ``lambda = cos(theta)`` for every ``theta`` on the axis.

    ``kind`` is ``ssh``, ``dssh`` or ``swapped`` (the SSH chain with uniform
    ``-1 + lambda`` hopping).
    """
    kind = str(kind.value if isinstance(kind, ModelKind) else kind).lower()
    if kind not in SWEEP_KINDS:
        raise ValueError(f"theta sweeps need one of {SWEEP_KINDS}, got {kind!r}")
    lams = np.cos(theta.values)
    stack = _family_stack(kind, n, lams, np.full(lams.shape, complex(gamma)))
    return _evaluate(stack, (theta,))


def ep_map(kind, n: int, lam: float, rho: Axis, omega: Axis) -> SweepGrid:
    """Spectral classification over a ``(rho, omega)`` grid."""
    kind = ModelKind.parse(kind).value
    R, W = np.meshgrid(rho.values, omega.values, indexing="ij")
    stack = _family_stack(kind, n, lam, R + 1j * W)
    return _evaluate(stack, (rho, omega))


@dataclass(frozen=True)
class BoundaryPoint:
    rho: float
    omega: float

    def robin(self) -> RobinCoordinates:
        return robin_from_gamma(self.rho, self.omega)


@dataclass(frozen=True)
class EPBoundary:
    grid: SweepGrid
    points: tuple

    def real_area(self) -> float:
        """Area of the real-spectrum cells: count times cell area."""
        r, w = self.grid.axes
        return float(np.count_nonzero(self.grid.all_real) * r.step * w.step)

    def alpha_beta(self) -> np.ndarray:
        """Boundary points in the ``(alpha, beta)`` chart (``gamma = 0`` skipped)."""
        out = []
        for p in self.points:
            if p.rho == 0 and p.omega == 0:
                continue
            c = p.robin()
            out.append((c.alpha, c.beta))
        return np.array(out).reshape(-1, 2)


def _bisect(classify, a, b, ca, tol):
    """Shrink ``[a, b]`` (classification ``ca`` at ``a``, flipped at ``b``) to ``tol``."""
    while abs(b - a) > tol:
        mid = 0.5 * (a + b)
        if classify(mid) == ca:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def ep_boundary(kind, n: int, lam: float, rho: Axis, omega: Axis,
                tol: float = config.BOUNDARY_TOL) -> EPBoundary:
    """Classify the grid, then bisect every grid edge whose endpoints differ."""
    kind = ModelKind.parse(kind)
    grid = ep_map(kind, n, lam, rho, omega)
    real = grid.all_real.reshape(grid.shape)
    rv, wv = rho.values, omega.values

    def cls(r, w):
        return spectrum_is_real(build_hamiltonian(HamiltonianSpec(kind, n, lam, r, w)))

    points = []
    for i in range(real.shape[0]):
        for j in range(real.shape[1]):
            if i + 1 < real.shape[0] and real[i, j] != real[i + 1, j]:
                w = wv[j]
                r = _bisect(lambda x: cls(x, w), rv[i], rv[i + 1], bool(real[i, j]), tol)
                points.append(BoundaryPoint(float(r), float(w)))
            if j + 1 < real.shape[1] and real[i, j] != real[i, j + 1]:
                r = rv[i]
                w = _bisect(lambda x: cls(r, x), wv[j], wv[j + 1], bool(real[i, j]), tol)
                points.append(BoundaryPoint(float(r), float(w)))
    return EPBoundary(grid, tuple(points))


def lambda_boundary(kind, n: int, rho: float, omega: float, lam: Axis,
                    tol: float = config.BOUNDARY_TOL) -> list[float]:
    """Values of ``lambda`` where the quasi-hermitian classification flips.

    A point counts as quasi-hermitian when its spectrum is real and its
    eigenvector matrix is well conditioned.
    """
    kind = ModelKind.parse(kind)

    def cls(x):
        return quasi_hermitian_class(build_hamiltonian(HamiltonianSpec(kind, n, x, rho, omega)))

    xs = lam.values
    labels = [cls(x) for x in xs]
    out = []
    for a, b, ca, cb in zip(xs[:-1], xs[1:], labels[:-1], labels[1:]):
        if ca != cb:
            out.append(float(_bisect(cls, a, b, ca, tol)))
    return out


def monotonicity_violations(grid: SweepGrid) -> list[tuple[float, float]]:
    """Grid points where moving away from ``omega = 0`` turns a complex spectrum real.

    Rays start at the grid column closest to ``omega = 0`` for each ``rho``.
    """
    rho, omega = grid.axes
    real = grid.all_real.reshape(grid.shape)
    wv = omega.values
    j0 = int(np.argmin(np.abs(wv)))
    bad = []
    for i, r in enumerate(rho.values):
        for ray in (range(j0, len(wv)), range(j0, -1, -1)):
            seen_complex = False
            for j in ray:
                if not real[i, j]:
                    seen_complex = True
                elif seen_complex:
                    bad.append((float(r), float(wv[j])))
    return bad


def real_omega_measure(kind, n: int, lam: float, rho: float, omega: Axis) -> float:
    """Length of ``{omega : spectrum real}`` at fixed ``rho`` (count times step)."""
    kind = ModelKind.parse(kind).value
    stack = _family_stack(kind, n, lam, rho + 1j * omega.values)
    w = kernels.eigvals_batch(stack)
    return float(np.count_nonzero(_reality(w, config.SPECTRAL_RTOL)) * omega.step)


def critical_rho(kind, n: int, lam: float, rho_lo: float, rho_hi: float,
                 omega: Axis = Axis("omega", -1.0, 1.0, 401), tol: float = 1e-2) -> float:
    """Smallest ``rho`` where the real-spectrum ``omega`` set shrinks below one grid step.

    The set is assumed to shrink monotonically in ``rho`` between the probes.
    Raises :class:`BracketError` unless the set is wider than one step at
    ``rho_lo`` and narrower at ``rho_hi``.
    """
    if omega.count < 2 or omega.step <= 0:
        raise BracketError("the omega scan is degenerate; no measure can be resolved")

    def vanished(r):
        # at most one real grid point: the measure is below the resolution
        return real_omega_measure(kind, n, lam, r, omega) <= omega.step * (1 + 1e-12)

    if vanished(rho_lo) or not vanished(rho_hi):
        raise BracketError(
            f"[{rho_lo}, {rho_hi}] does not bracket the loss of real spectrum "
            f"(vanished at lo: {vanished(rho_lo)}, at hi: {vanished(rho_hi)})")
    a, b = rho_lo, rho_hi
    while b - a > tol:
        mid = 0.5 * (a + b)
        if vanished(mid):
            b = mid
        else:
            a = mid
    return 0.5 * (a + b)


@dataclass(frozen=True)
class PseudospectrumGrid:
    """Resolvent norms on a ``(re, im)`` window; arrays are ``(im count, re count)``."""

    re: Axis
    im: Axis
    values: np.ndarray
    eigenvalues: np.ndarray
    kappa: float | None
    lower_bound: np.ndarray
    upper_bound: np.ndarray | None
    enclosure_ok: np.ndarray | None

    def points(self) -> np.ndarray:
        I, R = np.meshgrid(self.im.values, self.re.values, indexing="ij")
        return R + 1j * I


def pseudospectrum(H, re: Axis, im: Axis, kappa: float | None = None,
                   slack: float = 1e-6) -> PseudospectrumGrid:
    """``1 / sigma_min(H - z)`` over the window, with the enclosure check when ``kappa`` is given.

    The check is ``1/d <= value <= kappa/d`` with ``d`` the distance from ``z``
    to the spectrum, each side relaxed by ``slack`` relative.
    """
    H = _square(H)
    I, R = np.meshgrid(im.values, re.values, indexing="ij")
    z = (R + 1j * I).ravel()
    values = kernels.resolvent_norms(H, z).reshape(I.shape)
    w = np.linalg.eigvals(H)
    dist = np.min(np.abs(z[:, None] - w[None, :]), axis=1).reshape(I.shape)
    with np.errstate(divide="ignore"):
        lower = np.where(dist > 0, 1.0 / dist, np.inf)
    upper = ok = None
    if kappa is not None:
        if not kappa >= 1 - 1e-10:
            raise ValueError(f"kappa must be >= 1, got {kappa}")
        upper = kappa * lower
        finite = np.isfinite(lower) & np.isfinite(values)
        ok = np.ones(I.shape, dtype=bool)
        ok[finite] = ((values[finite] >= lower[finite] * (1 - slack))
                      & (values[finite] <= upper[finite] * (1 + slack)))
    return PseudospectrumGrid(re, im, values, w, kappa, lower, upper, ok)

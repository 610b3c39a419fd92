"""Metric candidates built from pseudometric sets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .dieudonne import PseudometricSet
from .numerics import _square, hermitian_factor


class NotPositiveError(ValueError):
    """Operation requires a positive-definite metric."""


@dataclass(frozen=True)
class MetricCandidate:
    theta: np.ndarray
    epsilons: tuple
    positive: bool
    min_eigenvalue: float
    #: ``||Omega|| ||Omega^-1||``; ``inf`` when not positive
    kappa: float
    omega: np.ndarray | None = None


def from_theta(theta, epsilons=()) -> MetricCandidate:
    """Wrap an explicit hermitian ``theta`` (positivity and kappa evaluated)."""
    theta = _square(theta)
    factor = hermitian_factor(theta)
    if factor.success:
        s = np.linalg.eigvalsh(0.5 * (theta + theta.conj().T))
        # kappa = sqrt(cond_2 theta), never below 1 by construction
        kappa = float(np.sqrt(s[-1] / s[0]))
    else:
        kappa = np.inf
    return MetricCandidate(theta, tuple(float(e) for e in epsilons), factor.success,
                           factor.min_eigenvalue, kappa, factor.omega)


def assemble(pset: PseudometricSet, epsilons) -> MetricCandidate:
    """``theta = sum_k eps_k P_k`` with positivity and kappa."""
    eps = [float(e) for e in epsilons]
    if len(eps) != len(pset.matrices):
        raise ValueError(f"{len(pset.matrices)} coefficients required, got {len(eps)}")
    n = pset.matrices[0].shape[0] if pset.matrices else 0
    theta = np.zeros((n, n), dtype=complex)
    for e, P in zip(eps, pset.matrices):
        theta += e * P
    return from_theta(theta, eps)


def _require_positive(candidate: MetricCandidate):
    if not candidate.positive or candidate.omega is None:
        raise NotPositiveError("metric candidate is not positive definite")


def similarity_check(H, candidate: MetricCandidate) -> float:
    """``||h - h^H||_F / ||h||_F`` for ``h = Omega H Omega^-1``."""
    _require_positive(candidate)
    H = _square(H)
    Om = candidate.omega
    h = np.linalg.solve(Om.T, (Om @ H).T).T
    scale = np.linalg.norm(h)
    if scale == 0:
        return 0.0
    return float(np.linalg.norm(h - h.conj().T) / scale)


def inner_product(candidate: MetricCandidate, phi, psi) -> complex:
    """``<phi | theta | psi>`` (conjugate-linear in ``phi``)."""
    _require_positive(candidate)
    phi = np.asarray(phi, dtype=complex)
    psi = np.asarray(psi, dtype=complex)
    n = candidate.theta.shape[0]
    if phi.shape != (n,) or psi.shape != (n,):
        raise ValueError(f"vectors must have length {n}")
    return complex(np.vdot(phi, candidate.theta @ psi))


@dataclass(frozen=True)
class ScanPoint:
    epsilons: tuple
    positive: bool
    min_eigenvalue: float


def positivity_scan(pset: PseudometricSet, ranges, samples: int) -> list[ScanPoint]:
    """Lattice scan of coefficient space.

    ``ranges`` holds one ``(lo, hi)`` pair per member; each axis gets
    ``samples`` evenly spaced values (a single value when ``lo == hi``).  The
    base point ``e_1`` is always evaluated first.
    """
    ranges = [tuple(map(float, r)) for r in ranges]
    m = len(pset.matrices)
    if not ranges:
        raise ValueError("at least one coefficient range is required")
    if len(ranges) != m:
        raise ValueError(f"{m} ranges required, got {len(ranges)}")
    if samples < 1:
        raise ValueError("samples must be positive")
    axes = [np.array([lo]) if lo == hi else np.linspace(lo, hi, samples) for lo, hi in ranges]
    base = tuple(1.0 if i == 0 else 0.0 for i in range(m))
    points = [base]
    for combo in itertools.product(*axes):
        eps = tuple(float(x) for x in combo)
        if eps != base:
            points.append(eps)
    out = []
    for eps in points:
        c = assemble(pset, eps)
        out.append(ScanPoint(eps, c.positive, c.min_eigenvalue))
    return out

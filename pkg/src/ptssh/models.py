"""Matrix families of the PT-symmetric SSH chain and their parameter charts.

All three families are tridiagonal ``n x n`` matrices with hopping ``t = 1``,
dimerization ``Delta = 1`` and the boundary pair ``(gamma, conj(gamma))`` on the
first and last diagonal site.  Site indices in docstrings are 1-based; arrays
are 0-based, so site ``i`` lives at row ``i - 1``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class ModelKind(enum.Enum):
    SSH = "ssh"
    DSSH = "dssh"
    ROBIN = "robin"

    @classmethod
    def parse(cls, value: "str | ModelKind") -> "ModelKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown model kind {value!r}; expected ssh, dssh or robin") from None


@dataclass(frozen=True)
class HamiltonianSpec:
    """One member of a matrix family.

    ``lam`` is ``cos(theta)``; ``rho`` and ``omega`` are the real and imaginary
    parts of the boundary coupling ``gamma``.
    """

    kind: ModelKind
    n: int
    lam: float = 0.0
    rho: float = 0.0
    omega: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ModelKind.parse(self.kind))
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"dimension must be an integer >= 2, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if self.kind in (ModelKind.SSH, ModelKind.DSSH) and self.n % 2:
            raise ValueError(f"{self.kind.value} requires an even dimension, got n={self.n}")
        if self.kind is ModelKind.ROBIN and self.lam != 0:
            raise ValueError(f"the Robin chain is the lambda = 0 member; got lambda={self.lam}")
        for name in ("lam", "rho", "omega"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, value)

    @property
    def gamma(self) -> complex:
        return complex(self.rho, self.omega)

    def with_params(self, **changes) -> "HamiltonianSpec":
        fields = dict(kind=self.kind, n=self.n, lam=self.lam, rho=self.rho, omega=self.omega)
        fields.update(changes)
        return HamiltonianSpec(**fields)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "n": self.n, "lambda": self.lam,
                "rho": self.rho, "omega": self.omega}


@dataclass(frozen=True)
class RobinCoordinates:
    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha == 1 and self.beta == 0:
            raise ValueError("(alpha, beta) = (1, 0) is the pole of gamma = 1/(1 - alpha - i beta)")


def lambda_from_theta(theta: float) -> float:
    return math.cos(theta)


def gamma_from_robin(coords: RobinCoordinates) -> tuple[float, float]:
    """Return ``(rho, omega)`` for ``gamma = 1 / (1 - alpha - i beta)``."""
    a = 1.0 - coords.alpha
    b = coords.beta
    denom = a * a + b * b
    if denom == 0:
        raise ValueError("pole of the Robin chart at (alpha, beta) = (1, 0)")
    return a / denom, b / denom


def robin_from_gamma(rho: float, omega: float) -> RobinCoordinates:
    """Inverse chart; ``gamma = 0`` has no finite preimage."""
    g = complex(rho, omega)
    if g == 0:
        raise ValueError("gamma = 0 lies at infinity in the (alpha, beta) chart")
    inv = 1.0 / g
    return RobinCoordinates(alpha=1.0 - inv.real, beta=-inv.imag)


def couplings(kind: ModelKind, n: int, lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Superdiagonal and subdiagonal of the hopping part (length ``n - 1``)."""
    kind = ModelKind.parse(kind)
    plus, minus = -1.0 - lam, -1.0 + lam
    if kind is ModelKind.DSSH:
        return np.full(n - 1, plus), np.full(n - 1, minus)
    # bond b joins sites b and b + 1; odd bonds carry -1-lambda
    bonds = np.where(np.arange(1, n) % 2 == 1, plus, minus)
    return bonds.copy(), bonds


def build_hamiltonian(spec: HamiltonianSpec) -> np.ndarray:
    n = spec.n
    upper, lower = couplings(spec.kind, n, spec.lam)
    H = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    H[idx, idx + 1] = upper
    H[idx + 1, idx] = lower
    H[0, 0] = spec.gamma
    H[n - 1, n - 1] = spec.gamma.conjugate()
    return H


def build_swapped(n: int, lam: float, rho: float, omega: float) -> np.ndarray:
    """SSH chain with every ``-1-lambda`` bond replaced by ``-1+lambda``.

    Only used as a comparison family in theta sweeps; it has a uniform hopping.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    H = np.zeros((n, n), dtype=complex)
    idx = np.arange(n - 1)
    H[idx, idx + 1] = H[idx + 1, idx] = -1.0 + lam
    H[0, 0] = complex(rho, omega)
    H[n - 1, n - 1] = complex(rho, -omega)
    return H


def pt_parity(n: int) -> np.ndarray:
    """Exchange matrix ``J`` with ``J[i, n-1-i] = 1``."""
    if n < 1:
        raise ValueError("n must be positive")
    return np.fliplr(np.eye(n)).astype(complex)


def boundary_coupling(H: np.ndarray) -> tuple[float, float]:
    """Read ``(rho, omega)`` off the first diagonal entry of a family member."""
    g = complex(H[0, 0])
    return g.real, g.imag

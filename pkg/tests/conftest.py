import numpy as np
import pytest

from ptssh.dieudonne import spectrum_is_real_simple
from ptssh.models import HamiltonianSpec, build_hamiltonian


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


def random_spec(rng, kind, n, real_simple=False, lam_range=(-0.9, 0.9), gamma_scale=1.0,
                tries=500):
    """Random family member; with ``real_simple`` rejection-sample a real simple spectrum."""
    for _ in range(tries):
        lam = 0.0 if kind == "robin" else rng.uniform(*lam_range)
        rho, omega = rng.uniform(-gamma_scale, gamma_scale, size=2)
        spec = HamiltonianSpec(kind, n, lam, rho, omega)
        if not real_simple or spectrum_is_real_simple(build_hamiltonian(spec)):
            return spec
    raise RuntimeError(f"no real-spectrum sample for {kind} n={n}")

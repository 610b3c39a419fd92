"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from ptssh import _kernels_py, kernels
from ptssh.models import HamiltonianSpec, build_hamiltonian
from ptssh.spectral import _family_stack


def workloads():
    thetas = np.linspace(0, 2 * np.pi, 400)
    sweep = _family_stack("ssh", 50, np.cos(thetas), np.full(thetas.size, 0.5j))
    rho, omega = np.meshgrid(np.linspace(-3, 3, 121), np.linspace(-3, 3, 121), indexing="ij")
    epmap = _family_stack("robin", 4, 0.0, (rho + 1j * omega).ravel())
    H = build_hamiltonian(HamiltonianSpec("dssh", 8, 0.3, 0.2, 0.1))
    re, im = np.meshgrid(np.linspace(-3, 3, 100), np.linspace(-2, 2, 100))
    z = (re + 1j * im).ravel()
    return [
        ("eigvals_batch  400 x n=50", "eigvals_batch", (sweep,)),
        ("eig_cond_batch 14641 x n=4", "eig_cond_batch", (epmap,)),
        ("resolvent_norms 10^4 pts n=8", "resolvent_norms", (H, z)),
    ]


def _agree(a, b):
    a, b = (x if isinstance(x, tuple) else (x,) for x in (a, b))
    for x, y in zip(a, b):
        x, y = np.asarray(x), np.asarray(y)
        if x.ndim == 2 and np.iscomplexobj(x):
            x, y = np.sort_complex(x), np.sort_complex(y)
        if not np.allclose(x, y, rtol=1e-6, atol=1e-10, equal_nan=True):
            return False
    return True


def best(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    opts = ap.parse_args()
    print(f"active backend: {kernels.BACKEND}")
    if kernels.BACKEND != "compiled":
        print("compiled extension not available; timing the fallback only")
    print(f"{'workload':32s} {'compiled':>10s} {'python':>10s} {'speedup':>8s}")
    for label, name, args in workloads():
        t_py = best(getattr(_kernels_py, name), args, opts.repeat)
        if kernels.BACKEND == "compiled":
            t_c = best(getattr(kernels, name), args, opts.repeat)
            ref = getattr(_kernels_py, name)(*args)
            got = getattr(kernels, name)(*args)
            agree = _agree(ref, got)
            print(f"{label:32s} {t_c * 1e3:9.1f}ms {t_py * 1e3:9.1f}ms {t_py / t_c:7.2f}x"
                  f"{'' if agree else '  (results differ)'}")
        else:
            print(f"{label:32s} {'-':>10s} {t_py * 1e3:9.1f}ms {'-':>8s}")


if __name__ == "__main__":
    main()

"""Backend selection for the grid kernels.

The compiled extension ``ptssh._kernels`` is used when it imports; otherwise,
or when ``PTSSH_PURE_PYTHON=1`` is set, the numpy versions are used.  Both
expose ``eigvals_batch``, ``eig_cond_batch`` and ``resolvent_norms``.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("PTSSH_PURE_PYTHON", "").strip() not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "compiled"


def _stack(stack):
    import numpy as np

    stack = np.ascontiguousarray(stack, dtype=np.complex128)
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise ValueError(f"expected a (m, n, n) stack, got shape {stack.shape}")
    return stack


def eigvals_batch(stack):
    return _impl.eigvals_batch(_stack(stack))


def eig_cond_batch(stack):
    return _impl.eig_cond_batch(_stack(stack))


def resolvent_norms(A, z):
    import numpy as np

    A = np.ascontiguousarray(A, dtype=np.complex128)
    z = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    return _impl.resolvent_norms(A, z)

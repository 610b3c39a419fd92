"""Numpy implementations of the grid kernels (used when the extension is absent)."""

import numpy as np

_CHUNK = 4096


def eigvals_batch(stack):
    stack = np.ascontiguousarray(stack, dtype=np.complex128)
    try:
        return np.linalg.eigvals(stack)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigenvalue computation failed: {exc}") from exc


def eig_cond_batch(stack):
    stack = np.ascontiguousarray(stack, dtype=np.complex128)
    try:
        w, V = np.linalg.eig(stack)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigen-decomposition failed: {exc}") from exc
    norms = np.linalg.norm(V, axis=1, keepdims=True)
    V = np.divide(V, norms, out=np.zeros_like(V), where=norms > 0)
    s = np.linalg.svd(V, compute_uv=False)
    smax, smin = s[..., 0], s[..., -1]
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(smin <= smax * np.finfo(float).eps, np.inf, smax / smin)
    return w, cond


def resolvent_norms(A, z):
    A = np.ascontiguousarray(A, dtype=np.complex128)
    z = np.ascontiguousarray(z, dtype=np.complex128).ravel()
    n = A.shape[0]
    out = np.empty(z.size)
    eye = np.eye(n)
    for start in range(0, z.size, _CHUNK):
        zz = z[start:start + _CHUNK]
        shifted = A[None, :, :] - zz[:, None, None] * eye
        smin = np.linalg.svd(shifted, compute_uv=False)[:, -1]
        with np.errstate(divide="ignore"):
            out[start:start + _CHUNK] = np.where(smin == 0, np.inf, 1.0 / smin)
    return out

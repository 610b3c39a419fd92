# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Grid kernels calling LAPACK directly, one small matrix at a time.

Each routine copies its input into a Fortran-ordered scratch buffer, runs the
LAPACK driver without the GIL and reuses the workspace across grid points.
"""

import numpy as np

from libc.math cimport sqrt, INFINITY
from libc.stdlib cimport malloc, free
from scipy.linalg.cython_lapack cimport zgeev, zgesvd


cdef int _query_zgeev(int n, char jobvr):
    # some LAPACK builds touch the arrays during a workspace query
    cdef double complex wq
    cdef int lwork = -1, info = 0, ld = n
    cdef char jobvl = b'N'
    a = np.zeros((n, n), dtype=np.complex128)
    v = np.zeros((n, n), dtype=np.complex128)
    w = np.zeros(n, dtype=np.complex128)
    r = np.zeros(2 * n)
    cdef double complex[:, ::1] av = a, vv = v
    cdef double complex[::1] wv = w
    cdef double[::1] rv = r
    zgeev(&jobvl, &jobvr, &n, &av[0, 0], &ld, &wv[0], &vv[0, 0], &ld, &vv[0, 0], &ld,
          &wq, &lwork, &rv[0], &info)
    return <int>wq.real


cdef int _query_zgesvd(int n):
    cdef double complex wq
    cdef int lwork = -1, info = 0, ld = n
    cdef char job = b'N'
    a = np.zeros((n, n), dtype=np.complex128)
    s = np.zeros(n)
    r = np.zeros(5 * n)
    cdef double complex[:, ::1] av = a
    cdef double[::1] sv = s, rv = r
    zgesvd(&job, &job, &n, &n, &av[0, 0], &ld, &sv[0], &av[0, 0], &ld, &av[0, 0], &ld,
           &wq, &lwork, &rv[0], &info)
    return <int>wq.real


def eigvals_batch(double complex[:, :, ::1] stack):
    """Eigenvalues of every matrix in a ``(m, n, n)`` stack."""
    cdef Py_ssize_t m = stack.shape[0], p, i, j
    cdef int n = <int>stack.shape[1], info = 0, lwork, ld = 1, failed = -1
    cdef char jobvl = b'N', jobvr = b'N'
    out = np.empty((m, n), dtype=np.complex128)
    cdef double complex[:, ::1] w = out
    if m == 0 or n == 0:
        return out
    ld = n
    lwork = max(_query_zgeev(n, jobvr), 2 * n)
    cdef double complex *a = <double complex *>malloc(n * n * sizeof(double complex))
    cdef double complex *work = <double complex *>malloc(lwork * sizeof(double complex))
    cdef double *rwork = <double *>malloc(2 * n * sizeof(double))
    try:
        with nogil:
            for p in range(m):
                for i in range(n):
                    for j in range(n):
                        a[j * n + i] = stack[p, i, j]
                zgeev(&jobvl, &jobvr, &n, a, &ld, &w[p, 0], a, &ld, a, &ld,
                      work, &lwork, rwork, &info)
                if info != 0:
                    failed = <int>p
                    break
    finally:
        free(a)
        free(work)
        free(rwork)
    if failed >= 0:
        raise RuntimeError(f"zgeev failed on stack entry {failed} (info={info})")
    return out


def eig_cond_batch(double complex[:, :, ::1] stack):
    """Eigenvalues and eigenvector-matrix 2-norm condition numbers.

    Eigenvector columns are scaled to unit norm before the condition number is
    taken; a numerically singular eigenvector matrix reports ``inf``.
    """
    cdef Py_ssize_t m = stack.shape[0], p, i, j
    cdef int n = <int>stack.shape[1], info = 0, lwork, ld = 1, failed = -1
    cdef char jobvl = b'N', jobvr = b'V', jobs = b'N'
    cdef double colnorm, smax, smin, eps = np.finfo(float).eps
    out = np.empty((m, n), dtype=np.complex128)
    conds = np.empty(m, dtype=np.float64)
    cdef double complex[:, ::1] w = out
    cdef double[::1] cv = conds
    if m == 0 or n == 0:
        return out, conds
    ld = n
    lwork = max(max(_query_zgeev(n, jobvr), _query_zgesvd(n)), 3 * n)
    cdef double complex *a = <double complex *>malloc(n * n * sizeof(double complex))
    cdef double complex *vr = <double complex *>malloc(n * n * sizeof(double complex))
    cdef double complex *work = <double complex *>malloc(lwork * sizeof(double complex))
    cdef double *rwork = <double *>malloc(5 * n * sizeof(double))
    cdef double *s = <double *>malloc(n * sizeof(double))
    try:
        with nogil:
            for p in range(m):
                for i in range(n):
                    for j in range(n):
                        a[j * n + i] = stack[p, i, j]
                zgeev(&jobvl, &jobvr, &n, a, &ld, &w[p, 0], vr, &ld, vr, &ld,
                      work, &lwork, rwork, &info)
                if info != 0:
                    failed = <int>p
                    break
                for j in range(n):
                    colnorm = 0.0
                    for i in range(n):
                        colnorm = colnorm + vr[j * n + i].real * vr[j * n + i].real \
                                          + vr[j * n + i].imag * vr[j * n + i].imag
                    colnorm = sqrt(colnorm)
                    if colnorm > 0:
                        for i in range(n):
                            vr[j * n + i] = vr[j * n + i] / colnorm
                zgesvd(&jobs, &jobs, &n, &n, vr, &ld, s, vr, &ld, vr, &ld,
                       work, &lwork, rwork, &info)
                if info != 0:
                    failed = <int>p
                    break
                smax = s[0]
                smin = s[n - 1]
                if smin <= smax * eps:
                    cv[p] = INFINITY
                else:
                    cv[p] = smax / smin
    finally:
        free(a)
        free(vr)
        free(work)
        free(rwork)
        free(s)
    if failed >= 0:
        raise RuntimeError(f"LAPACK failed on stack entry {failed} (info={info})")
    return out, conds


def resolvent_norms(double complex[:, ::1] A, double complex[::1] z):
    """``1 / sigma_min(A - z_p I)`` for every shift; ``inf`` where singular."""
    cdef Py_ssize_t count = z.shape[0], p, i, j
    cdef int n = <int>A.shape[0], info = 0, lwork, ld = 1, failed = -1
    cdef char job = b'N'
    cdef double smin
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] r = out
    if count == 0:
        return out
    if n == 0:
        out[:] = 0.0
        return out
    ld = n
    lwork = max(_query_zgesvd(n), 3 * n)
    cdef double complex *a = <double complex *>malloc(n * n * sizeof(double complex))
    cdef double complex *work = <double complex *>malloc(lwork * sizeof(double complex))
    cdef double *rwork = <double *>malloc(5 * n * sizeof(double))
    cdef double *s = <double *>malloc(n * sizeof(double))
    try:
        with nogil:
            for p in range(count):
                for i in range(n):
                    for j in range(n):
                        a[j * n + i] = A[i, j]
                    a[i * n + i] = a[i * n + i] - z[p]
                zgesvd(&job, &job, &n, &n, a, &ld, s, a, &ld, a, &ld,
                       work, &lwork, rwork, &info)
                if info != 0:
                    failed = <int>p
                    break
                smin = s[n - 1]
                if smin == 0.0:
                    r[p] = INFINITY
                else:
                    r[p] = 1.0 / smin
    finally:
        free(a)
        free(work)
        free(rwork)
        free(s)
    if failed >= 0:
        raise RuntimeError(f"zgesvd failed at shift {failed} (info={info})")
    return out

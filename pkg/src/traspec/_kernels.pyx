# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled numerical kernels.

Same signatures and semantics as ``_pykernels``; no fast-math so that both
backends round identically in the scalar loops.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, fmax

cnp.import_array()

cdef double EPS = np.finfo(float).eps


cdef Py_ssize_t _count(const double[::1] d, const double[::1] e, double x,
                       double pivmin) noexcept nogil:
    cdef Py_ssize_t i, n = d.shape[0], count = 0
    cdef double q = d[0] - x
    if fabs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, n):
        q = d[i] - x - e[i - 1] * e[i - 1] / q
        if fabs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def sturm_count(diag, sub, double x, double pivmin):
    cdef const double[::1] d = np.ascontiguousarray(diag, dtype=np.float64)
    cdef const double[::1] e = np.ascontiguousarray(sub, dtype=np.float64)
    return _count(d, e, x, pivmin)


def bisect_eigenvalues(diag, sub, Py_ssize_t first, Py_ssize_t last,
                       double lower, double upper, double abstol, double pivmin):
    cdef const double[::1] d = np.ascontiguousarray(diag, dtype=np.float64)
    cdef const double[::1] e = np.ascontiguousarray(sub, dtype=np.float64)
    out = np.empty(last - first)
    cdef double[::1] o = out
    cdef Py_ssize_t j
    cdef double lo, hi, mid, tol
    with nogil:
        for j in range(first, last):
            lo = lower
            hi = upper
            while True:
                tol = abstol + 2.0 * EPS * fmax(fabs(lo), fabs(hi))
                if hi - lo <= tol:
                    break
                mid = 0.5 * (lo + hi)
                if mid <= lo or mid >= hi:
                    break
                if _count(d, e, mid, pivmin) > j:
                    hi = mid
                else:
                    lo = mid
            o[j - first] = 0.5 * (lo + hi)
    return out


def tridiag_solve_shifted(diag, sub, double shift, rhs, double pivmin):
    cdef Py_ssize_t n = len(diag), i
    dd_a = np.array(diag, dtype=np.float64) - shift
    du_a = np.zeros(n)
    du_a[:n - 1] = sub
    dl_a = np.array(sub, dtype=np.float64)
    du2_a = np.zeros(n)
    b_a = np.array(rhs, dtype=np.float64)
    x_a = np.zeros(n)
    cdef double[::1] dd = dd_a, du = du_a, dl = dl_a, du2 = du2_a, b = b_a, x = x_a
    cdef double fact, tmp, piv
    with nogil:
        for i in range(n - 1):
            if fabs(dd[i]) >= fabs(dl[i]):
                piv = dd[i] if dd[i] != 0.0 else pivmin
                dd[i] = piv
                fact = dl[i] / piv
                dd[i + 1] -= fact * du[i]
                b[i + 1] -= fact * b[i]
            else:
                fact = dd[i] / dl[i]
                dd[i] = dl[i]
                tmp = dd[i + 1]
                dd[i + 1] = du[i] - fact * tmp
                du2[i] = du[i + 1]
                du[i + 1] = -fact * du[i + 1]
                du[i] = tmp
                tmp = b[i]
                b[i] = b[i + 1]
                b[i + 1] = tmp - fact * b[i + 1]
        if dd[n - 1] == 0.0:
            dd[n - 1] = pivmin
        x[n - 1] = b[n - 1] / dd[n - 1]
        if n > 1:
            x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2]
        for i in range(n - 3, -1, -1):
            x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i]
    return x_a


def laguerre_table(Py_ssize_t nmax, double nu, y):
    cdef const double[::1] yy = np.ascontiguousarray(np.atleast_1d(y), dtype=np.float64)
    cdef Py_ssize_t m = yy.shape[0], k, i
    out_a = np.empty((nmax + 1, m))
    cdef double[:, ::1] out = out_a
    with nogil:
        for i in range(m):
            out[0, i] = 1.0
            if nmax >= 1:
                out[1, i] = nu + 1.0 - yy[i]
            for k in range(1, nmax):
                out[k + 1, i] = ((2 * k + nu + 1.0 - yy[i]) * out[k, i]
                                 - (k + nu) * out[k - 1, i]) / (k + 1)
    return out_a

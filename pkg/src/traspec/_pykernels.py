"""Pure-Python reference versions of the numerical kernels.

Every function here has a twin with the same signature in ``_kernels.pyx``.
The compiled module is preferred at import time (see :mod:`traspec.kernels`);
this one is used when the extension is not built or when
``TRASPEC_PURE_PYTHON=1`` is set.
"""

import numpy as np


def sturm_count(diag, sub, x, pivmin):
    """Number of eigenvalues of the symmetric tridiagonal matrix below ``x``."""
    d = diag.tolist() if hasattr(diag, "tolist") else list(diag)
    e = sub.tolist() if hasattr(sub, "tolist") else list(sub)
    count = 0
    q = d[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, len(d)):
        q = d[i] - x - e[i - 1] * e[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def bisect_eigenvalues(diag, sub, first, last, lower, upper, abstol, pivmin):
    """Eigenvalues with ascending indices ``first .. last-1`` by bisection.

    ``[lower, upper]`` must enclose the whole spectrum. Each interval is
    halved until its width drops below ``abstol`` plus a few ulps of the
    endpoints, or until the midpoint no longer moves.
    """
    d = diag.tolist() if hasattr(diag, "tolist") else list(diag)
    e = sub.tolist() if hasattr(sub, "tolist") else list(sub)
    eps = np.finfo(float).eps
    out = np.empty(last - first)
    for j in range(first, last):
        lo, hi = lower, upper
        while True:
            tol = abstol + 2.0 * eps * max(abs(lo), abs(hi))
            if hi - lo <= tol:
                break
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if sturm_count(d, e, mid, pivmin) > j:
                hi = mid
            else:
                lo = mid
        out[j - first] = 0.5 * (lo + hi)
    return out


def tridiag_solve_shifted(diag, sub, shift, rhs, pivmin):
    """Solve ``(T - shift*I) x = rhs`` by Gaussian elimination with row pivoting.

    Exactly-zero pivots are replaced by ``pivmin``, which is what inverse
    iteration needs when ``shift`` is an eigenvalue to working precision.
    """
    n = len(diag)
    # row i holds (dl[i], dd[i], du[i], du2[i]) after elimination
    dd = [float(v) - shift for v in diag]
    du = [float(v) for v in sub] + [0.0]
    dl = [float(v) for v in sub]
    du2 = [0.0] * n
    b = [float(v) for v in rhs]
    for i in range(n - 1):
        if abs(dd[i]) >= abs(dl[i]):
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
            b[i], b[i + 1] = b[i + 1], b[i] - fact * b[i + 1]
    if dd[n - 1] == 0.0:
        dd[n - 1] = pivmin
    x = [0.0] * n
    x[n - 1] = b[n - 1] / dd[n - 1]
    if n > 1:
        x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / dd[n - 2]
    for i in range(n - 3, -1, -1):
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i]
    return np.array(x)


def laguerre_table(nmax, nu, y):
    """Rows ``L_0^nu(y) .. L_nmax^nu(y)`` by upward three-term recurrence."""
    y = np.asarray(y, dtype=float)
    out = np.empty((nmax + 1, y.size))
    out[0] = 1.0
    if nmax >= 1:
        out[1] = nu + 1.0 - y
    for k in range(1, nmax):
        out[k + 1] = ((2 * k + nu + 1.0 - y) * out[k] - (k + nu) * out[k - 1]) / (k + 1)
    return out

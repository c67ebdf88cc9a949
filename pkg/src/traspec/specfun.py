"""Generalized Laguerre polynomials, terminating hypergeometric sums,
Meixner-Pollaczek polynomials and Gauss-Laguerre quadrature.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from traspec import eigensolve, kernels
from traspec.errors import ConvergenceError, DomainError

# Bernoulli-number coefficients B_2k / (2k (2k-1)) of the Stirling series
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
)
_STIRLING_MIN = 12.0


def _stirling_tail_diff(a: float, b: float, d: float) -> float:
    """``tail(a) - tail(b)`` with ``d = a - b`` factored out of every power."""
    total = 0.0
    for k, c in enumerate(_STIRLING):
        m = 2 * k + 1
        # a^-m - b^-m = -d sum_i a^i b^(m-1-i) / (a b)^m
        s = sum(a**i * b ** (m - 1 - i) for i in range(m))
        total += c * (-d * s / (a * b) ** m)
    return total


def log_gamma_ratio(a: float, b: float) -> float:
    """``ln Gamma(a) - ln Gamma(b)`` for positive ``a`` and ``b``.

    Exactly-integer offsets use a product of the intermediate factors.
    Otherwise the leading Stirling terms are differenced analytically, which
    keeps the result accurate when ``a`` is close to ``b``. Arguments below
    12 are first raised with ``Gamma(x+1) = x Gamma(x)``, the removed factors
    contributing ``sum_j log1p((b - a)/(a + j))``; when those parts are larger
    than ``lgamma`` itself (small arguments far apart) the plain difference is
    returned instead.
    """
    a = float(a)
    b = float(b)
    if not (a > 0 and b > 0) or math.isinf(a) or math.isinf(b):
        raise DomainError(f"log_gamma_ratio needs positive finite arguments, got ({a}, {b})")
    if a == b:
        return 0.0
    d = a - b
    if d.is_integer() and abs(d) <= 64 and b + d == a:
        lo, k, sign = (b, int(d), 1.0) if d > 0 else (a, int(-d), -1.0)
        acc = 0.0
        prod = 1.0
        for j in range(k):
            prod *= lo + j
            if prod > 1e280:
                acc += math.log(prod)
                prod = 1.0
        return sign * (acc + math.log(prod))
    parts = []
    a0, b0 = a, b
    if min(a, b) < _STIRLING_MIN:
        k = math.ceil(_STIRLING_MIN - min(a, b))
        parts.extend(math.log1p(-d / (a + j)) for j in range(k))
        b = b + k
        a = b + d  # d stays the exact original difference
    parts += [
        (a - 0.5) * math.log1p(d / b),
        d * (math.log(b) - 1.0),
        _stirling_tail_diff(a, b, d),
    ]
    if a0 < _STIRLING_MIN or b0 < _STIRLING_MIN:
        la, lb = math.lgamma(a0), math.lgamma(b0)
        if abs(la) + abs(lb) < sum(abs(p) for p in parts):
            return la - lb
    return math.fsum(parts)


def _check_nu(nu):
    if not nu > -1:
        raise DomainError(f"Laguerre index nu must exceed -1, got {nu!r}")


def laguerre_table(nmax: int, nu: float, y) -> np.ndarray:
    """``L_0^nu(y) .. L_nmax^nu(y)`` as rows, one column per point of ``y``."""
    _check_nu(nu)
    if nmax < 0:
        raise DomainError("degree must be nonnegative")
    return kernels.laguerre_table(int(nmax), float(nu), np.asarray(y, dtype=float).reshape(-1))


def laguerre(n: int, nu: float, y):
    """Generalized Laguerre polynomial ``L_n^nu(y)`` by upward recurrence in ``n``.

    ``y`` may be a scalar or an array; the result has the same shape.
    """
    vals = laguerre_table(n, nu, y)[n]
    if np.ndim(y) == 0:
        return float(vals[0])
    return vals.reshape(np.shape(y))


def hyp1f1_terminating(n: int, b: float, y: float) -> float:
    """``1F1(-n; b; y)`` summed exactly over the rationals, then rounded once.

    The alternating series loses all precision in floating point once ``y`` is
    a few tens; the inputs are binary floats, hence exact rationals, so the
    finite sum is carried out exactly.
    """
    if n < 0:
        raise DomainError("degree must be nonnegative")
    bq = Fraction(b)
    yq = Fraction(y)
    term = Fraction(1)
    total = Fraction(1)
    for k in range(n):
        if bq + k == 0:
            raise DomainError("1F1 lower parameter hits a nonpositive integer")
        term *= Fraction(k - n) * yq / ((bq + k) * (k + 1))
        total += term
    return float(total)


def laguerre_via_1f1(n: int, nu: float, y: float) -> float:
    """``L_n^nu(y) = Gamma(n+nu+1)/(Gamma(n+1) Gamma(nu+1)) 1F1(-n; nu+1; y)``."""
    _check_nu(nu)
    if n == 0:
        return 1.0
    log_pref = log_gamma_ratio(n + nu + 1, nu + 1) - math.lgamma(n + 1)
    return math.exp(log_pref) * hyp1f1_terminating(n, nu + 1, y)


def laguerre_derivative_action(n: int, nu: float, y):
    """``y dL_n^nu/dy`` from ``n L_n^nu(y) - (n+nu) L_{n-1}^nu(y)`` (``L_{-1} = 0``)."""
    if n < 0:
        raise DomainError("degree must be nonnegative")
    if n == 0:
        return 0.0 if np.ndim(y) == 0 else np.zeros(np.shape(y))
    t = laguerre_table(n, nu, y)
    out = n * t[n] - (n + nu) * t[n - 1]
    return float(out[0]) if np.ndim(y) == 0 else out.reshape(np.shape(y))


def _ode_terms(n, nu, y):
    # L, y L', y^2 L'' from the derivative identity applied twice
    t = laguerre_table(n, nu, y)
    L = t[n]
    Lm1 = t[n - 1] if n >= 1 else np.zeros_like(L)
    Lm2 = t[n - 2] if n >= 2 else np.zeros_like(L)
    yd = n * L - (n + nu) * Lm1
    yd_m1 = (n - 1) * Lm1 - (n - 1 + nu) * Lm2 if n >= 1 else np.zeros_like(L)
    y2dd = (n - 1) * yd - (n + nu) * yd_m1
    return L, yd, y2dd


def verify_laguerre_ode(n: int, nu: float, y):
    """Residual of ``y L'' + (nu + 1 - y) L' + n L`` for ``L = L_n^nu``.

    Both derivatives come from the identity for ``y dL/dy``; the residual
    vanishes analytically.
    """
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    if np.any(y_arr <= 0):
        raise DomainError("ODE residual needs y > 0")
    L, yd, y2dd = _ode_terms(n, nu, y_arr)
    res = y2dd / y_arr + (nu + 1 - y_arr) * yd / y_arr + n * L
    return float(res[0]) if np.ndim(y) == 0 else res.reshape(np.shape(y))


def _series_2f1(n, b, c, z):
    term = 1.0 + 0j
    total = 0j
    size = 0.0
    for k in range(n + 1):
        total += term
        size += abs(term)
        term *= (k - n) * (b + k) / ((c + k) * (k + 1)) * z
    cond = size / abs(total) if total != 0 else math.inf
    return total, cond


def hyp2f1_terminating(n: int, b: complex, c: float, z: float) -> complex:
    """``2F1(-n, b; c; z)`` for real ``z < 1``.

    The direct series and its Pfaff transform
    ``(1-z)^n 2F1(-n, c-b; c; z/(z-1))`` are both summed; the one whose terms
    cancel least is returned.
    """
    if n < 0:
        raise DomainError("degree must be nonnegative")
    if not z < 1:
        raise DomainError("terminating 2F1 evaluated here for z < 1 only")
    s1, k1 = _series_2f1(n, b, c, z)
    if k1 <= 4.0:
        return s1
    s2, k2 = _series_2f1(n, c - b, c, z / (z - 1))
    return s1 if k1 <= k2 else s2 * (1 - z) ** n


def meixner_pollaczek(n: int, mu: float, y: complex, theta: float):
    """Orthonormal hyperbolic Meixner-Pollaczek polynomial.

    ``sqrt((2mu)_n / n!) e^{n theta} 2F1(-n, mu - i y; 2mu; 1 - e^{-2 theta})``,
    normalized to 1 at ``n = 0``. It satisfies

        2 i y sinh(theta) f_n = -(2n + 2mu) cosh(theta) f_n
                                + sqrt(n (n + 2mu - 1)) f_{n-1}
                                + sqrt((n+1)(n + 2mu)) f_{n+1}.

    The value is real when ``y`` is purely imaginary, and is then returned as
    a float; otherwise a complex number is returned.
    """
    if not mu > 0:
        raise DomainError(f"Meixner-Pollaczek parameter must be positive, got {mu!r}")
    if not theta > 0:
        raise DomainError(f"theta must be positive, got {theta!r}")
    if n < 0:
        raise DomainError("degree must be nonnegative")
    y = complex(y)
    log_pref = 0.5 * (log_gamma_ratio(2 * mu + n, 2 * mu) - math.lgamma(n + 1)) + n * theta
    z = -math.expm1(-2.0 * theta)
    val = cmath.exp(log_pref) * hyp2f1_terminating(n, mu - 1j * y, 2 * mu, z)
    if y.real == 0.0:
        return float(val.real)
    return val


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for the weight ``y^nu e^{-y}`` on ``[0, inf)``."""

    order: int
    nu: float
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, f) -> float:
        """Sum of ``weights * f(nodes)``; ``f`` receives the node array."""
        return float(np.dot(self.weights, f(self.nodes)))


def laguerre_jacobi_matrix(order: int, nu: float) -> eigensolve.SymTridiagonal:
    k = np.arange(order, dtype=float)
    return eigensolve.SymTridiagonal(2 * k + nu + 1, -np.sqrt(k[1:] * (k[1:] + nu)))


def gauss_laguerre(order: int, nu: float = 0.0) -> QuadratureRule:
    _check_nu(nu)
    if order < 1 or int(order) != order:
        raise DomainError(f"quadrature order must be a positive integer, got {order!r}")
    return _gauss_laguerre(int(order), float(nu))


@lru_cache(maxsize=256)
def _gauss_laguerre(order: int, nu: float) -> QuadratureRule:
    """Gauss-Laguerre nodes and weights for ``int_0^inf y^nu e^{-y} f(y) dy``.

    Nodes are eigenvalues of the Jacobi matrix of the Laguerre recurrence.
    Each weight is ``Gamma(nu+1) v_0^2`` with ``v`` the unit eigenvector;
    ``v`` is generated at the node by the orthonormal three-term recurrence,
    which keeps full relative accuracy in the tiny weights of large nodes.
    """
    J = laguerre_jacobi_matrix(order, nu)
    nodes = eigensolve.eigenvalue_range(J, 0, order)
    if np.any(np.diff(nodes) <= 0) or nodes[0] <= 0:
        raise ConvergenceError(f"Gauss-Laguerre nodes not strictly increasing and positive: {nodes}")
    # orthonormal recurrence x p_k = a_k p_k + b_k p_{k-1} + b_{k+1} p_{k+1}, p_0 = 1
    a = J.diag
    b = -J.sub
    p_prev = np.zeros(order)
    p = np.ones(order)
    log_scale = np.zeros(order)
    sumsq = np.ones(order)
    for k in range(order - 1):
        p_next = ((nodes - a[k]) * p - (b[k - 1] if k else 0.0) * p_prev) / b[k]
        p_prev, p = p, p_next
        sumsq += p * p
        big = np.abs(p) > 1e100
        if np.any(big):
            # rescale to keep p and the running sum finite
            s = np.where(big, 1e-100, 1.0)
            p = p * s
            p_prev = p_prev * s
            sumsq = sumsq * s * s
            log_scale += np.where(big, 2 * 100 * math.log(10.0), 0.0)
    with np.errstate(under="ignore"):
        weights = math.exp(math.lgamma(nu + 1)) * np.exp(-log_scale) / sumsq
    if not np.all(weights >= 0) or not np.all(np.isfinite(weights)):
        raise ConvergenceError("Gauss-Laguerre weights are not finite and nonnegative")
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return QuadratureRule(order, nu, nodes, weights)

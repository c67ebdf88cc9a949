"""Square-integrable Laguerre basis on the radial half-line.

    phi_n(r) = A_n y^alpha e^{-beta y} L_n^nu(y),   y = (lam r)^2

with ``nu = ell + 1/2``, ``alpha = nu/2 + 1/4`` and ``beta = 1/2``. These
exponents make ``2 alpha - 1/2 = nu`` and ``2 beta = 1``, so with the radial
measure ``dr = dy / (2 lam sqrt(y))`` the overlap integral is exactly the
Laguerre weight and the functions are orthonormal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from traspec.errors import DomainError
from traspec.specfun import gauss_laguerre, laguerre_table, log_gamma_ratio


@dataclass(frozen=True)
class BasisParams:
    lam: float
    ell: int

    def __post_init__(self):
        if not self.lam > 0 or not math.isfinite(self.lam):
            raise DomainError(f"basis scale must be positive and finite, got {self.lam!r}")
        if int(self.ell) != self.ell or self.ell < 0:
            raise DomainError(f"ell must be a nonnegative integer, got {self.ell!r}")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "ell", int(self.ell))

    @property
    def nu(self) -> float:
        return self.ell + 0.5

    @property
    def alpha(self) -> float:
        return self.nu / 2 + 0.25

    @property
    def beta(self) -> float:
        return 0.5


class BasisFunctionSample(NamedTuple):
    n: int
    r: float
    value: float


def map_coordinate(params: BasisParams, r):
    """``y = (lam r)^2``."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise DomainError("radius must be nonnegative")
    y = (params.lam * r_arr) ** 2
    return float(y) if np.ndim(r) == 0 else y


def normalization(params: BasisParams, n: int) -> float:
    """``A_n = sqrt(2 lam Gamma(n+1) / Gamma(n+nu+1))``."""
    if n < 0:
        raise DomainError("basis index must be nonnegative")
    return math.sqrt(2 * params.lam) * math.exp(0.5 * log_gamma_ratio(n + 1, n + params.nu + 1))


def basis_table(params: BasisParams, nmax: int, r) -> np.ndarray:
    """``phi_0 .. phi_nmax`` evaluated at every ``r``; shape ``(nmax+1, len(r))``."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r <= 0):
        raise DomainError("basis functions are evaluated at r > 0")
    y = map_coordinate(params, r)
    lag = laguerre_table(nmax, params.nu, y)
    # one exponentiation of alpha ln y - beta y avoids overflow/underflow of the parts
    log_env = params.alpha * np.log(y) - params.beta * y
    log_norm = np.array([math.log(normalization(params, n)) for n in range(nmax + 1)])
    with np.errstate(under="ignore"):
        env = np.exp(log_env[None, :] + log_norm[:, None])
    return env * lag


def basis_eval(params: BasisParams, n: int, r):
    """``phi_n(r)`` for scalar or array ``r > 0``."""
    if n < 0:
        raise DomainError("basis index must be nonnegative")
    vals = basis_table(params, n, r)[n]
    return float(vals[0]) if np.ndim(r) == 0 else vals.reshape(np.shape(r))


def sample(params: BasisParams, n: int, r: float) -> BasisFunctionSample:
    return BasisFunctionSample(n, float(r), basis_eval(params, n, r))


def overlap(params: BasisParams, n: int, m: int, order: int | None = None) -> float:
    """``int_0^inf phi_n phi_m dr`` by Gauss-Laguerre quadrature in ``y``.

    The default order ``n + m + 2`` integrates the polynomial part exactly.
    """
    if n < 0 or m < 0:
        raise DomainError("basis index must be nonnegative")
    rule = gauss_laguerre(order or n + m + 2, params.nu)
    lag = laguerre_table(max(n, m), params.nu, rule.nodes)
    pref = normalization(params, n) * normalization(params, m) / (2 * params.lam)
    return pref * float(np.dot(rule.weights, lag[n] * lag[m]))

"""Three-term recursion for the energy polynomials and wavefunction synthesis.

The generic relation is

    eps P_n = a_n P_n + b_{n-1} P_{n-1} + b_n P_{n+1},    P_0 = 1, P_{-1} = 0.

For the oscillator systems the energy is folded into ``a_n``, so the
physical sequences are generated at ``eps = 0`` with

    a_n = -(1/xi) [ (1/2 + xi)(2n + nu + 1) - (E + s) / (2 lam^2) ]
    b_n = sqrt((n + 1)(n + nu + 1))

where ``s`` is the paramagnetic shift. The matched Meixner-Pollaczek family
has ``2 mu_mp = nu + 1`` and ``cosh theta = (1/2 + xi)/xi``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from traspec.basis import BasisParams, basis_table
from traspec.errors import ConvergenceError, DegenerateRecursionError, DomainError
from traspec.systems import BFieldSystem, effective_xi

_DEGENERATE = "recursion degenerate; spectrum is exactly diagonal"


@dataclass(frozen=True)
class RecursionCoeffs:
    a: Callable[[int], float]
    b: Callable[[int], float]
    tag: str = ""


@dataclass(frozen=True)
class PolySequence:
    """``P_0 .. P_N`` with the recursion they satisfy.

    ``first_row`` is the first index ``n`` at which the relation is imposed:
    0 for forward sequences (``P_{-1} = 0``), 1 for minimal solutions, which
    meet the ``n = 0`` row only at an eigenvalue.
    """

    values: np.ndarray
    eps: complex
    coeffs: RecursionCoeffs
    first_row: int = 0

    def __len__(self):
        return self.values.size

    def _row(self, n):
        P = self.values
        a, b = self.coeffs.a, self.coeffs.b
        prev = b(n - 1) * P[n - 1] if n > 0 else 0.0
        return self.eps * P[n] - a(n) * P[n] - prev - b(n) * P[n + 1]

    def residuals(self) -> np.ndarray:
        """``eps P_n - a_n P_n - b_{n-1} P_{n-1} - b_n P_{n+1}`` for ``first_row <= n < len - 1``."""
        rows = range(self.first_row, self.values.size - 1)
        return np.array([self._row(n) for n in rows], dtype=self.values.dtype)

    def boundary_residual(self) -> float:
        """Relative residual of the ``n = 0`` row; small only at an eigenvalue."""
        if self.values.size < 2:
            return 0.0
        return abs(self._row(0)) / max(1.0, float(np.max(np.abs(self.values))))

    def max_relative_residual(self) -> float:
        if self.values.size - 1 <= self.first_row:
            return 0.0
        scale = max(1.0, float(np.max(np.abs(self.values))))
        return float(np.max(np.abs(self.residuals()))) / scale


def _coupling(coeffs, n):
    bn = coeffs.b(n)
    if bn == 0:
        raise DegenerateRecursionError(f"b_{n} = 0: recursion cannot advance")
    return bn


def run_three_term(coeffs: RecursionCoeffs, eps: complex, N: int) -> PolySequence:
    """Forward recursion from ``P_0 = 1``; returns ``P_0 .. P_N``."""
    if N < 0:
        raise DomainError("N must be nonnegative")
    dtype = complex if isinstance(eps, complex) else float
    P = np.zeros(N + 1, dtype=dtype)
    P[0] = 1.0
    for n in range(N):
        prev = coeffs.b(n - 1) * P[n - 1] if n > 0 else 0.0
        P[n + 1] = ((eps - coeffs.a(n)) * P[n] - prev) / _coupling(coeffs, n)
    return PolySequence(P, eps, coeffs)


def minimal_solution(
    coeffs: RecursionCoeffs,
    eps: complex,
    N: int,
    *,
    rtol: float = 1e-13,
    max_start: int = 20000,
) -> PolySequence:
    """Minimal solution of the recursion, normalized to ``P_0 = 1`` (Miller's method).

    Recurs downward from a start index well beyond ``N`` and raises the start
    until ``P_0 .. P_N`` change by less than ``rtol`` relative (the rounding
    floor of the long downward sweep is a few 1e-14). At an exact eigenvalue of the infinite
    problem this is the forward sequence without the exponential error growth
    of forward evaluation.
    """
    if N < 0:
        raise DomainError("N must be nonnegative")
    dtype = complex if isinstance(eps, complex) else float

    def backward(K):
        P = np.zeros(K + 2, dtype=dtype)
        P[K] = 1.0
        for n in range(K, 0, -1):
            P[n - 1] = ((eps - coeffs.a(n)) * P[n] - coeffs.b(n) * P[n + 1]) / _coupling(coeffs, n - 1)
            if abs(P[n - 1]) > 1e250:
                P[n - 1 :] *= 1e-250
        if P[0] == 0:
            raise ConvergenceError("minimal solution vanishes at n = 0")
        return P[: N + 1] / P[0]

    K = N + 40
    old = backward(K)
    while True:
        K = 2 * K
        if K > max_start:
            raise ConvergenceError(f"backward recursion not converged with start index {K // 2}")
        new = backward(K)
        if np.max(np.abs(new - old)) <= rtol * np.max(np.abs(new)):
            return PolySequence(new, eps, coeffs, first_row=1)
        old = new


def _energy_coeffs(sys, lam, E, tag):
    x = effective_xi(sys, lam)
    if x == 0:
        raise DegenerateRecursionError(_DEGENERATE)
    nu = sys.nu
    half = 0.5 + x
    level = (E + sys.paramagnetic_shift) / (2 * lam * lam)
    return RecursionCoeffs(
        a=lambda n: -(half * (2 * n + nu + 1) - level) / x,
        b=lambda n: math.sqrt((n + 1) * (n + nu + 1)),
        tag=tag,
    )


def efield_coeffs(sys, lam: float, E: float) -> RecursionCoeffs:
    """Energy-polynomial coefficients for the electric-field system, for ``eps = 0``."""
    return _energy_coeffs(sys, lam, E, f"efield E={E!r} lam={lam!r}")


def bfield_coeffs(sys: BFieldSystem, lam: float, E: float) -> RecursionCoeffs:
    """As :func:`efield_coeffs`, with the paramagnetic term in the constant part of ``a_n``."""
    return _energy_coeffs(sys, lam, E, f"bfield E={E!r} lam={lam!r} mu_az={sys.mu_az}")


def energy_coeffs(sys, lam: float, E: float) -> RecursionCoeffs:
    if isinstance(sys, BFieldSystem):
        return bfield_coeffs(sys, lam, E)
    return efield_coeffs(sys, lam, E)


def energy_polynomials(sys, lam: float, E: float, N: int) -> PolySequence:
    """``P_0(E) .. P_N(E)`` by forward recursion."""
    return run_three_term(energy_coeffs(sys, lam, E), 0.0, N)


@dataclass(frozen=True)
class MPParams:
    mu_mp: float
    theta: float
    cosh_theta: float
    closed_form_cosh: float | None = None


def match_meixner_pollaczek(sys, lam: float) -> MPParams:
    """Meixner-Pollaczek parameters matching the energy recursion at scale ``lam``.

    ``closed_form_cosh`` is ``omega^4 / (2 q zeta)`` for the electric-field
    system and ``4 omega^4 c^2 / (q^2 B^2)`` for the magnetic one (``None``
    when the field vanishes); it agrees with ``cosh_theta`` only for one
    particular basis scale.
    """
    x = effective_xi(sys, lam)
    if x == 0:
        raise DegenerateRecursionError(_DEGENERATE)
    ch = (0.5 + x) / x
    if ch < 1:
        raise DomainError(f"no real hyperbolic angle: cosh theta = {ch!r} < 1")
    if isinstance(sys, BFieldSystem):
        qb = sys.q * sys.B
        closed = 4 * sys.omega**4 * sys.c**2 / qb**2 if qb != 0 else None
    else:
        qz = sys.q * sys.zeta
        closed = sys.omega**4 / (2 * qz) if qz != 0 else None
    return MPParams((sys.ell + 1.5) / 2, math.acosh(ch), ch, closed)


def mp_coeffs(mu: float, theta: float) -> RecursionCoeffs:
    """Hyperbolic Meixner-Pollaczek recursion in the generic form."""
    ch = math.cosh(theta)
    return RecursionCoeffs(
        a=lambda n: -(2 * n + 2 * mu) * ch,
        b=lambda n: math.sqrt((n + 1) * (n + 2 * mu)),
        tag=f"meixner-pollaczek mu={mu!r} theta={theta!r}",
    )


def mp_energy_variable(y: complex, theta: float) -> complex:
    """``eps = 2 i y sinh(theta)``; real when ``y`` is purely imaginary."""
    eps = 2j * complex(y) * math.sinh(theta)
    return eps.real if complex(y).real == 0 else eps


def mp_argument(sys, lam: float, E: float, params: MPParams | None = None) -> complex:
    """Imaginary argument ``y`` at which the matched polynomial equals ``P_n(E)``."""
    params = params or match_meixner_pollaczek(sys, lam)
    x = effective_xi(sys, lam)
    return 1j * (E + sys.paramagnetic_shift) / (4 * lam * lam * x * math.sinh(params.theta))


def mp_recurrence_residuals(values: Sequence[complex], mu: float, y: complex, theta: float, nu: float):
    """Max residuals of the two forms of the Meixner-Pollaczek recursion.

    ``"standard"`` uses ``sqrt((n+1)(n+2mu))`` as the upper coupling,
    ``"variant"`` uses ``sqrt((n+1)(n+nu+1))``. They coincide when
    ``2 mu = nu + 1``.
    """
    f = np.asarray(values)
    ch, sh = math.cosh(theta), math.sinh(theta)
    out = {}
    for name, upper in (
        ("standard", lambda n: math.sqrt((n + 1) * (n + 2 * mu))),
        ("variant", lambda n: math.sqrt((n + 1) * (n + nu + 1))),
    ):
        worst = 0.0
        for n in range(f.size - 1):
            lower = math.sqrt(n * (n + 2 * mu - 1)) * f[n - 1] if n > 0 else 0.0
            r = 2j * y * sh * f[n] + (2 * n + 2 * mu) * ch * f[n] - lower - upper(n) * f[n + 1]
            worst = max(worst, abs(r))
        out[name] = worst / max(1.0, float(np.max(np.abs(f))))
    return out


def _expansion_coefficients(sys, lam, E, N_terms, method):
    if N_terms < 1:
        raise DomainError("need at least one expansion term")
    if N_terms == 1:
        return np.ones(1)
    coeffs = energy_coeffs(sys, lam, E)
    if method == "forward":
        return run_three_term(coeffs, 0.0, N_terms - 1).values
    if method == "minimal":
        return minimal_solution(coeffs, 0.0, N_terms - 1).values
    raise DomainError(f"unknown method {method!r}; use 'forward' or 'minimal'")


def wavefunction_partial_sums(
    sys,
    lam: float,
    E: float,
    r,
    depths: Sequence[int],
    *,
    weight: float | None = None,
    method: str = "minimal",
) -> np.ndarray:
    """Partial sums ``sum_{n<d} P_n(E) phi_n(r)`` for each depth ``d``; shape ``(len(depths), len(r))``.

    ``weight`` multiplies every sum (an energy-dependent normalization supplied
    by the caller); by default the sums are unweighted.

    ``method="minimal"`` takes the expansion coefficients from the minimal
    solution of the recursion, which is what a bound state at an exact
    eigenvalue requires; ``"forward"`` uses the forward polynomials, whose
    rounding errors grow geometrically for a detuned basis.
    """
    depths = [int(d) for d in depths]
    if not depths or min(depths) < 1:
        raise DomainError("partial-sum depths must be positive")
    P = _expansion_coefficients(sys, lam, E, max(depths), method)
    phi = basis_table(BasisParams(lam, sys.ell), max(depths) - 1, r)
    terms = P[:, None] * phi
    csum = np.cumsum(terms, axis=0)
    out = csum[[d - 1 for d in depths]]
    if weight is not None:
        out = out * weight
    return out


def wavefunction_eval(
    sys,
    lam: float,
    E: float,
    r,
    N_terms: int,
    *,
    weight: float | None = None,
    method: str = "minimal",
):
    """``sum_{n < N_terms} P_n(E) phi_n(r)``, optionally times ``weight``.

    Raises
    ------
    DegenerateRecursionError
        At the diagonalizing scale with ``N_terms > 1``.
    """
    vals = wavefunction_partial_sums(sys, lam, E, r, [N_terms], weight=weight, method=method)[0]
    return float(vals[0]) if np.ndim(r) == 0 else vals.reshape(np.shape(r))

"""Physical systems and their coupling to the Laguerre basis scale.

Units are hbar = m = 1. The oscillator potential is ``omega^4 r^2 / 2``, so the
bare oscillator frequency is ``omega^2``. Both field couplings add a further
``r^2`` term; the total is written ``Omega^2 r^2 / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from traspec.errors import DomainError, NonConfiningError


def _check_ell(ell):
    if int(ell) != ell or ell < 0:
        raise DomainError(f"ell must be a nonnegative integer, got {ell!r}")


@dataclass(frozen=True)
class EFieldSystem:
    """Spherical oscillator with the ``q zeta r^2`` electric-field coupling."""

    omega: float
    q: float
    zeta: float
    ell: int

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega!r}")
        if not self.zeta >= 0:
            raise DomainError(f"zeta must be nonnegative, got {self.zeta!r}")
        _check_ell(self.ell)
        object.__setattr__(self, "ell", int(self.ell))
        if not self.omega_sq_total > 0:
            raise NonConfiningError(
                f"omega^4 + 2 q zeta = {self.omega_sq_total!r} <= 0: potential is not confining"
            )

    kind = "efield"

    @property
    def nu(self) -> float:
        return self.ell + 0.5

    @property
    def omega_sq_total(self) -> float:
        """``omega^4 + 2 q zeta``, twice the coefficient of ``r^2`` in the potential."""
        return self.omega**4 + 2.0 * self.q * self.zeta

    @property
    def paramagnetic_shift(self) -> float:
        return 0.0

    def potential(self, r):
        return 0.5 * self.omega**4 * r**2 + self.q * self.zeta * r**2

    def describe(self) -> str:
        return f"efield(omega={self.omega!r}, q={self.q!r}, zeta={self.zeta!r}, ell={self.ell})"


@dataclass(frozen=True)
class BFieldSystem:
    """Spherical oscillator in a uniform field along z.

    The diamagnetic term ``q^2 B^2 (x^2 + y^2) / 8c^2`` is replaced by the
    isotropic ``q^2 B^2 r^2 / 4c^2``; the paramagnetic term acts on an
    ``L_z`` eigenstate with eigenvalue ``mu_az``.
    """

    omega: float
    q: float
    B: float
    c: float
    ell: int
    mu_az: int

    kind = "bfield"

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError(f"omega must be positive, got {self.omega!r}")
        if not self.B >= 0:
            raise DomainError(f"B must be nonnegative, got {self.B!r}")
        if not self.c > 0:
            raise DomainError(f"c must be positive, got {self.c!r}")
        _check_ell(self.ell)
        if int(self.mu_az) != self.mu_az:
            raise DomainError(f"mu_az must be an integer, got {self.mu_az!r}")
        object.__setattr__(self, "ell", int(self.ell))
        object.__setattr__(self, "mu_az", int(self.mu_az))
        if abs(self.mu_az) > self.ell:
            raise DomainError(f"|mu_az| = {abs(self.mu_az)} exceeds ell = {self.ell}")

    @property
    def nu(self) -> float:
        return self.ell + 0.5

    @property
    def omega_sq_total(self) -> float:
        """``omega^4 + q^2 B^2 / (2 c^2)``."""
        return self.omega**4 + (self.q * self.B / self.c) ** 2 / 2.0

    @property
    def paramagnetic_shift(self) -> float:
        return paramagnetic_shift(self)

    def potential(self, r):
        """Radial potential including the constant paramagnetic term."""
        k = 0.5 * self.omega**4 + (self.q * self.B / self.c) ** 2 / 4.0
        return k * r**2 - self.q * self.B * self.mu_az / (2.0 * self.c)

    def describe(self) -> str:
        return (
            f"bfield(omega={self.omega!r}, q={self.q!r}, B={self.B!r}, c={self.c!r}, "
            f"ell={self.ell}, mu_az={self.mu_az})"
        )


@dataclass(frozen=True)
class Coupling:
    """Dimensionless coupling ``xi`` and linear potential slope ``eta`` at scale ``lam``."""

    xi: float
    eta: float
    lam: float


def _check_lam(lam):
    if not lam > 0 or not math.isfinite(lam):
        raise DomainError(f"basis scale must be positive and finite, got {lam!r}")


def xi_efield(sys: EFieldSystem, lam: float) -> float:
    _check_lam(lam)
    lam4 = lam**4
    return sys.omega**4 / (4 * lam4) + sys.q * sys.zeta / (2 * lam4) - 0.25


def xi_bfield(sys: BFieldSystem, lam: float) -> float:
    _check_lam(lam)
    lam4 = lam**4
    return sys.omega**4 / (4 * lam4) + (sys.q * sys.B) ** 2 / (8 * lam4 * sys.c**2) - 0.25


def xi(sys, lam: float) -> float:
    if isinstance(sys, BFieldSystem):
        return xi_bfield(sys, lam)
    return xi_efield(sys, lam)


def effective_xi(sys, lam: float) -> float:
    """``xi`` with values below its own rounding error snapped to exactly zero.

    At the diagonalizing scale the formula leaves a residue of a few ulps;
    snapping it lets the Hamiltonian come out exactly diagonal.
    """
    value = xi(sys, lam)
    scale = sys.omega_sq_total / (4 * lam**4) + 0.25
    if abs(value) <= 8 * 2.0**-52 * scale:
        return 0.0
    return value


def eta(sys, lam: float) -> float:
    """Slope of the potential in ``y = (lam r)^2``: ``V = eta * y``, paramagnetic part excluded."""
    _check_lam(lam)
    return sys.omega_sq_total / (2 * lam**2)


def coupling(sys, lam: float) -> Coupling:
    return Coupling(xi(sys, lam), eta(sys, lam), lam)


def effective_frequency(sys) -> float:
    """``Omega = sqrt(omega_sq_total)``, the frequency of the total quadratic potential."""
    w2 = sys.omega_sq_total
    if not w2 > 0:
        raise NonConfiningError(f"Omega^2 = {w2!r} <= 0: potential is not confining")
    return math.sqrt(w2)


def lambda_star(sys) -> float:
    """Basis scale at which ``xi`` vanishes: ``lambda*^4 = Omega^2``."""
    return math.sqrt(effective_frequency(sys))


def paramagnetic_shift(sys: BFieldSystem) -> float:
    """``q B mu_az / (2c)``; the Hamiltonian carries it with a minus sign."""
    return sys.q * sys.B * sys.mu_az / (2.0 * sys.c)

"""Independent ground truth for the basis-expansion results.

A three-point finite-difference discretization of the radial equation

    -u''/2 + [ell (ell+1) / (2 r^2) + V(r)] u = E u,   u(0) = u(r_max) = 0

and the closed-form levels of a quadratic potential. Neither touches the
Laguerre machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from traspec.eigensolve import Spectrum, SymTridiagonal, eigenvalues, eigenvectors
from traspec.errors import DomainError, NonConfiningError


@dataclass(frozen=True)
class RadialGrid:
    r_max: float
    M: int

    def __post_init__(self):
        if not self.r_max > 0:
            raise DomainError(f"r_max must be positive, got {self.r_max!r}")
        if int(self.M) != self.M or self.M < 3:
            raise DomainError(f"need at least 3 interior points, got {self.M!r}")

    @property
    def h(self) -> float:
        return self.r_max / (self.M + 1)

    @property
    def points(self) -> np.ndarray:
        return self.h * np.arange(1, self.M + 1)

    def halved(self) -> "RadialGrid":
        """Same ``r_max`` with half the spacing."""
        return RadialGrid(self.r_max, 2 * self.M + 1)


@dataclass(frozen=True)
class FDResult:
    spectrum: Spectrum
    grid: RadialGrid
    boundary_warning: bool
    edge_amplitude: float

    @property
    def energies(self) -> np.ndarray:
        return self.spectrum.energies


def fd_matrix(V: Callable, ell: int, grid: RadialGrid) -> SymTridiagonal:
    r = grid.points
    h2 = grid.h**2
    diag = 1.0 / h2 + ell * (ell + 1) / (2 * r * r) + np.asarray(V(r), dtype=float)
    sub = np.full(grid.M - 1, -0.5 / h2)
    return SymTridiagonal(diag, sub)


def fd_spectrum(V: Callable, ell: int, grid: RadialGrid, k: int) -> FDResult:
    """Lowest ``k`` Dirichlet eigenvalues of the discretized radial equation.

    The error is ``O(h^2)``. ``boundary_warning`` is set when the ground
    state still has more than ``1e-8`` of its peak amplitude in the last
    interior point, i.e. ``r_max`` is too small.
    """
    if k < 1 or k >= grid.M:
        raise DomainError(f"level count {k} must satisfy 1 <= k < M = {grid.M}")
    T = fd_matrix(V, ell, grid)
    spec = eigenvalues(T, k, system=f"finite-difference ell={ell}")
    u0 = eigenvectors(T, spec.energies[:1])[:, 0]
    edge = float(abs(u0[-1]) / np.max(np.abs(u0)))
    return FDResult(spec, grid, edge > 1e-8, edge)


def default_r_max(omega_sq: float, ell: int, k: int) -> float:
    """Eight classical turning radii of level ``k - 1`` of ``V = omega_sq r^2 / 2``."""
    E = quadratic_spectrum(omega_sq, ell, k - 1)
    return 8.0 * math.sqrt(2.0 * E / omega_sq)


def quadratic_spectrum(omega_sq: float, ell: int, n: int) -> float:
    """Level ``n`` of ``V = omega_sq r^2 / 2``: ``Omega (2n + ell + 3/2)``."""
    if not omega_sq > 0:
        raise NonConfiningError(f"Omega^2 = {omega_sq!r} must be positive")
    return math.sqrt(omega_sq) * (2 * n + ell + 1.5)


def fd_system_spectrum(sys, k: int, M: int = 4000, r_max: float | None = None) -> FDResult:
    """FD levels of a physical system, with the potential built from its raw parameters."""
    if r_max is None:
        r_max = default_r_max(sys.omega_sq_total, sys.ell, k)
    return fd_spectrum(sys.potential, sys.ell, RadialGrid(r_max, M), k)


@dataclass(frozen=True)
class RichardsonResult:
    coarse: np.ndarray
    fine: np.ndarray
    finer: np.ndarray
    order: np.ndarray
    extrapolated: np.ndarray


def richardson(V: Callable, ell: int, grid: RadialGrid, k: int) -> RichardsonResult:
    """Three successive grid halvings; observed order and ``h^2`` extrapolation."""
    g1 = grid
    g2 = g1.halved()
    g3 = g2.halved()
    e1, e2, e3 = (fd_spectrum(V, ell, g, k).energies for g in (g1, g2, g3))
    order = np.log2(np.abs(e1 - e2) / np.abs(e2 - e3))
    extrap = e3 + (e3 - e2) / 3.0
    return RichardsonResult(e1, e2, e3, order, extrap)


def characteristic_roots(T: SymTridiagonal) -> np.ndarray:
    """Eigenvalues as roots of the characteristic polynomial.

    Coefficients come from the determinant recurrence
    ``p_i(x) = (d_i - x) p_{i-1}(x) - e_{i-1}^2 p_{i-2}(x)``; roots from
    the companion matrix are polished with Newton steps on the same
    recurrence. Meant for small matrices (``N <= 8``).
    """
    n = T.N
    p_prev = np.array([1.0])
    p = np.array([T.diag[0], -1.0])  # lowest degree first
    for i in range(1, n):
        nxt = np.zeros(i + 2)
        nxt[: i + 1] += T.diag[i] * p
        nxt[1 : i + 2] -= p
        nxt[:i] -= T.sub[i - 1] ** 2 * p_prev
        p_prev, p = p, nxt
    roots = np.sort(np.roots(p[::-1]).real)

    def det_and_slope(x):
        q0, q1 = 1.0, T.diag[0] - x
        dq0, dq1 = 0.0, -1.0
        for i in range(1, n):
            e2 = T.sub[i - 1] ** 2
            q_new = (T.diag[i] - x) * q1 - e2 * q0
            dq_new = -q1 + (T.diag[i] - x) * dq1 - e2 * dq0
            q0, q1, dq0, dq1 = q1, q_new, dq1, dq_new
        return q1, dq1

    for j, x in enumerate(roots):
        for _ in range(4):
            f, df = det_and_slope(x)
            if df == 0 or not math.isfinite(f / df):
                break
            x -= f / df
        roots[j] = x
    return np.sort(roots)

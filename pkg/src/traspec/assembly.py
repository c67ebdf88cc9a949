"""Truncated Hamiltonian matrices in the Laguerre basis.

With the tridiagonality exponents the Hamiltonian acts on a basis function as

    H phi_n = A_n y^alpha e^{-y/2} [lam^2 (2n+nu+1) - lam^2 y / 2 + eta y - s] L_n^nu(y)

where ``V = eta y`` is the quadratic potential, ``s`` the paramagnetic shift
(zero for the electric-field system). The three-term Laguerre recurrence
turns the ``y`` terms into nearest-neighbour couplings, giving

    H_nn      = 2 lam^2 (1/2 + xi) (2n + nu + 1) - s
    H_n,n+1   = -2 lam^2 xi sqrt((n+1)(n+nu+1))

The energy is kept out of the matrix: its eigenvalues are the spectrum.
"""

from __future__ import annotations

import numpy as np

from traspec.basis import BasisParams, normalization
from traspec.eigensolve import SymTridiagonal
from traspec.errors import DomainError, QuadratureOrderError
from traspec.specfun import gauss_laguerre, laguerre_table
from traspec.systems import (  # noqa: F401  re-exported
    BFieldSystem,
    Coupling,
    EFieldSystem,
    coupling,
    effective_xi,
    eta,
    lambda_star,
    paramagnetic_shift,
    xi,
    xi_bfield,
    xi_efield,
)


def hamiltonian_matrix(sys, lam: float, N: int) -> SymTridiagonal:
    """Leading ``N x N`` block of the Hamiltonian in the basis of scale ``lam``."""
    if int(N) != N or N < 1:
        raise DomainError(f"basis size must be a positive integer, got {N!r}")
    x = effective_xi(sys, lam)
    nu = sys.nu
    n = np.arange(int(N), dtype=float)
    lam2 = lam * lam
    diag = 2 * lam2 * (0.5 + x) * (2 * n + nu + 1) - sys.paramagnetic_shift
    sub = -2 * lam2 * x * np.sqrt((n[:-1] + 1) * (n[:-1] + nu + 1)) + 0.0
    return SymTridiagonal(diag, sub)


def matrix_element_quadrature(sys, lam: float, m: int, n: int, order: int | None = None) -> float:
    """``<phi_m | H | phi_n>`` by Gauss-Laguerre quadrature of the action of ``H``.

    The potential enters through its slope ``eta`` in ``y``, computed straight
    from the physical parameters, not through ``xi``.

    Raises
    ------
    QuadratureOrderError
        If ``order < m + n + 4``.
    """
    if m < 0 or n < 0:
        raise DomainError("basis index must be nonnegative")
    need = m + n + 4
    if order is None:
        order = need
    if order < need:
        raise QuadratureOrderError(f"order {order} too small for ({m}, {n}); need at least {need}")
    params = BasisParams(lam, sys.ell)
    nu = params.nu
    rule = gauss_laguerre(order, nu)
    y = rule.nodes
    lag = laguerre_table(max(m, n), nu, y)
    lam2 = lam * lam
    action = lam2 * (2 * n + nu + 1) - lam2 * y / 2 + eta(sys, lam) * y - sys.paramagnetic_shift
    pref = normalization(params, m) * normalization(params, n) / (2 * lam)
    return pref * float(np.dot(rule.weights, action * lag[n] * lag[m]))


def quadrature_matrix(sys, lam: float, N: int) -> np.ndarray:
    """Dense ``N x N`` matrix of quadrature elements, for checking ``hamiltonian_matrix``."""
    out = np.empty((N, N))
    for m in range(N):
        for n in range(N):
            out[m, n] = matrix_element_quadrature(sys, lam, m, n)
    return out

"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class NonConfiningError(DomainError):
    """The total radial potential does not confine the particle."""


class DegenerateRecursionError(ArithmeticError):
    """The energy recursion cannot advance because its coupling vanishes.

    Happens at the diagonalizing basis scale, where the Hamiltonian matrix is
    exactly diagonal and the spectrum is read off the diagonal instead.
    """


class QuadratureOrderError(ValueError):
    """The requested quadrature order is too low to integrate exactly."""


class ConvergenceError(RuntimeError):
    """An iterative numerical procedure did not converge."""

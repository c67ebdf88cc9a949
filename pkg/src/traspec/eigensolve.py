"""Symmetric tridiagonal eigenvalues and the closed-form oscillator spectra.

Eigenvalues are found by Sturm-sequence bisection, which is deterministic
and gives each eigenvalue to a few ulps of the matrix norm. Eigenvectors are
produced only on request, by inverse iteration on the converged eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from traspec import kernels
from traspec.errors import DomainError
from traspec.systems import BFieldSystem, EFieldSystem, effective_frequency

_EPS = np.finfo(float).eps
_SAFMIN = np.finfo(float).tiny


@dataclass(frozen=True)
class SymTridiagonal:
    """Symmetric tridiagonal matrix stored as its diagonal and one off-diagonal."""

    diag: np.ndarray
    sub: np.ndarray

    def __post_init__(self):
        d = np.array(self.diag, dtype=float).reshape(-1)
        e = np.array(self.sub, dtype=float).reshape(-1)
        if d.size == 0:
            raise DomainError("matrix must have at least one row")
        if e.size != d.size - 1:
            raise DomainError(f"sub has length {e.size}, expected {d.size - 1}")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise DomainError("matrix entries must be finite")
        d.flags.writeable = False
        e.flags.writeable = False
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "sub", e)

    @property
    def N(self) -> int:
        return self.diag.size

    def norm(self) -> float:
        """Max absolute row sum."""
        row = np.abs(self.diag).copy()
        row[:-1] += np.abs(self.sub)
        row[1:] += np.abs(self.sub)
        return float(row.max())

    def is_diagonal(self) -> bool:
        return not np.any(self.sub)

    def leading(self, n: int) -> "SymTridiagonal":
        """Leading ``n x n`` principal submatrix."""
        return SymTridiagonal(self.diag[:n], self.sub[: max(n - 1, 0)])

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.sub, 1) + np.diag(self.sub, -1)

    def matvec(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        out = self.diag * v
        out[:-1] += self.sub * v[1:]
        out[1:] += self.sub * v[:-1]
        return out


@dataclass(frozen=True)
class Spectrum:
    """Lowest ``k`` eigenvalues of an ``N x N`` truncation, ascending."""

    energies: np.ndarray
    N: int
    k: int
    system: str = ""
    lam: float | None = None
    eigenvectors: np.ndarray | None = field(default=None, repr=False)

    def __len__(self):
        return self.k

    def __getitem__(self, i):
        return self.energies[i]


def _pivmin(T: SymTridiagonal) -> float:
    emax = float(np.max(T.sub * T.sub)) if T.N > 1 else 0.0
    return _SAFMIN * max(1.0, emax)


def gershgorin_bounds(T: SymTridiagonal) -> tuple[float, float]:
    radius = np.zeros(T.N)
    radius[:-1] += np.abs(T.sub)
    radius[1:] += np.abs(T.sub)
    lo = float(np.min(T.diag - radius))
    hi = float(np.max(T.diag + radius))
    pad = 2.0 * _EPS * max(abs(lo), abs(hi)) + _SAFMIN
    return lo - pad, hi + pad


def count_below(T: SymTridiagonal, x: float) -> int:
    """Number of eigenvalues strictly below ``x`` (Sturm count)."""
    return int(kernels.sturm_count(T.diag, T.sub, float(x), _pivmin(T)))


def eigenvalue_range(T: SymTridiagonal, first: int, last: int) -> np.ndarray:
    """Eigenvalues with ascending indices ``first .. last-1``."""
    if not 0 <= first <= last <= T.N:
        raise DomainError(f"index range [{first}, {last}) outside 0..{T.N}")
    if T.is_diagonal():
        return np.sort(T.diag)[first:last].copy()
    lo, hi = gershgorin_bounds(T)
    abstol = _EPS * T.norm()
    return np.asarray(
        kernels.bisect_eigenvalues(T.diag, T.sub, first, last, lo, hi, abstol, _pivmin(T))
    )


def eigenvalues(
    T: SymTridiagonal,
    k: int,
    *,
    system: str = "",
    lam: float | None = None,
    vectors: bool = False,
) -> Spectrum:
    """The ``k`` smallest eigenvalues of ``T``.

    Parameters
    ----------
    T : SymTridiagonal
    k : int
        Number of eigenvalues, ``1 <= k <= T.N``.
    system, lam :
        Descriptive metadata copied onto the result.
    vectors : bool
        Also compute unit eigenvectors by inverse iteration (columns).

    Returns
    -------
    Spectrum
    """
    if not 1 <= k <= T.N:
        raise DomainError(f"requested {k} eigenvalues of a {T.N}x{T.N} matrix")
    energies = eigenvalue_range(T, 0, k)
    vecs = eigenvectors(T, energies) if vectors else None
    return Spectrum(energies, T.N, k, system, lam, vecs)


def _fix_sign(v: np.ndarray) -> np.ndarray:
    big = np.flatnonzero(np.abs(v) > 1e-3 * np.max(np.abs(v)))
    if v[big[0]] < 0:
        v = -v
    return v


def eigenvectors(T: SymTridiagonal, energies: Sequence[float], iterations: int = 3) -> np.ndarray:
    """Unit eigenvectors for the given eigenvalues, one column each.

    Inverse iteration from a fixed pseudo-random start, so repeated calls give
    identical bits. Vectors for nearby eigenvalues are re-orthogonalized
    against earlier ones. The sign is chosen so that the first non-negligible
    component is positive.
    """
    energies = np.atleast_1d(np.asarray(energies, dtype=float))
    n = T.N
    out = np.empty((n, energies.size))
    if T.is_diagonal():
        order = np.argsort(T.diag, kind="stable")
        used = set()
        for j, e in enumerate(energies):
            idx = next(i for i in order if i not in used and T.diag[i] == e)
            used.add(idx)
            out[:, j] = 0.0
            out[idx, j] = 1.0
        return out
    rng = np.random.default_rng(20240607)
    start = rng.uniform(-1.0, 1.0, n)
    pivmin = _EPS * T.norm()
    gap_tol = 1e-3 * T.norm()
    for j, e in enumerate(energies):
        v = start / np.linalg.norm(start)
        for _ in range(iterations):
            v = np.asarray(kernels.tridiag_solve_shifted(T.diag, T.sub, float(e), v, pivmin))
            for i in range(j):
                if abs(energies[i] - e) < gap_tol:
                    v -= np.dot(out[:, i], v) * out[:, i]
            v /= np.linalg.norm(v)
        out[:, j] = _fix_sign(v)
    return out


def analytic_spectrum_efield(sys: EFieldSystem, n: int) -> float:
    """Closed-form level ``n`` of the oscillator in an electric field.

    Equals ``lambda*^2 (2n + nu + 1)`` where ``lambda*^4 = omega^4 + 2 q zeta``;
    with no field this is ``omega^2 (2n + nu + 1)`` exactly.
    """
    if n < 0:
        raise DomainError("level index must be nonnegative")
    scale = sys.omega**2 if sys.q * sys.zeta == 0 else effective_frequency(sys)
    return scale * (2 * n + sys.nu + 1)


def analytic_spectrum_bfield(sys: BFieldSystem, n: int) -> float:
    """Closed-form level ``n`` in a magnetic field: oscillator term minus ``q B mu / 2c``."""
    if n < 0:
        raise DomainError("level index must be nonnegative")
    if abs(sys.mu_az) > sys.ell:
        raise DomainError(f"|mu_az| = {abs(sys.mu_az)} exceeds ell = {sys.ell}")
    scale = sys.omega**2 if sys.q * sys.B == 0 else effective_frequency(sys)
    return scale * (2 * n + sys.nu + 1) - sys.paramagnetic_shift


def analytic_spectrum(sys, n: int) -> float:
    if isinstance(sys, BFieldSystem):
        return analytic_spectrum_bfield(sys, n)
    return analytic_spectrum_efield(sys, n)


def field_free_spectrum(sys, n: int) -> float:
    """``omega^2 (2n + nu + 1)`` minus any paramagnetic shift.

    This is the level formula that ignores the field's quadratic contribution
    to the confinement; it is kept only to report how far it sits from the
    exact levels.
    """
    shift = sys.paramagnetic_shift if isinstance(sys, BFieldSystem) else 0.0
    return sys.omega**2 * (2 * n + sys.nu + 1) - shift


def larmor_frequency(e: float, B: float, c: float = 1.0, m: float = 1.0) -> float:
    """``e B / (2 m c)``."""
    return e * B / (2.0 * m * c)


@dataclass(frozen=True)
class ConvergenceTable:
    sizes: tuple[int, ...]
    energies: np.ndarray  # shape (len(sizes), k)

    def rows(self):
        for N, row in zip(self.sizes, self.energies):
            yield N, tuple(float(x) for x in row)


def convergence_study(sys, lam: float, k: int, sizes: Iterable[int]) -> ConvergenceTable:
    """Lowest ``k`` eigenvalues for each basis size in ``sizes`` (sorted ascending).

    Successive truncations are leading principal submatrices of one another,
    so every column is nonincreasing in ``N``.
    """
    from traspec.assembly import hamiltonian_matrix

    sizes = tuple(sorted(set(int(N) for N in sizes)))
    if not sizes:
        raise DomainError("no basis sizes given")
    if sizes[0] < k:
        raise DomainError(f"basis size {sizes[0]} smaller than level count {k}")
    full = hamiltonian_matrix(sys, lam, sizes[-1])
    table = np.array([eigenvalue_range(full.leading(N), 0, k) for N in sizes])
    return ConvergenceTable(sizes, table)


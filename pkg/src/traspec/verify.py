"""Self-checks run by ``traspec verify``.

Each suite returns a list of :class:`CheckResult`. Library functions are
reached through their modules at call time, so a patched or broken function
is what gets checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from traspec import assembly, basis, eigensolve, oracle, recursion, specfun, systems
from traspec.systems import BFieldSystem, EFieldSystem

_SEED = 1357


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    measured: float
    tolerance: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.measured <= self.tolerance)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        text = f"{tag}  {self.suite}.{self.name}  measured={self.measured:.3e}  tol={self.tolerance:.1e}"
        return f"{text}  [{self.note}]" if self.note else text


def _guard(suite, name, tol, fn):
    # an exception inside a check is a failure of that check, not of the run
    try:
        measured, note = fn()
    except Exception as exc:  # noqa: BLE001
        return CheckResult(suite, name, math.inf, tol, f"raised {type(exc).__name__}: {exc}")
    if not math.isfinite(measured):
        measured = math.inf
    return CheckResult(suite, name, float(measured), tol, note)


# --- specfun ---------------------------------------------------------------


def _recurrence_vs_1f1():
    worst = 0.0
    for nu in (-0.5, 0.5, 1.5, 3.0):
        ys = np.linspace(0.0, 50.0, 11)
        table = specfun.laguerre_table(30, nu, ys)
        for n in range(31):
            for j, y in enumerate(ys):
                ref = specfun.laguerre_via_1f1(n, nu, float(y))
                worst = max(worst, abs(table[n, j] - ref) / max(1.0, abs(ref)))
    return worst, "n<=30, nu in {-0.5,0.5,1.5,3}, y in [0,50]"


def _orthogonality():
    worst = 0.0
    for nu in (0.5, 1.5):
        for n in range(21):
            for m in range(n, 21):
                rule = specfun.gauss_laguerre(n + m + 2, nu)
                t = specfun.laguerre_table(max(n, m), nu, rule.nodes)
                val = float(np.dot(rule.weights, t[n] * t[m]))
                hn = math.exp(specfun.log_gamma_ratio(n + nu + 1, n + 1))
                hm = math.exp(specfun.log_gamma_ratio(m + nu + 1, m + 1))
                ref = hn if n == m else 0.0
                worst = max(worst, abs(val - ref) / math.sqrt(hn * hm))
    return worst, "n,m<=20, relative to the norms"


def _ode_residual():
    y = np.linspace(0.1, 40.0, 41)
    worst = 0.0
    for nu in (-0.5, 0.5, 2.5):
        t = specfun.laguerre_table(20, nu, y)
        for n in range(21):
            res = np.asarray(specfun.verify_laguerre_ode(n, nu, y))
            scale = max(1.0, float(np.max(np.abs(t[n]))) * (n + abs(nu) + 1 + float(y.max())))
            worst = max(worst, float(np.max(np.abs(res))) / scale)
    return worst, "n<=20"


def _derivative_identity():
    worst = 0.0
    y = np.linspace(0.5, 30.0, 30)
    for nu in (-0.5, 0.5, 3.0):
        for n in range(1, 21):
            h = 1e-4 * y
            fd = y * (
                8 * (specfun.laguerre(n, nu, y + h) - specfun.laguerre(n, nu, y - h))
                - (specfun.laguerre(n, nu, y + 2 * h) - specfun.laguerre(n, nu, y - 2 * h))
            ) / (12 * h)
            exact = np.asarray(specfun.laguerre_derivative_action(n, nu, y))
            worst = max(worst, float(np.max(np.abs(fd - exact))) / max(1.0, float(np.max(np.abs(exact)))))
    return worst, "fourth-order central differences, n<=20"


def _gauss_exactness():
    rng = np.random.default_rng(_SEED)
    worst = 0.0
    for order, nu in ((5, 0.0), (10, 0.5), (16, 2.0)):
        rule = specfun.gauss_laguerre(order, nu)
        coef = rng.uniform(-1.0, 1.0, 2 * order)
        moments = np.array([math.exp(math.lgamma(k + nu + 1)) for k in range(2 * order)])
        exact = float(np.dot(coef, moments))
        approx = rule.integrate(lambda y, c=coef: np.polyval(c[::-1], y))
        worst = max(worst, abs(approx - exact) / float(np.dot(np.abs(coef), moments)))
    return worst, "random polynomials of degree 2N-1"


def _mp_forward_vs_hypergeometric():
    worst = 0.0
    for mu in (0.75, 1.25, 2.0):
        for theta in (0.3, 1.0, 2.0):
            for y in (0.4j, -1.3j, 0.7, 0.5 - 0.2j):
                eps = recursion.mp_energy_variable(y, theta)
                seq = recursion.run_three_term(recursion.mp_coeffs(mu, theta), eps, 30).values
                ref = np.array([specfun.meixner_pollaczek(n, mu, y, theta) for n in range(31)])
                worst = max(worst, float(np.max(np.abs(seq - ref) / np.maximum(1.0, np.abs(ref)))))
    return worst, "n<=30"


def suite_specfun():
    s = "specfun"
    return [
        _guard(s, "recurrence_vs_1f1", 1e-10, _recurrence_vs_1f1),
        _guard(s, "orthogonality", 1e-10, _orthogonality),
        _guard(s, "ode_residual", 1e-9, _ode_residual),
        _guard(s, "derivative_identity", 1e-7, _derivative_identity),
        _guard(s, "gauss_exactness", 1e-12, _gauss_exactness),
        _guard(s, "meixner_pollaczek_forward_vs_2f1", 1e-10, _mp_forward_vs_hypergeometric),
    ]


# --- basis -----------------------------------------------------------------


def _orthonormality():
    worst = 0.0
    for ell in (0, 1, 2, 5):
        p = basis.BasisParams(1.3, ell)
        for n in range(21):
            for m in range(21):
                worst = max(worst, abs(basis.overlap(p, n, m) - (n == m)))
    return worst, "n,m<=20, ell in {0,1,2,5}"


def _boundary_slope():
    worst = 0.0
    r = np.array([1e-4, 1e-3])
    for ell in (0, 1, 2, 5):
        p = basis.BasisParams(0.9, ell)
        for n in (0, 3, 10):
            v = np.abs(np.asarray(basis.basis_eval(p, n, r)))
            slope = math.log(v[1] / v[0]) / math.log(r[1] / r[0])
            worst = max(worst, abs(slope - (ell + 1)))
    return worst, "log-slope on [1e-4, 1e-3] minus (ell+1)"


def _lambda_covariance():
    worst = 0.0
    r = np.linspace(0.05, 5.0, 40)
    for ell in (0, 2):
        for lam, lam2 in ((0.8, 1.7), (2.0, 0.6)):
            a = basis.BasisParams(lam, ell)
            b = basis.BasisParams(lam2, ell)
            for n in (0, 4, 15):
                lhs = np.asarray(basis.basis_eval(a, n, r))
                rhs = math.sqrt(lam / lam2) * np.asarray(basis.basis_eval(b, n, r * lam / lam2))
                worst = max(worst, float(np.max(np.abs(lhs - rhs))) / float(np.max(np.abs(lhs))))
    return worst, ""


def suite_basis():
    s = "basis"
    return [
        _guard(s, "orthonormality", 1e-10, _orthonormality),
        _guard(s, "boundary_exponent", 0.01, _boundary_slope),
        _guard(s, "lambda_covariance", 1e-12, _lambda_covariance),
    ]


# --- assembly --------------------------------------------------------------


def _sample_systems(rng):
    e = EFieldSystem(float(rng.uniform(0.6, 1.5)), 1.0, float(rng.uniform(0.0, 2.0)), int(rng.integers(0, 3)))
    ell = int(rng.integers(1, 3))
    b = BFieldSystem(
        float(rng.uniform(0.6, 1.5)), 1.0, float(rng.uniform(0.0, 1.0)), 1.0, ell, int(rng.integers(-ell, ell + 1))
    )
    return e, b


def _closed_vs_quadrature():
    rng = np.random.default_rng(_SEED)
    worst = 0.0
    worst_far = 0.0
    for sys in _sample_systems(rng):
        lam = systems.lambda_star(sys) * float(rng.uniform(0.5, 2.0))
        closed = assembly.hamiltonian_matrix(sys, lam, 21).to_dense()
        quad = assembly.quadrature_matrix(sys, lam, 21)
        worst = max(worst, float(np.max(np.abs(closed - quad) / np.maximum(1.0, np.abs(closed)))))
        far = np.abs(np.subtract.outer(np.arange(21), np.arange(21))) >= 2
        worst_far = max(worst_far, float(np.max(np.abs(quad[far]))))
    return worst, worst_far


def suite_assembly():
    s = "assembly"
    cache = {}

    def both():
        if "v" not in cache:
            cache["v"] = _closed_vs_quadrature()
        return cache["v"]

    def xi_zero():
        worst = 0.0
        for sys in (EFieldSystem(1.0, 1.0, 0.7, 2), BFieldSystem(1.2, 1.0, 0.4, 1.0, 1, -1)):
            lam = systems.lambda_star(sys)
            T = assembly.hamiltonian_matrix(sys, lam, 30)
            if np.any(T.sub):
                return math.inf, "off-diagonal nonzero at lambda*"
            n = np.arange(30)
            ref = lam * lam * (2 * n + sys.nu + 1) - sys.paramagnetic_shift
            worst = max(worst, float(np.max(np.abs(T.diag - ref) / np.abs(ref))))
        return worst, "sub identically zero; diag relative error"

    def bshift():
        worst = 0.0
        for mu in (-2, -1, 1, 2):
            sys = BFieldSystem(1.0, 1.0, 0.35, 1.0, 2, mu)
            lam = 1.3 * systems.lambda_star(sys)
            a = assembly.hamiltonian_matrix(sys, lam, 25)
            b = assembly.hamiltonian_matrix(BFieldSystem(1.0, 1.0, 0.35, 1.0, 2, 0), lam, 25)
            d = a.to_dense() - b.to_dense() + sys.paramagnetic_shift * np.eye(25)
            worst = max(worst, float(np.max(np.abs(d))) / max(1.0, b.norm()))
        return worst, "H(mu) - H(0) + s I"

    def eta_consistency():
        worst = 0.0
        for sys in (EFieldSystem(0.9, 1.0, 1.1, 1), BFieldSystem(1.1, -1.0, 0.6, 2.0, 1, 1)):
            for lam in (0.6, 1.0, 1.9):
                x = systems.xi(sys, lam)
                worst = max(worst, abs(systems.eta(sys, lam) - 2 * lam * lam * (x + 0.25)) / systems.eta(sys, lam))
        return worst, "eta vs 2 lam^2 (xi + 1/4)"

    return [
        _guard(s, "closed_form_vs_quadrature", 1e-9, lambda: (both()[0], "n,m<=20, both systems")),
        _guard(s, "tridiagonality", 1e-9, lambda: (both()[1], "max |H_nm| with |n-m|>=2")),
        _guard(s, "diagonal_at_lambda_star", 1e-14, xi_zero),
        _guard(s, "bfield_identity_shift", 1e-14, bshift),
        _guard(s, "eta_consistency", 1e-14, eta_consistency),
    ]


# --- eigensolve ------------------------------------------------------------


def suite_eigensolve():
    s = "eigensolve"

    def char_roots():
        rng = np.random.default_rng(_SEED)
        worst = 0.0
        for _ in range(60):
            n = int(rng.integers(1, 9))
            T = eigensolve.SymTridiagonal(rng.uniform(-2, 2, n), rng.uniform(-1, 1, n - 1))
            got = eigensolve.eigenvalues(T, n).energies
            worst = max(worst, float(np.max(np.abs(got - oracle.characteristic_roots(T)))))
        return worst, "random tridiagonals, N<=8"

    def interlacing():
        worst = -math.inf
        tol_scale = 0.0
        for sys, f in ((EFieldSystem(1.0, 1.0, 1.5, 0), 0.6), (BFieldSystem(1.0, 1.0, 0.4, 1.0, 1, 1), 1.5)):
            lam = f * systems.lambda_star(sys)
            tab = eigensolve.convergence_study(sys, lam, 5, [10, 20, 40, 80, 160, 320])
            worst = max(worst, float(np.max(np.diff(tab.energies, axis=0))))
            tol_scale = max(tol_scale, assembly.hamiltonian_matrix(sys, lam, 320).norm())
        # rounding allowance folded into the measurement
        return max(0.0, worst - 8 * np.finfo(float).eps * tol_scale), "max E_j(2N) - E_j(N)"

    def scale_independence():
        sys = EFieldSystem(1.0, 1.0, 1.5, 0)
        ls = systems.lambda_star(sys)
        spectra = [
            eigensolve.eigenvalues(assembly.hamiltonian_matrix(sys, f * ls, 400), 5).energies for f in (0.7, 1.0, 1.6)
        ]
        spread = max(float(np.max(np.abs(a - b))) for a in spectra for b in spectra)
        return spread, "lambda in {0.7, 1, 1.6} lambda*, N=400"

    def zeeman():
        worst = 0.0
        for B in (0.1, 0.2, 0.4):
            base = BFieldSystem(1.0, 1.0, B, 1.0, 1, 0)
            lam = systems.lambda_star(base)
            e0 = eigensolve.eigenvalues(assembly.hamiltonian_matrix(base, 1.2 * lam, 120), 4).energies
            for mu in (-1, 1):
                sys = BFieldSystem(1.0, 1.0, B, 1.0, 1, mu)
                e = eigensolve.eigenvalues(assembly.hamiltonian_matrix(sys, 1.2 * lam, 120), 4).energies
                worst = max(worst, float(np.max(np.abs(e - e0 + B * mu / 2))))
                for n in range(4):
                    exact = eigensolve.analytic_spectrum_bfield(sys, n) - eigensolve.analytic_spectrum_bfield(base, n)
                    worst = max(worst, abs(exact + B * mu / 2))
        return worst, "E(B,mu) - E(B,0) + qB mu / 2c"

    return [
        _guard(s, "characteristic_polynomial_oracle", 1e-10, char_roots),
        _guard(s, "interlacing", 0.0, interlacing),
        _guard(s, "basis_scale_independence", 1e-8, scale_independence),
        _guard(s, "zeeman_linearity", 1e-8, zeeman),
    ]


# --- recursion -------------------------------------------------------------


def suite_recursion():
    s = "recursion"

    def residual():
        worst = 0.0
        for sys, f, E in (
            (EFieldSystem(1.0, 1.0, 1.5, 0), 0.7, 2.9),
            (BFieldSystem(1.0, 1.0, 0.4, 1.0, 1, 1), 1.4, 2.3),
        ):
            lam = f * systems.lambda_star(sys)
            seq = recursion.energy_polynomials(sys, lam, E, 40)
            worst = max(worst, seq.max_relative_residual())
        return worst, "N=40"

    def mp_cross():
        worst = 0.0
        for sys in (EFieldSystem(1.0, 1.0, 0.8, 1), BFieldSystem(1.0, 1.0, 0.6, 1.0, 2, -1)):
            lam = 0.8 * systems.lambda_star(sys)
            params = recursion.match_meixner_pollaczek(sys, lam)
            for E in (1.7, 4.2):
                P = recursion.energy_polynomials(sys, lam, E, 30).values
                y = recursion.mp_argument(sys, lam, E, params)
                ref = np.array([specfun.meixner_pollaczek(n, params.mu_mp, y, params.theta) for n in range(31)])
                worst = max(worst, float(np.max(np.abs(P - ref) / np.maximum(1.0, np.abs(ref)))))
        return worst, "n<=30"

    def diagonal_limit():
        sys = EFieldSystem(1.0, 1.0, 0.5, 1)
        ls = systems.lambda_star(sys)
        E0 = eigensolve.analytic_spectrum_efield(sys, 0)
        sizes = []
        for d in (1e-2, 1e-3, 1e-4):
            lam = ls * (1 + d)
            P = recursion.minimal_solution(recursion.energy_coeffs(sys, lam, E0), 0.0, 10).values
            sizes.append(float(np.max(np.abs(P[1:]))) / abs(systems.xi(sys, lam)))
        # |P_n| must shrink in proportion to xi: the ratio stays bounded
        return max(0.0, sizes[-1] / sizes[0] - 1.0), f"max|P_n|/|xi| = {sizes[0]:.3g} .. {sizes[-1]:.3g}"

    def duality():
        worst = 0.0
        for sys, f in ((EFieldSystem(1.0, 1.0, 1.5, 0), 0.75), (BFieldSystem(1.0, 1.0, 0.4, 1.0, 1, 1), 1.4)):
            lam = f * systems.lambda_star(sys)
            for N in (4, 8, 12):
                T = assembly.hamiltonian_matrix(sys, lam, N)
                spec = eigensolve.eigenvalues(T, min(N, 5), vectors=True)
                for k, E in enumerate(spec.energies):
                    P = recursion.energy_polynomials(sys, lam, float(E), N - 1).values
                    u = P / np.linalg.norm(P)
                    v = spec.eigenvectors[:, k]
                    worst = max(worst, float(np.linalg.norm(u - np.sign(u @ v) * v)))
        return worst, "N in {4, 8, 12}"

    return [
        _guard(s, "recursion_residual", 1e-12, residual),
        _guard(s, "meixner_pollaczek_match", 1e-10, mp_cross),
        _guard(s, "diagonal_limit", 0.5, diagonal_limit),
        _guard(s, "eigenvector_duality", 1e-8, duality),
    ]


# --- oracle ----------------------------------------------------------------


def _oracle_systems():
    return [
        EFieldSystem(1.0, 1.0, 1.5, 0),
        EFieldSystem(0.8, 1.0, 0.3, 1),
        EFieldSystem(1.2, -1.0, 0.2, 2),
        BFieldSystem(1.0, 1.0, 0.4, 1.0, 1, 1),
        BFieldSystem(0.9, 1.0, 1.0, 1.0, 2, -2),
        BFieldSystem(1.1, -1.0, 0.6, 2.0, 1, 0),
    ]


def suite_oracle():
    s = "oracle"

    def richardson_order():
        res = oracle.richardson(lambda r: 0.5 * r * r, 0, oracle.RadialGrid(10.0, 400), 3)
        return float(np.max(np.abs(res.order - 2.0))), f"orders {np.round(res.order, 4).tolist()}"

    def fd_vs_tra():
        worst = 0.0
        for sys in _oracle_systems():
            fd = oracle.fd_system_spectrum(sys, 3, M=4000)
            if fd.boundary_warning:
                return math.inf, f"r_max too small for {sys.describe()}"
            T = assembly.hamiltonian_matrix(sys, systems.lambda_star(sys), 400)
            tra = eigensolve.eigenvalues(T, 3).energies
            worst = max(worst, float(np.max(np.abs(tra - fd.energies))))
        return worst, "6 parameter sets, M=4000"

    def ell_monotone():
        sys_of = lambda ell: EFieldSystem(1.0, 1.0, 0.4, ell)  # noqa: E731
        e = []
        for ell in range(6):
            sys = sys_of(ell)
            T = assembly.hamiltonian_matrix(sys, 0.8 * systems.lambda_star(sys), 120)
            e.append(float(eigensolve.eigenvalues(T, 1).energies[0]))
        return max(0.0, -float(np.min(np.diff(e)))), "ground state vs ell = 0..5"

    def efield_erratum():
        sys = EFieldSystem(1.0, 1.0, 1.5, 0)
        fd = oracle.fd_system_spectrum(sys, 3, M=4000).energies
        expected = np.array([oracle.quadratic_spectrum(sys.omega_sq_total, 0, n) for n in range(3)])
        field_free = np.array([eigensolve.field_free_spectrum(sys, n) for n in range(3)])
        gap = float(np.min(np.abs(fd - field_free)))
        note = (
            f"levels follow sqrt(omega^4 + 2 q zeta)(2n+nu+1); field-independent formula "
            f"is off by >= {gap:.3g}: flagged erratum"
        )
        err = float(np.max(np.abs(fd - expected)))
        return (err if gap > 1e-2 else math.inf), note

    return [
        _guard(s, "fd_richardson_order", 0.1, richardson_order),
        _guard(s, "fd_vs_tra", 1e-3, fd_vs_tra),
        _guard(s, "ell_monotonicity", 0.0, ell_monotone),
        _guard(s, "efield_shifts_spectrum", 1e-3, efield_erratum),
    ]


SUITES: dict[str, Callable[[], list[CheckResult]]] = {
    "specfun": suite_specfun,
    "basis": suite_basis,
    "assembly": suite_assembly,
    "eigensolve": suite_eigensolve,
    "recursion": suite_recursion,
    "oracle": suite_oracle,
}


def run(suite: str = "all") -> list[CheckResult]:
    if suite == "all":
        return [c for fn in SUITES.values() for c in fn()]
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}; choose all or one of {', '.join(SUITES)}")
    return SUITES[suite]()

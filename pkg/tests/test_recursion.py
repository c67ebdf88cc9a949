import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from traspec import assembly, basis, eigensolve, recursion, specfun
from traspec.assembly import BFieldSystem, EFieldSystem
from traspec.errors import DegenerateRecursionError, DomainError
from traspec.recursion import RecursionCoeffs

SQRT2 = math.sqrt(2.0)
E0 = EFieldSystem(1.0, 1.0, 0.0, 0)


def test_run_three_term_trivial():
    seq = recursion.run_three_term(RecursionCoeffs(lambda n: 0.0, lambda n: 0.5), 0.3, 0)
    np.testing.assert_array_equal(seq.values, [1.0])


def test_chebyshev_like_first_step():
    seq = recursion.run_three_term(RecursionCoeffs(lambda n: 0.0, lambda n: 0.5), 0.3, 4)
    assert seq.values[1] == pytest.approx(0.6, rel=1e-15)
    # a_n = 0, b_n = 1/2 gives Chebyshev polynomials of the second kind U_n(x)
    x = 0.3
    U = [1, 2 * x, 4 * x * x - 1, 8 * x**3 - 4 * x, 16 * x**4 - 12 * x * x + 1]
    np.testing.assert_allclose(seq.values, U, rtol=1e-14)


def test_zero_coupling_raises():
    with pytest.raises(DegenerateRecursionError):
        recursion.run_three_term(RecursionCoeffs(lambda n: 1.0, lambda n: 0.0 if n == 2 else 1.0), 0.0, 5)


def test_efield_coefficients_example():
    c = recursion.efield_coeffs(E0, SQRT2, 1.5)
    assert c.a(0) == pytest.approx(0.5, rel=1e-14)  # -(1/xi)[...] with the bracket over xi equal to -0.5
    assert c.b(0) == pytest.approx(math.sqrt(1.5), rel=1e-15)
    P = recursion.energy_polynomials(E0, SQRT2, 1.5, 3).values
    assert P[1] == pytest.approx(-0.408248290463863, rel=1e-12)


def test_degenerate_scale_raises():
    with pytest.raises(DegenerateRecursionError, match="spectrum is exactly diagonal"):
        recursion.efield_coeffs(E0, 1.0, 1.5)
    sys = BFieldSystem(1.0, 1.0, 0.4, 1.0, 1, 1)
    with pytest.raises(DegenerateRecursionError):
        recursion.bfield_coeffs(sys, assembly.lambda_star(sys), 2.0)


def test_b_zero_coefficients_match_e_case():
    b = recursion.bfield_coeffs(BFieldSystem(1.0, 1.0, 0.0, 1.0, 2, 1), 1.3, 4.0)
    e = recursion.efield_coeffs(EFieldSystem(1.0, 1.0, 0.0, 2), 1.3, 4.0)
    for n in range(10):
        assert b.a(n) == e.a(n) and b.b(n) == e.b(n)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 0.9) | st.floats(1.1, 2.0), st.floats(0.5, 12.0), st.integers(0, 3), st.booleans())
def test_recursion_residual(f, E, ell, magnetic):
    sys = BFieldSystem(1.0, 1.0, 0.5, 1.0, ell, -ell) if magnetic else EFieldSystem(1.0, 1.0, 0.8, ell)
    lam = f * assembly.lambda_star(sys)
    for method in (recursion.run_three_term, recursion.minimal_solution):
        seq = method(recursion.energy_coeffs(sys, lam, E), 0.0, 30)
        assert seq.max_relative_residual() < 1e-12


def test_eigenvector_duality():
    for sys, f in ((EFieldSystem(1.0, 1.0, 1.5, 0), 0.7), (BFieldSystem(1.0, 1.0, 0.4, 1.0, 1, 1), 1.5), (E0, SQRT2)):
        lam = f * assembly.lambda_star(sys)
        for N in range(2, 13):
            T = assembly.hamiltonian_matrix(sys, lam, N)
            spec = eigensolve.eigenvalues(T, N, vectors=True)
            for k, E in enumerate(spec.energies):
                P = recursion.energy_polynomials(sys, lam, float(E), N - 1).values
                u = P / np.linalg.norm(P)
                v = spec.eigenvectors[:, k]
                assert np.linalg.norm(u - np.sign(u @ v) * v) < 1e-8, (N, k)


def test_diagonal_limit():
    sys = EFieldSystem(1.0, 1.0, 0.5, 1)
    ls = assembly.lambda_star(sys)
    E = eigensolve.analytic_spectrum(sys, 0)
    sizes = []
    for d in (1e-2, 1e-3, 1e-4, 1e-5):
        lam = ls * (1 + d)
        P = recursion.minimal_solution(recursion.energy_coeffs(sys, lam, E), 0.0, 10).values
        sizes.append(np.max(np.abs(P[1:])) / abs(assembly.xi(sys, lam)))
    # |P_n| for n >= 1 vanishes in proportion to xi
    assert max(sizes) / min(sizes) < 1.1


def test_mp_params_examples():
    p = recursion.match_meixner_pollaczek(E0, 0.8)
    assert p.mu_mp == 0.75
    lam = 3.0 ** -0.25  # xi = 1/2
    p = recursion.match_meixner_pollaczek(E0, lam)
    assert p.cosh_theta == pytest.approx(2.0, rel=1e-14)
    assert p.theta == pytest.approx(math.log(2 + math.sqrt(3)), rel=1e-13)
    assert p.theta == pytest.approx(1.316958, abs=1e-6)


def test_mp_theta_to_zero_for_large_xi():
    thetas = [recursion.match_meixner_pollaczek(E0, lam).theta for lam in (0.5, 0.2, 0.05)]
    assert thetas[0] > thetas[1] > thetas[2] > 0
    assert thetas[2] < 1e-2


def test_mp_no_real_angle():
    with pytest.raises(DomainError, match="no real hyperbolic angle"):
        recursion.match_meixner_pollaczek(E0, 1.5)


def test_mp_closed_form_cosh():
    # omega^4 / (2 q zeta) = 2 at zeta = 0.25; equals the lam-explicit value only at one scale
    sys = EFieldSystem(1.0, 1.0, 0.25, 0)
    p = recursion.match_meixner_pollaczek(sys, 0.8)
    assert p.closed_form_cosh == 2.0
    b = recursion.match_meixner_pollaczek(BFieldSystem(1.0, 1.0, 1.0, 1.0, 0, 0), 0.8)
    assert b.closed_form_cosh == 4.0


def test_physical_polynomials_are_meixner_pollaczek():
    for sys in (EFieldSystem(1.0, 1.0, 0.8, 1), BFieldSystem(1.2, -1.0, 0.6, 1.0, 2, 2), E0):
        lam = 0.7 * assembly.lambda_star(sys)
        params = recursion.match_meixner_pollaczek(sys, lam)
        for E in (0.9, 3.3, 8.0):
            P = recursion.energy_polynomials(sys, lam, E, 30).values
            y = recursion.mp_argument(sys, lam, E, params)
            ref = np.array([specfun.meixner_pollaczek(n, params.mu_mp, y, params.theta) for n in range(31)])
            assert np.max(np.abs(P - ref) / np.maximum(1.0, np.abs(ref))) < 1e-10


def test_mp_recurrence_forms():
    mu, theta, y = 0.75, 1.1, 0.6j
    vals = [specfun.meixner_pollaczek(n, mu, y, theta) for n in range(25)]
    res = recursion.mp_recurrence_residuals(vals, mu, y, theta, nu=2 * mu - 1)
    assert res["standard"] < 1e-12 and res["variant"] < 1e-12
    # away from 2 mu = nu + 1 only the standard coupling holds
    res = recursion.mp_recurrence_residuals(vals, mu, y, theta, nu=2.5)
    assert res["standard"] < 1e-12 and res["variant"] > 1e-3


def test_wavefunction_single_term_is_ground_function():
    r = np.linspace(0.1, 4, 30)
    psi = recursion.wavefunction_eval(E0, 1.0, 1.5, r, 1)
    np.testing.assert_array_equal(psi, basis.basis_eval(basis.BasisParams(1.0, 0), 0, r))


def test_wavefunction_degenerate_with_many_terms():
    with pytest.raises(DegenerateRecursionError):
        recursion.wavefunction_eval(E0, 1.0, 1.5, np.array([1.0]), 5)


def test_detuned_wavefunction_reproduces_ground_state():
    r = np.linspace(0.1, 4, 80)
    psi = recursion.wavefunction_eval(E0, SQRT2, 1.5, r, 40)
    exact = basis.basis_eval(basis.BasisParams(1.0, 0), 0, r)
    scale = np.dot(psi, exact) / np.dot(exact, exact)
    assert np.max(np.abs(psi / scale - exact) / np.abs(exact)) < 1e-6


def test_forward_method_loses_accuracy_when_detuned():
    r = np.linspace(0.1, 4, 40)
    exact = basis.basis_eval(basis.BasisParams(1.0, 0), 0, r)
    fwd = recursion.wavefunction_eval(E0, SQRT2, 1.5, r, 40, method="forward")
    mini = recursion.wavefunction_eval(E0, SQRT2, 1.5, r, 40, method="minimal")
    def err(psi):
        s = np.dot(psi, exact) / np.dot(exact, exact)
        return np.max(np.abs(psi / s - exact) / np.abs(exact))
    assert err(mini) < 1e-6 < err(fwd)


def test_partial_sums_and_weight():
    sys = EFieldSystem(1.0, 1.0, 0.4, 1)
    lam = 0.8 * assembly.lambda_star(sys)
    E = eigensolve.analytic_spectrum(sys, 0)
    r = np.linspace(0.2, 3, 7)
    sums = recursion.wavefunction_partial_sums(sys, lam, E, r, [1, 5, 30], weight=2.0)
    assert sums.shape == (3, 7)
    np.testing.assert_allclose(sums[0], 2.0 * basis.basis_eval(basis.BasisParams(lam, 1), 0, r))
    np.testing.assert_allclose(sums[2], 2.0 * recursion.wavefunction_eval(sys, lam, E, r, 30), rtol=1e-14)


def test_unknown_method():
    with pytest.raises(DomainError):
        recursion.wavefunction_eval(E0, SQRT2, 1.5, np.array([1.0]), 4, method="sideways")


def test_minimal_solution_meets_first_row_only_at_eigenvalues():
    lam = 0.8
    exact = recursion.minimal_solution(recursion.energy_coeffs(E0, lam, 3.5), 0.0, 20)
    other = recursion.minimal_solution(recursion.energy_coeffs(E0, lam, 2.7), 0.0, 20)
    assert exact.first_row == 1 and exact.max_relative_residual() < 1e-12
    assert exact.boundary_residual() < 1e-12
    assert other.max_relative_residual() < 1e-12
    assert other.boundary_residual() > 1e-3

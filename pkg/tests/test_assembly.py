import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from traspec import assembly
from traspec.assembly import BFieldSystem, EFieldSystem
from traspec.errors import DomainError, NonConfiningError, QuadratureOrderError

SQRT2 = math.sqrt(2.0)


@pytest.mark.parametrize(
    "sys, lam, expected",
    [
        (EFieldSystem(1.0, 1.0, 0.0, 0), 1.0, 0.0),
        (EFieldSystem(1.0, 1.0, 0.0, 0), SQRT2, -0.1875),
        (EFieldSystem(1.0, 1.0, 1.5, 0), SQRT2, 0.0),
    ],
)
def test_xi_efield(sys, lam, expected):
    assert assembly.xi_efield(sys, lam) == pytest.approx(expected, abs=1e-15)


def test_xi_bfield():
    assert assembly.xi_bfield(BFieldSystem(1.0, 1.0, 0.0, 1.0, 0, 0), 1.0) == 0.0
    sys = BFieldSystem(1.0, 1.0, SQRT2, 1.0, 0, 0)
    assert assembly.xi_bfield(sys, 1.0) == pytest.approx(0.25, abs=1e-15)
    assert abs(assembly.xi_bfield(sys, 2.0**0.25)) < 1e-15


def test_lambda_star_values():
    assert assembly.lambda_star(EFieldSystem(1.0, 1.0, 0.0, 0)) == 1.0
    assert assembly.lambda_star(EFieldSystem(1.0, 1.0, 1.5, 0)) == pytest.approx(SQRT2, rel=1e-15)
    assert assembly.lambda_star(BFieldSystem(1.0, 1.0, SQRT2, 1.0, 0, 0)) == pytest.approx(1.189207115002721, rel=1e-14)


def test_non_confining_rejected():
    with pytest.raises(NonConfiningError):
        EFieldSystem(1.0, -1.0, 0.6, 0)


@pytest.mark.parametrize("mu, expected", [(1, 1.0), (-1, -1.0)])
def test_paramagnetic_shift(mu, expected):
    assert assembly.paramagnetic_shift(BFieldSystem(1.0, 1.0, 2.0, 1.0, 1, mu)) == expected
    assert assembly.paramagnetic_shift(BFieldSystem(1.0, 1.0, 0.0, 1.0, 1, mu)) == 0.0


def test_mu_az_bound():
    with pytest.raises(DomainError):
        BFieldSystem(1.0, 1.0, 0.2, 1.0, 1, 2)


def test_matrix_diagonal_example():
    T = assembly.hamiltonian_matrix(EFieldSystem(1.0, 1.0, 0.0, 0), 1.0, 3)
    np.testing.assert_array_equal(T.diag, [1.5, 3.5, 5.5])
    np.testing.assert_array_equal(T.sub, [0.0, 0.0])


def test_matrix_detuned_example():
    T = assembly.hamiltonian_matrix(EFieldSystem(1.0, 1.0, 0.0, 0), SQRT2, 2)
    np.testing.assert_allclose(T.diag, [1.875, 4.375], rtol=1e-15)
    # 4 * (3/16) * sqrt(3/2), up to the sign convention of the coupling
    assert abs(T.sub[0]) == pytest.approx(0.75 * math.sqrt(1.5), rel=1e-15)


def test_b_zero_reduces_to_e_case():
    for lam in (0.7, 1.0, 1.9):
        a = assembly.hamiltonian_matrix(BFieldSystem(1.0, 1.0, 0.0, 1.0, 2, 1), lam, 10)
        b = assembly.hamiltonian_matrix(EFieldSystem(1.0, 1.0, 0.0, 2), lam, 10)
        np.testing.assert_array_equal(a.diag, b.diag)
        np.testing.assert_array_equal(a.sub, b.sub)


def test_zero_size_rejected():
    with pytest.raises(DomainError):
        assembly.hamiltonian_matrix(EFieldSystem(1.0, 1.0, 0.0, 0), 1.0, 0)


def test_quadrature_examples():
    e0 = EFieldSystem(1.0, 1.0, 0.0, 0)
    assert assembly.matrix_element_quadrature(e0, 1.0, 0, 0) == pytest.approx(1.5, abs=1e-13)
    assert abs(assembly.matrix_element_quadrature(e0, SQRT2, 0, 2)) < 1e-10
    T = assembly.hamiltonian_matrix(e0, SQRT2, 2)
    assert assembly.matrix_element_quadrature(e0, SQRT2, 0, 1) == pytest.approx(T.sub[0], abs=1e-9)


def test_quadrature_order_guard():
    e0 = EFieldSystem(1.0, 1.0, 0.0, 0)
    with pytest.raises(QuadratureOrderError):
        assembly.matrix_element_quadrature(e0, 1.0, 3, 4, order=10)
    assembly.matrix_element_quadrature(e0, 1.0, 3, 4, order=11)


def _random_system(data):
    if data.draw(st.booleans()):
        return EFieldSystem(data.draw(st.floats(0.5, 1.5)), data.draw(st.floats(0.0, 1.0)), data.draw(st.floats(0, 2.0)), data.draw(st.integers(0, 3)))
    ell = data.draw(st.integers(0, 3))
    return BFieldSystem(
        data.draw(st.floats(0.5, 1.5)),
        data.draw(st.floats(-2, 2)),
        data.draw(st.floats(0, 1.5)),
        data.draw(st.floats(0.5, 2)),
        ell,
        data.draw(st.integers(-ell, ell)),
    )


@settings(max_examples=12, deadline=None)
@given(st.data())
def test_closed_form_matches_quadrature(data):
    sys = _random_system(data)
    lam = assembly.lambda_star(sys) * data.draw(st.floats(0.5, 2.0))
    closed = assembly.hamiltonian_matrix(sys, lam, 21).to_dense()
    quad = assembly.quadrature_matrix(sys, lam, 21)
    assert np.max(np.abs(closed - quad) / np.maximum(1.0, np.abs(closed))) < 1e-9
    far = np.abs(np.subtract.outer(np.arange(21), np.arange(21))) >= 2
    assert np.max(np.abs(quad[far])) < 1e-9


def test_diagonal_at_lambda_star():
    for sys in (EFieldSystem(1.3, 1.0, 0.4, 1), BFieldSystem(0.9, -1.0, 0.7, 1.5, 2, 2), EFieldSystem(1.0, 1.0, 1.5, 0)):
        lam = assembly.lambda_star(sys)
        T = assembly.hamiltonian_matrix(sys, lam, 40)
        assert T.is_diagonal()
        n = np.arange(40)
        np.testing.assert_allclose(T.diag, lam * lam * (2 * n + sys.nu + 1) - sys.paramagnetic_shift, rtol=4e-16)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.0, 2.0), st.integers(-3, 3), st.floats(0.4, 2.5))
def test_bfield_shift_is_identity_multiple(B, mu, lam):
    sys = BFieldSystem(1.0, 1.0, B, 1.0, 3, mu)
    a = assembly.hamiltonian_matrix(sys, lam, 15)
    b = assembly.hamiltonian_matrix(BFieldSystem(1.0, 1.0, B, 1.0, 3, 0), lam, 15)
    np.testing.assert_array_equal(a.sub, b.sub)
    np.testing.assert_allclose(a.diag, b.diag - sys.paramagnetic_shift, rtol=0, atol=4e-16 * (1 + b.norm()))


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_eta_consistency(data):
    sys = _random_system(data)
    lam = data.draw(st.floats(0.3, 3.0))
    c = assembly.coupling(sys, lam)
    assert c.eta == pytest.approx(2 * lam * lam * (c.xi + 0.25), rel=1e-13, abs=1e-15)

import math

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from hilbert_spectra.errors import DomainError, ExistenceError, TailError
from hilbert_spectra.hilbert_core import eigenfunction_eval
from hilbert_spectra.mehler_fock import (
    PhiZ,
    RealLineFunction,
    eigenfunction_via_transform,
    general_mu_residual,
    general_mu_transform_eval,
    kernel_identity_residual,
    mf_forward,
    mf_inverse,
    mf_round_trip,
    phi_transform_closed_form,
    transform_representation_residual,
)

mpmath.mp.dps = 20


def mp_forward(f, t):
    """Reference transform in the variable u with x = cosh u."""
    nu = mpmath.mpc(-0.5, t)
    g = lambda u: f(mpmath.cosh(u)) * mpmath.legenp(nu, 0, mpmath.cosh(u), type=3) * mpmath.sinh(u)
    return complex(mpmath.quad(g, [0, 1, 4, 12, mpmath.inf]))


class TestForward:
    def test_zero(self):
        assert mf_forward(RealLineFunction(lambda x: 0.0, 2.0), 0.7) == 0

    def test_phi0_at_zero(self):
        assert mf_forward(PhiZ(0), 0.0) == pytest.approx(math.pi, abs=1e-10)

    def test_phi0_at_one(self):
        assert mf_forward(PhiZ(0), 1.0) == pytest.approx(math.pi / math.cosh(math.pi), abs=1e-10)

    def test_against_reference_quadrature(self):
        f = lambda x: x ** -2
        ref = mp_forward(f, 0.8)
        assert abs(mf_forward(RealLineFunction(f, 2.0), 0.8) - ref) <= 1e-10

    @pytest.mark.parametrize("p", [0.5, 0.3])
    def test_existence(self, p):
        with pytest.raises(ExistenceError):
            RealLineFunction(lambda x: x ** -p, p)

    def test_negative_t(self):
        with pytest.raises(DomainError):
            mf_forward(PhiZ(0), -1.0)

    @settings(max_examples=10)
    @given(st.floats(0, 0.9), st.floats(0, 3))
    def test_closed_form(self, z, t):
        got = mf_forward(PhiZ(z), t)
        assert abs(got - phi_transform_closed_form(z, t)) <= 1e-9
        assert abs(got.imag) <= 1e-10

    @pytest.mark.parametrize("z", [-0.5, 0.3, 0.8])
    @pytest.mark.parametrize("t", [0.0, 0.7, 2.0])
    def test_real_for_real_z(self, z, t):
        assert abs(mf_forward(PhiZ(z), t).imag) <= 1e-10


class TestPhiZ:
    def test_formula(self):
        phi = PhiZ(0.25 + 0.5j)
        x = 3.0
        assert phi(x) == 1 / (x * (0.75 - 0.5j) + 1.25 + 0.5j)

    @pytest.mark.parametrize("z", [1.0, -1.0, 0.8 + 0.8j])
    def test_unit_disk_only(self, z):
        with pytest.raises(DomainError):
            PhiZ(z)


class TestInverse:
    def test_zero(self):
        assert mf_inverse(lambda t: 0.0, 2.0, t_max=5.0) == 0

    def test_tail_check(self):
        with pytest.raises(TailError):
            mf_inverse(lambda t: 1.0 / (1.0 + t), 2.0, t_max=5.0)

    def test_no_decay(self):
        with pytest.raises(TailError):
            mf_inverse(lambda t: 1.0, 2.0)

    def test_x_below_one(self):
        with pytest.raises(DomainError):
            mf_inverse(lambda t: 0.0, 0.5, t_max=1.0)

    def test_closed_form_round_trip(self):
        fhat = lambda t: phi_transform_closed_form(0.0, t)
        assert abs(mf_inverse(fhat, 2.0) - 1 / 3) <= 1e-7

    @pytest.mark.parametrize("z,x", [(0.0, 2.0), (0.3, 1.5)])
    def test_round_trip_examples(self, z, x):
        phi = PhiZ(z)
        got = mf_round_trip(phi, [x], tol=1e-6)[x]
        assert abs(got - phi(x)) <= 1e-4


class TestKernelIdentity:
    @pytest.mark.parametrize("t,y", [(0.0, 1.0), (0.0, 5.0)])
    def test_small_t(self, t, y):
        assert kernel_identity_residual(t, y) <= 1e-7

    def test_amplified(self):
        assert kernel_identity_residual(1.0, 2.0) <= 1e-6

    def test_cap(self):
        with pytest.raises(DomainError):
            kernel_identity_residual(4.0, 2.0)

    def test_y_range(self):
        with pytest.raises(DomainError):
            kernel_identity_residual(0.5, 0.5)

    @settings(max_examples=10)
    @given(st.floats(0, 3), st.floats(1, 50))
    def test_random(self, t, y):
        assert kernel_identity_residual(t, y) <= 1e-9 * math.cosh(math.pi * t)


class TestRepresentation:
    def test_origin(self):
        assert eigenfunction_via_transform(0.0, 0.0) == pytest.approx(1.0, abs=1e-12)

    def test_real_point(self):
        assert abs(eigenfunction_via_transform(0.0, 0.4) - eigenfunction_eval(0.5, 0.4)) <= 1e-10

    def test_complex_point(self):
        z = complex(0.2, 0.3)
        got = eigenfunction_via_transform(1.0, z)
        assert abs(got - eigenfunction_eval(complex(0.5, 1.0), z)) <= 1e-10

    @pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 2.0])
    @pytest.mark.parametrize("z", [0.0, 0.4, -0.4, 0.5j, complex(0.3, 0.3)])
    def test_grid(self, t, z):
        assert transform_representation_residual(t, z) <= 1e-6

    @pytest.mark.parametrize("mu,z,expected", [
        (0.5, 0.0, 1.0),
        (complex(0.5, 1.0), 0.0, 1.0),
        (0.3, 0.5, None),
    ])
    def test_general_mu_examples(self, mu, z, expected):
        expected = eigenfunction_eval(mu, z) if expected is None else expected
        assert abs(general_mu_transform_eval(mu, z) - expected) <= 1e-10

    @pytest.mark.parametrize("mu", [0.1, 0.3, 0.5])
    @pytest.mark.parametrize("z", [0.0, 0.4, -0.4, 0.5j, complex(0.3, 0.3)])
    def test_general_mu_grid(self, mu, z):
        assert general_mu_residual(mu, z) <= 1e-6

import math

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma as gamma_fn

from symcone import conefunc as C
from symcone import jordan as J
from symcone.quad import QuadratureSpec

H = J.halfline()
L = J.lorentz(3)
E = J.identity(L)


class TestClosedForms:
    def test_gamma_halfline_is_euler_gamma(self):
        for s in (0.5, 1.0, 2.5, 7.0):
            npt.assert_allclose(C.gamma_closed(H, s), math.gamma(s), rtol=1e-14)

    def test_gamma_lorentz_product(self):
        # (2 pi)^((n - r)/2) Gamma(s1) Gamma(s2 - 1/2)
        npt.assert_allclose(C.gamma_closed(L, (2, 1.5)), math.sqrt(2 * math.pi), rtol=1e-14)
        npt.assert_allclose(C.gamma_closed(L, (3, 2)), math.sqrt(2 * math.pi) * 2 * math.gamma(1.5), rtol=1e-14)

    def test_beta_halfline(self):
        npt.assert_allclose(C.beta_closed(H, 2, 3), 1 / 12, rtol=1e-14)

    def test_laplace_halfline(self):
        npt.assert_allclose(C.laplace_closed(H, 1, [2.0]), 0.5)

    def test_domain_violation_names_the_condition(self):
        with pytest.raises(J.ConeDomainError, match="convergence violation"):
            C.gamma_closed(L, (1, 0.4))
        with pytest.raises(J.ConeDomainError):
            C.gamma_integral(H, 0.0)

    def test_convergence_domain(self):
        dom = C.convergence_domain(L)
        assert dom.contains([1, 0.6]) and not dom.contains([1, 0.5])


class TestIntegrals:
    def test_gamma_integral_halfline(self):
        for s in (1.5, 2.0, 3.0):
            est = C.gamma_integral(H, s)
            npt.assert_allclose(est.value, gamma_fn(s), rtol=1e-10)

    def test_gamma_integral_lorentz(self):
        est = C.gamma_integral(L, (2, 1.5))
        npt.assert_allclose(est.value, C.gamma_closed(L, (2, 1.5)), rtol=1e-3)

    def test_beta_integral_halfline(self):
        npt.assert_allclose(C.beta_integral(H, 2, 3, QuadratureSpec(nodes=97)).value, 1 / 12, rtol=1e-9)

    def test_laplace_lorentz_scales_with_inverse(self):
        s = (2, 1.5)
        y = np.array([2.0, 1.0, 0.0])
        est = C.laplace_power(L, s, y, QuadratureSpec(nodes=49))
        expect = C.gamma_closed(L, s) * float(J.power_function(L, s, J.inverse(L, y)))
        npt.assert_allclose(est.value, expect, rtol=1e-3)

    def test_rotated_beta_at_e(self):
        p, q = np.array([2.0, 1.0]), np.array([1.0, 3.0])
        est = C.rotated_beta_integral(L, p, q, E, QuadratureSpec(nodes=49))
        npt.assert_allclose(est.value, C.beta_closed(L, p[::-1], q[::-1]), rtol=1e-3)


class TestProperties:
    @settings(max_examples=60)
    @given(st.floats(0.6, 8), st.floats(0.6, 8))
    def test_gamma_recursion_lorentz(self, s1, s2):
        # Gamma_Omega(s + 1) = Gamma_Omega(s) prod_j (s_j - (j - 1) d / 2)
        s = np.array([s1, s2])
        lhs = C.gamma_closed(L, s + 1)
        rhs = C.gamma_closed(L, s) * (s1 - 0.0) * (s2 - 0.5)
        npt.assert_allclose(lhs, rhs, rtol=1e-10)

    @settings(max_examples=60)
    @given(st.floats(0.6, 6), st.floats(0.6, 6), st.floats(0.6, 6), st.floats(0.6, 6))
    def test_beta_symmetry(self, a, b, c, d):
        p, q = (a, b), (c, d)
        npt.assert_allclose(C.beta_closed(L, p, q), C.beta_closed(L, q, p), rtol=1e-12)

    @settings(max_examples=40)
    @given(st.floats(0.6, 5), st.floats(0.6, 5), st.floats(0.2, 5))
    def test_laplace_closed_homogeneity(self, s1, s2, t):
        s = (s1, s2)
        y = np.array([2.0, 1.0, 0.0])
        npt.assert_allclose(C.laplace_closed(L, s, t * y), t ** -(s1 + s2) * C.laplace_closed(L, s, y), rtol=1e-10)

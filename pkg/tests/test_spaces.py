import math

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symcone import jordan as J
from symcone import spaces as S
from symcone.quad import QuadratureSpec

H = J.halfline()
L = J.lorentz(3)
E = J.identity(L)


class TestComplexPowers:
    def test_principal_branch(self):
        npt.assert_allclose(S.complex_power(H, np.array([1j]) / 1j, -2.0), 1.0)
        # ((z + i)/i)^(-1) at z = 1 is i/(1 + i)
        npt.assert_allclose(S.complex_power(H, np.array([1 + 1j]) / 1j, -1.0), 1j / (1 + 1j), rtol=1e-14)

    def test_real_cone_agrees_with_power_function(self):
        y = np.array([2.0, 1.0, 0.5])
        npt.assert_allclose(S.complex_power(L, y.astype(complex), [1.3, -0.4]), J.power_function(L, [1.3, -0.4], y), rtol=1e-13)

    def test_bergman_kernel_on_diagonal(self):
        # B_nu(iy, iy) = Delta^(-(nu + n/r))(2y)
        y = np.array([2.0, 0.5, 0.0])
        npt.assert_allclose(S.bergman_kernel(L, 2.0, 1j * y, 1j * y).real, J.determinant(L, 2 * y) ** -3.5, rtol=1e-13)

    @settings(max_examples=40)
    @given(st.floats(-3, 3), st.floats(0.1, 3), st.floats(-3, 3), st.floats(0.1, 3), st.floats(0.1, 4))
    def test_kernel_hermitian(self, x1, y1, x2, y2, nu):
        z, w = np.array([x1 + 1j * y1]), np.array([x2 + 1j * y2])
        npt.assert_allclose(S.bergman_kernel(H, nu, z, w), np.conj(S.bergman_kernel(H, nu, w, z)), rtol=1e-12)


class TestNorms:
    def test_halfline_kernel_norm(self):
        # ((z + i)/i)^-2 in A^2_1: int_0^inf int |x + i(y + 1)|^-4 dx y dy = pi/4
        F = S.KernelFunction(H, [1j], 2.0)
        npt.assert_allclose(S.mixed_norm(F, 2, 2, 1).value ** 2, math.pi / 4, rtol=1e-12)
        npt.assert_allclose(S.kernel_mixed_norm(F, 2, 2, 1).value ** 2, math.pi / 4, rtol=1e-12)

    def test_closed_norm_matches_nested_mixed_exponents(self):
        F = S.KernelFunction(H, [0.3 + 4j], 5.0, 2.0)
        npt.assert_allclose(S.kernel_mixed_norm(F, 2, 3, 7.0).value, S.mixed_norm(F, 2, 3, 7.0).value, rtol=1e-8)

    def test_lorentz_nested_norm_is_close_to_closed_form(self):
        F = S.KernelFunction(L, 1j * E, 3.0)
        spec = QuadratureSpec(nodes=9)
        nested = S.mixed_norm(F, 2, 2, 3.5, spec, spec).value
        npt.assert_allclose(nested, S.kernel_mixed_norm(F, 2, 2, 3.5).value, rtol=0.06)

    def test_kernel_outside_space_is_not_finite(self):
        # slices converge (2 mu > 1) but the cone integral of y^(1 - 2 mu) y^(nu - 1) does not
        assert not S.kernel_mixed_norm(S.KernelFunction(H, [1j], 0.6), 2, 2, 1.0).finite
        # slices diverge
        assert not S.kernel_mixed_norm(S.KernelFunction(H, [1j], 0.4), 2, 2, 1.0).finite

    def test_hardy_norms(self):
        # ||((z + i)/i)^-1||_{H^2}^2 = pi; with s = 1 the Hardy-type norm is the A^2_1 norm
        npt.assert_allclose(S.hardy_mu_norm(S.KernelFunction(H, [1j], 1.0), 2, 0).value ** 2, math.pi, rtol=1e-7)
        npt.assert_allclose(S.hardy_mu_norm(S.KernelFunction(H, [1j], 2.0), 2, 1).value ** 2, math.pi / 4, rtol=1e-7)

    def test_norm_result_validation(self):
        with pytest.raises(ValueError):
            S.NormResult(-1.0)

    def test_dilation_scaling_of_closed_norm(self):
        F = S.KernelFunction(H, [1j], 2.0)
        a = S.kernel_mixed_norm(F, 2, 2, 1).value
        b = S.kernel_mixed_norm(F.dilated(2.0), 2, 2, 1).value
        # with the measure Delta^(nu - n/r) dy the norm scales as t^(nu/q + n/(rp)); nu = 1, p = q = 2
        npt.assert_allclose(b / a, 2.0, rtol=1e-12)


class TestLemmas:
    def test_J_alpha_halfline(self):
        npt.assert_allclose(S.J_alpha(H, 2, [1.0]).value, math.pi, rtol=1e-8)
        npt.assert_allclose(S.J_alpha(H, 2, [2.0]).value, math.pi / 2, rtol=1e-8)
        npt.assert_allclose(S.J_alpha_constant(H, 2.0), math.pi, rtol=1e-14)

    def test_J_alpha_lorentz_constant(self):
        y = np.array([2.0, 1.0, 0.0])
        est = S.J_alpha(L, 3, y)
        npt.assert_allclose(est.value, S.J_alpha_constant(L, 3.0) * 3.0**-1.5, rtol=1e-3)

    def test_J_alpha_divergent(self):
        with pytest.raises(J.ConeDomainError):
            S.J_alpha(L, 2.0, E)
        assert not S.lemma41_condition(L, 2.0) and S.lemma41_condition(L, 2.6)

    def test_weighted_cone_integral_halfline(self):
        # int_0^inf (y + t)^-3 dy = t^-2 / 2
        npt.assert_allclose(S.weighted_cone_integral(H, -3, 1, [1.0]).value, 0.5, rtol=1e-12)
        npt.assert_allclose(S.weighted_cone_integral(H, -3, 1, [2.0]).value, 1 / 8, rtol=1e-12)

    def test_lemma42_readings(self):
        # s + beta = (-0.2, -0.2): inside the printed domain (< g0* = (0.5, 0)) but not the corrected one
        assert S.lemma42_condition(L, (1, 1), (-1.2, -1.2), "printed")
        assert not S.lemma42_condition(L, (1, 1), (-1.2, -1.2))
        assert S.lemma42_condition(L, (1, 1), (-1.6, -1.6))

    def test_scale_sensitivity_flags_divergence(self):
        conv = S.scale_sensitivity(lambda sp: S.weighted_cone_integral(H, -3, 1, [1.0], sp), QuadratureSpec(nodes=97))
        div = S.scale_sensitivity(lambda sp: S.weighted_cone_integral(H, -0.5, 1, [1.0], sp), QuadratureSpec(nodes=97))
        assert conv < 1e-10 and div > 0.1


class TestBox:
    def test_symbol(self):
        assert S.box_symbol(L, [2.0, 1.0, 0.0]) == 3.0

    @pytest.mark.parametrize("xi", [[2.0, 1.0, 0.0], [1.0, 0.0, 0.0], [3.0, 0.5, -1.2]])
    def test_exponential_eigenfunction(self, xi):
        xi = np.array(xi)
        z = np.array([0.3, -0.2, 0.5]) + 1j * np.array([1.0, 0.2, 0.1])
        f = lambda w: np.exp(1j * J.trace_inner(L, w, xi))  # noqa: E731
        npt.assert_allclose(S.box_apply(L, f, z, 1e-3) / f(z), J.determinant(L, xi), rtol=1e-5)

    def test_rejects_points_outside_tube(self):
        with pytest.raises(J.ConeDomainError):
            S.box_apply(L, lambda w: w[..., 0], np.array([0, 0, 0]) + 1j * np.array([1.0, 2.0, 0.0]), 1e-3)


class TestLattice:
    @pytest.mark.parametrize("delta", [1.0, 0.5])
    def test_normalized_lattice_norm(self, delta):
        F = S.KernelFunction(H, [1j], 2.0)
        lat = S.lattice_norm_rank1(F, 2, 2, 1, delta).value
        # Riemann sum in x with step delta*y and dyadic y: the integral over delta ln 2
        npt.assert_allclose(lat**2 * delta * math.log(2), math.pi / 4, rtol=2e-3)

    def test_window_check(self):
        F = S.KernelFunction(H, [1j], 0.8)
        with pytest.raises(S.LatticeWindowError):
            S.lattice_norm_rank1(F, 2, 2, 1, 1.0, k_range=(-3, 3), x_max=4.0)

    def test_lorentz_not_supported(self):
        with pytest.raises(NotImplementedError):
            S.lattice_norm_rank1(S.KernelFunction(L, 1j * E, 3.0), 2, 2, 1, 1.0)


class TestPointwise:
    def test_bound_ratio_is_dilation_invariant(self):
        F = S.KernelFunction(H, [1j], 2.0)
        grid = np.array([[x + 1j * y] for x in np.linspace(-3, 3, 13) for y in np.geomspace(0.1, 10, 13)])
        r = [S.pointwise_bound_ratio(F.dilated(t), 2, 2, 1, grid * t, norm=S.kernel_mixed_norm(F.dilated(t), 2, 2, 1)) for t in (0.5, 1, 2)]
        npt.assert_allclose(r, r[1], rtol=1e-12)

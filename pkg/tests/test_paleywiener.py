import math

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symcone import jordan as J
from symcone import paleywiener as P
from symcone.quad import QuadratureSpec

H = J.halfline()
L = J.lorentz(3)
E = J.identity(L)
EXP = P.ProfileFunction.single(H, 0.0, [1.0])
ZS = np.array([[0.3 + 0.7j], [1j], [-1 + 2j]])


def exp_synthesis(z):
    # (2 pi)^(-1/2) int_0^inf e^{i z xi} e^{-xi} (2 xi) d xi
    return 2.0 / (1 - 1j * z) ** 2 / math.sqrt(2 * math.pi)


class TestMeasures:
    def test_kinds(self):
        assert P.MeasureSpec.from_s(H, 0).kind == "delta0"
        assert P.MeasureSpec.from_s(H, 1).kind == "density"
        assert P.MeasureSpec.from_s(L, (1, 1.5)).kind == "density"

    def test_outside_wallach_set(self):
        with pytest.raises(J.ConeDomainError):
            P.MeasureSpec.from_s(H, -0.5)

    def test_halfline_density(self):
        # t^(s - 1) / Gamma(s), zero off the cone
        ms = P.MeasureSpec.from_s(H, 2.5)
        npt.assert_allclose(ms.density([[2.0], [-1.0]]), [2.0**1.5 / math.gamma(2.5), 0.0], rtol=1e-14)
        with pytest.raises(J.ConeDomainError):
            P.MeasureSpec.from_s(H, 0).density([[1.0]])


class TestSynthesis:
    def test_closed_form_halfline(self):
        F = P.PaleyWienerFunction(H, np.array([1.0]), EXP)
        npt.assert_allclose(F(ZS), exp_synthesis(ZS[:, 0]), rtol=1e-13)

    def test_quadrature_matches_closed_form(self):
        F = P.PaleyWienerFunction(H, np.array([1.0]), EXP)
        est = P.pw_synthesize(H, 1.0, EXP, ZS, QuadratureSpec(nodes=97))
        npt.assert_allclose([e.value for e in est], F(ZS), rtol=1e-9)

    def test_quadrature_matches_closed_form_lorentz(self):
        f = P.ProfileFunction.single(L, 0.5, E)
        s = np.array([1.0, 1.5])
        z = np.array([0.2, -0.1, 0.3]) + 1j * np.array([1.0, 0.2, 0.1])
        est = P.pw_synthesize(L, s, f, z, QuadratureSpec(nodes=49))
        npt.assert_allclose(est.value, P.PaleyWienerFunction(L, s, f)(z), rtol=1e-4)

    def test_rejects_points_outside_tube(self):
        with pytest.raises(J.ConeDomainError):
            P.pw_synthesize(H, 1.0, EXP, [[1 - 0.5j]])

    @settings(max_examples=30)
    @given(st.floats(0.2, 5.0), st.floats(-2, 2), st.floats(0.2, 3))
    def test_dilated_profile_synthesizes_dilated_function(self, t, x, y):
        s = np.array([1.0])
        f = EXP + P.ProfileFunction.single(H, 0.5, [3.0], -0.5)
        F = P.PaleyWienerFunction(H, s, f)
        z = np.array([[x + 1j * y]])
        npt.assert_allclose(F.dilated(t)(z), F(z / t), rtol=1e-11)


class TestNorms:
    def test_profile_norm_closed_halfline(self):
        # int_0^inf e^{-2 xi} (2 xi) d xi = 1/2
        npt.assert_allclose(P.profile_norm_closed(H, 1.0, EXP) ** 2, 0.5, rtol=1e-14)

    @pytest.mark.parametrize("cone,s", [(H, 1.0), (L, (1.0, 1.5))], ids=["halfline", "lorentz"])
    def test_profile_norm_quadrature(self, cone, s):
        e = J.identity(cone)
        f = P.ProfileFunction.single(cone, 0.0, e) + P.ProfileFunction.single(cone, 0.0, 2 * e, -0.5)
        est = P.h2mu_norm_via_profile(cone, s, f, QuadratureSpec(nodes=97 if cone.r == 1 else 49))
        npt.assert_allclose(est.value, P.profile_norm_closed(cone, s, f), rtol=1e-6)

    @pytest.mark.parametrize("y", [0.5, 1.0, 3.0])
    def test_plancherel_ratio(self, y):
        # the ratio is 4^{|s*|} independently of y
        r = P.plancherel_residual(H, 1.0, EXP, [y], QuadratureSpec(nodes=97), QuadratureSpec(nodes=97))
        npt.assert_allclose(r, 4.0, rtol=1e-8)


class TestEmbeddings:
    @settings(max_examples=40)
    @given(st.floats(0.2, 4), st.floats(2, 8))
    def test_thm11_target_is_dilation_neutral(self, s, q):
        p, q, nu = P.embedding_target(H, s, "thm11", q)
        npt.assert_allclose(P.expected_exponent(H, s, p, q, nu), 0.0, atol=1e-12)

    @settings(max_examples=40)
    @given(st.floats(0.6, 3), st.floats(2, 8), st.floats(-0.5, 0.5))
    def test_perturbation_shifts_exponent_by_rank_times_eps(self, s, q, eps):
        for cone in (H, L):
            p, q2, nu = P.embedding_target(cone, s, "thm11", q)
            npt.assert_allclose(P.expected_exponent(cone, s, p, q2, nu + eps * q2), cone.r * eps, atol=1e-12)

    def test_thm12_target(self):
        p, q, nu = P.embedding_target(L, (1.0, 1.5), "thm12", 4.0)
        assert p == 4.0
        npt.assert_allclose(nu, [2 * 1.0 + 1.5, 2 * 1.5 + 1.5])

    def test_target_preconditions(self):
        with pytest.raises(J.ConeDomainError):
            P.embedding_target(H, 1.0, "thm11", 1.5)
        with pytest.raises(J.ConeDomainError):
            P.embedding_target(H, 1.0, "thm12", 3.0)
        with pytest.raises(ValueError):
            P.embedding_target(H, 1.0, "thm99", 3.0)

    def test_thm11_ratio_flat_under_dilation(self):
        target = P.embedding_target(H, 1.0, "thm11", 2.0)
        res = P.embedding_ratio(H, 1.0, target, [EXP], suite="thm11")
        assert res.passed, res.summary

    def test_lemma8_membership(self):
        res = P.lemma8_membership(H, 1.0, 2.0, EXP)
        assert res.member and 0 < res.ratio < math.inf


class TestSquare:
    @pytest.mark.parametrize("u", [0.5, 1.0, 2.0])
    def test_g_closed_form(self, u):
        est = P.square_pw_coefficient(H, 1.0, EXP, [u])
        npt.assert_allclose(est.value, 2 / 3 * u**3 * math.exp(-u), rtol=1e-6)

    def test_weighted_l2_integral(self):
        # int_0^inf (4/9) u^6 e^{-2u} u^{-3} du = (4/9) 3! / 2^4 = 1/6
        npt.assert_allclose(P.gsquare_bound_integral(H, 1.0, EXP), 1 / 6, rtol=1e-6)

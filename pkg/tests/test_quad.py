import math

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symcone import conefunc as C
from symcone import jordan as J
from symcone import quad as Q

H = J.halfline()
L = J.lorentz(3)
E = J.identity(L)


def gaussian(x):
    return np.exp(-np.sum(x**2, axis=-1))


class TestSpec:
    def test_text_round_trip(self):
        spec = Q.QuadratureSpec(scheme="monte_carlo", samples=1234, scale=0.5, seed=9)
        assert Q.QuadratureSpec.from_text(spec.to_text()) == spec

    def test_invalid(self):
        with pytest.raises(ValueError):
            Q.QuadratureSpec(scheme="simpson")
        with pytest.raises(ValueError):
            Q.QuadratureSpec(nodes=1)
        with pytest.raises(ValueError):
            Q.QuadratureSpec(scale=0.0)
        with pytest.raises(ValueError):
            Q.QuadratureSpec.from_text("nodes=5 colour=red")

    def test_refined(self):
        assert Q.QuadratureSpec(nodes=49).refined().nodes == 97
        assert Q.QuadratureSpec(scheme="tensor_gauss", nodes=10).refined().nodes == 20
        assert Q.QuadratureSpec(scheme="monte_carlo", samples=100).refined().samples == 200


class TestRank1:
    @pytest.mark.parametrize("scheme,nodes,rtol", [("double_exponential", 97, 1e-11), ("tensor_gauss", 64, 1e-12)])
    def test_line_gaussian(self, scheme, nodes, rtol):
        est = Q.integrate(Q.SlabRegion(H), gaussian, Q.QuadratureSpec(scheme=scheme, nodes=nodes))
        npt.assert_allclose(est.value, math.sqrt(math.pi), rtol=rtol)

    def test_semi_axis_endpoint_singularity(self):
        # int_0^inf y^(-1/2) e^-y dy = sqrt(pi); the endpoint singularity needs the DE map
        est = Q.integrate(Q.ConeRegion(H), lambda y: y[:, 0] ** -0.5 * np.exp(-y[:, 0]), Q.QuadratureSpec(nodes=97))
        npt.assert_allclose(est.value, math.sqrt(math.pi), rtol=1e-12)
        assert est.error_estimate < 1e-6

    def test_cap(self):
        est = Q.integrate(Q.ConeCapRegion(H, [2.0]), lambda x: x[:, 0] * (2 - x[:, 0]))
        npt.assert_allclose(est.value, 4 / 3, rtol=1e-12)

    def test_tube_with_cut(self):
        f = lambda p: np.exp(-p[:, 0] ** 2 - p[:, 1])  # noqa: E731
        full = Q.integrate(Q.TubeRegion(H), f, Q.QuadratureSpec(nodes=97)).value
        cut = Q.integrate(Q.TubeRegion(H, y_max=1.0), f, Q.QuadratureSpec(nodes=97)).value
        npt.assert_allclose(full, math.sqrt(math.pi), rtol=1e-11)
        npt.assert_allclose(cut, math.sqrt(math.pi) * (1 - math.exp(-1)), rtol=1e-11)

    def test_cut_axis_slow_decay(self):
        # int_0^1024 y^(-1/2) e^(-y/300) dy = sqrt(300) gamma(1/2, 1024/300), lower incomplete
        from scipy.special import gamma, gammainc

        region = Q.ConeRegion(H, Q.Axis("semi_cut", 0.0, 1024.0))
        est = Q.integrate(region, lambda y: y[:, 0] ** -0.5 * np.exp(-y[:, 0] / 300), Q.QuadratureSpec(nodes=97))
        npt.assert_allclose(est.value, math.sqrt(300) * gamma(0.5) * gammainc(0.5, 1024 / 300), rtol=1e-10)

    def test_refine_reports_difference(self):
        region = Q.ConeRegion(H)
        f = lambda y: np.exp(-y[:, 0])  # noqa: E731
        first = Q.integrate(region, f, Q.QuadratureSpec(nodes=25))
        second = Q.refine(first, region, f)
        assert second.spec.nodes == 49
        npt.assert_allclose(second.value, 1.0, rtol=1e-6)
        assert second.error_estimate == pytest.approx(abs(second.value - first.value))

    def test_non_finite_integrand_rejected(self):
        with pytest.raises(Q.QuadratureError), np.errstate(divide="ignore"):
            Q.integrate(Q.ConeRegion(H), lambda y: 1.0 / (y[:, 0] - y[:, 0]))


class TestLorentz:
    def test_cone_measure_is_trace_form(self):
        # int_Omega e^-(e|y) Delta^(s - n/r) dy = Gamma_Omega(s) for s = n/r
        est = Q.integrate(Q.ConeRegion(L), lambda y: np.exp(-J.trace_inner(L, E, y)), Q.QuadratureSpec(nodes=49))
        npt.assert_allclose(est.value, C.gamma_closed(L, 1.5), rtol=1e-5)

    def test_slab_gaussian(self):
        # coordinate Gaussian over R^3 times the trace-form density 2^(3/2)
        est = Q.integrate(Q.SlabRegion(L), gaussian, Q.QuadratureSpec(nodes=33))
        npt.assert_allclose(est.value, L.volume_factor * math.pi**1.5, rtol=1e-3)

    def test_cap_volume(self):
        # vol(Omega cap (y - Omega)) = Delta(y)^(n/r) vol(cap at e)
        one = Q.integrate(Q.ConeCapRegion(L, E), lambda x: np.ones(len(x)), Q.QuadratureSpec(nodes=17)).value
        y = np.array([3.0, 1.0, 0.5])
        vy = Q.integrate(Q.ConeCapRegion(L, y), lambda x: np.ones(len(x)), Q.QuadratureSpec(nodes=17)).value
        npt.assert_allclose(vy, one * J.determinant(L, y) ** 1.5, rtol=1e-10)

    def test_monte_carlo_is_seeded(self):
        spec = Q.QuadratureSpec(scheme="monte_carlo", samples=20000, seed=3)
        f = lambda y: np.exp(-J.trace_inner(L, E, y))  # noqa: E731
        a = Q.integrate(Q.ConeRegion(L), f, spec)
        b = Q.integrate(Q.ConeRegion(L), f, spec)
        c = Q.integrate(Q.ConeRegion(L), f, Q.QuadratureSpec(scheme="monte_carlo", samples=20000, seed=4))
        assert a.value == b.value and a.value != c.value
        assert abs(a.value - C.gamma_closed(L, 1.5)) < 5 * a.error_estimate


class TestProperties:
    @settings(max_examples=25, deadline=None)
    @given(st.floats(0.3, 4.0), st.floats(0.5, 3.0))
    def test_laguerre_moment(self, s, b):
        # int_0^inf y^(s-1) e^(-b y) dy = Gamma(s) b^-s
        est = Q.integrate(Q.ConeRegion(H), lambda y: y[:, 0] ** (s - 1) * np.exp(-b * y[:, 0]), Q.QuadratureSpec(nodes=97))
        npt.assert_allclose(est.value, math.gamma(s) * b**-s, rtol=1e-8)

    @settings(max_examples=15, deadline=None)
    @given(st.floats(0.2, 5.0))
    def test_scale_invariance_of_convergent_integral(self, scale):
        f = lambda y: np.exp(-y[:, 0])  # noqa: E731
        est = Q.integrate(Q.ConeRegion(H), f, Q.QuadratureSpec(nodes=97, scale=scale))
        npt.assert_allclose(est.value, 1.0, rtol=1e-9)

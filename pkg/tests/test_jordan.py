import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symcone import jordan as J

H = J.halfline()
L = J.lorentz(3)
E = J.identity(L)

finite = st.floats(-5, 5, allow_nan=False)


@st.composite
def lorentz_points(draw, n=3):
    xb = np.array([draw(finite) for _ in range(n - 1)])
    gap = draw(st.floats(0.05, 5))
    return np.concatenate([[np.linalg.norm(xb) + gap], xb])


@st.composite
def vectors(draw, n=3):
    return np.array([draw(finite) for _ in range(n)])


class TestOracles:
    def test_lorentz_determinant(self):
        # x0^2 - |x'|^2 on the spin factor
        assert J.determinant(L, [2.0, 1.0, 0.0]) == 3.0

    def test_spectral_values(self):
        lam, c = J.spectral(L, [2.0, 1.0, 0.0])
        npt.assert_allclose(lam, [3.0, 1.0])
        npt.assert_allclose(c, [[0.5, 0.5, 0.0], [0.5, -0.5, 0.0]])

    def test_inverse(self):
        npt.assert_allclose(J.inverse(H, [4.0]), [0.25])
        npt.assert_allclose(J.inverse(L, [2.0, 1.0, 0.0]), [2 / 3, -1 / 3, 0.0])

    def test_minors_in_standard_frame(self):
        x = np.array([2.0, 1.0, 0.0])
        assert J.principal_minor(L, 1, x) == 3.0
        assert J.rotated_minor(L, 1, x) == 1.0
        assert J.principal_minor(L, 2, x) == J.rotated_minor(L, 2, x) == 3.0

    def test_power_function_is_minor_product(self):
        x = np.array([2.0, 1.0, 0.0])
        # Delta_(s1, s2) = Delta_1^(s1 - s2) Delta^(s2)
        npt.assert_allclose(J.power_function(L, [2.0, 0.5], x), 3.0**1.5 * 3.0**0.5)
        npt.assert_allclose(J.power_function(L, [2.0, 0.5], x, rotated=True), 1.0**1.5 * 3.0**0.5)

    def test_structure_constants(self):
        assert (H.r, H.d, H.n_over_r) == (1, 0.0, 1.0)
        assert (L.r, L.d, L.n_over_r) == (2, 1.0, 1.5)
        npt.assert_allclose(L.g0, [0.0, 0.5])
        assert J.lorentz(5).d == 3.0

    def test_quadratic_representation_maps_e_to_square(self):
        a = np.array([1.5, 0.3, -0.4])
        npt.assert_allclose(J.quadratic_representation(L, a) @ E, J.jordan_product(L, a, a))

    def test_sqrt(self):
        x = np.array([3.0, 1.0, 0.5])
        r = J.sqrt(L, x)
        npt.assert_allclose(J.jordan_product(L, r, r), x, atol=1e-14)

    def test_wallach(self):
        assert J.in_wallach(L, [0, 0]) and J.in_wallach(L, [0, 0.5]) and J.in_wallach(L, [1, 1.5])
        assert not J.in_wallach(L, [0.2, 0.3])
        assert J.in_wallach(H, [0.7]) and not J.in_wallach(H, [-0.1])

    def test_parse_cone_round_trip(self):
        for text in ("halfline", "lorentz:3", "lorentz:4"):
            assert J.parse_cone(text).spec_string() == text
        c = J.parse_cone("lorentz:3:u=0,1")
        npt.assert_allclose(c.u, [0.0, 1.0])
        assert J.parse_cone(c.spec_string()) == c

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            J.parse_cone("cube:3")
        with pytest.raises(ValueError):
            J.lorentz(3, [1.0, 1.0])
        with pytest.raises(J.ConeDomainError):
            J.power_function(L, [1, 1], [1.0, 2.0, 0.0])
        with pytest.raises(ValueError):
            J.principal_minor(L, 3, E)

    def test_in_cone_is_strict(self):
        assert not J.in_cone(L, [1.0, 1.0, 0.0])
        assert J.in_cone(L, [1.0, 0.5, 0.5])

    def test_rotated_frame_cone(self):
        c = J.lorentz(3, [0.0, 1.0])
        x = np.array([2.0, 0.0, 1.0])
        assert J.principal_minor(c, 1, x) == 3.0


class TestProperties:
    @given(lorentz_points())
    def test_spectral_reconstruction(self, x):
        lam, c = J.spectral(L, x)
        npt.assert_allclose(lam @ c, x, atol=1e-12)
        npt.assert_allclose(J.determinant(L, x), lam.prod(), rtol=1e-10, atol=1e-10)

    @given(lorentz_points())
    def test_inverse_product(self, x):
        npt.assert_allclose(J.jordan_product(L, x, J.inverse(L, x)), E, atol=1e-9)

    @given(lorentz_points(), st.floats(-2, 2), st.floats(-2, 2), st.floats(0.1, 10))
    def test_power_homogeneity_and_additivity(self, x, s1, s2, t):
        s = np.array([s1, s2])
        npt.assert_allclose(J.power_function(L, s, t * x), t ** s.sum() * J.power_function(L, s, x), rtol=1e-10)
        npt.assert_allclose(
            J.power_function(L, s, x) * J.power_function(L, [1.0, 0.5], x), J.power_function(L, s + [1.0, 0.5], x), rtol=1e-10
        )

    @given(vectors(), vectors())
    def test_jordan_identity(self, x, y):
        x2 = J.jordan_product(L, x, x)
        lhs = J.jordan_product(L, J.jordan_product(L, x2, y), x)
        rhs = J.jordan_product(L, x2, J.jordan_product(L, y, x))
        npt.assert_allclose(lhs, rhs, atol=1e-9 * (1 + np.abs(lhs).max()))

    @given(lorentz_points(), lorentz_points())
    def test_quadratic_representation_determinant(self, a, x):
        Pa = J.quadratic_representation(L, a)
        npt.assert_allclose(J.determinant(L, Pa @ x), J.determinant(L, a) ** 2 * J.determinant(L, x), rtol=1e-8)
        assert J.in_cone(L, Pa @ x) or J.determinant(L, Pa @ x) < 1e-9

    @given(lorentz_points(), vectors(), vectors())
    def test_quadratic_representation_self_adjoint(self, a, x, y):
        Pa = J.quadratic_representation(L, a)
        npt.assert_allclose(J.trace_inner(L, Pa @ x, y), J.trace_inner(L, x, Pa @ y), atol=1e-8 * (1 + np.abs(Pa).max() * 100))

    @given(lorentz_points())
    def test_reflection_swaps_frame(self, x):
        npt.assert_allclose(J.principal_minor(L, 1, J.reflect(L, x)), J.rotated_minor(L, 1, x), atol=1e-12)

    @settings(max_examples=50)
    @given(st.lists(st.floats(0.01, 10), min_size=1, max_size=20))
    def test_halfline_is_multiplicative(self, xs):
        x = np.array(xs)[:, None]
        npt.assert_allclose(J.power_function(H, 2.5, x), x[:, 0] ** 2.5)
        npt.assert_allclose(J.inverse(H, x), 1 / x)

"""Paley-Wiener synthesis for the Hardy-type spaces ``H^2_mu`` and the embedding checks.

A holomorphic F on the tube is synthesized from a profile f on the cone:

    F(z) = (2 pi)^(-n/2) int_Omega e^{i(z|xi)} f(xi) Delta*_{s*}(2 xi) d xi.

Profiles are finite sums ``sum_i c_i Delta_{a_i}(xi) exp(-(b_i|xi))``.  When
every ``a_i`` is scalar (or s is scalar) the synthesis has a closed form by
analytic continuation of the Laplace transform of a power function, which
serves as an oracle for the quadrature path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import jordan as J
from .conefunc import gamma_closed, log_gamma_closed
from .jordan import ConeDescriptor, ConeDomainError
from .quad import (
    ConeCapRegion,
    ConeRegion,
    IntegralEstimate,
    QuadratureSpec,
    SlabRegion,
    build_rule,
    default_spec,
    evaluate,
    integrate,
)
from .results import ExperimentResult, drift, fit_slope
from .spaces import NormResult, TubeFunction, _principal_log, _tube_array, mixed_norm

__all__ = [
    "MeasureSpec",
    "mu_density",
    "ProfileTerm",
    "ProfileFunction",
    "PaleyWienerFunction",
    "pw_synthesize",
    "profile_norm_closed",
    "h2mu_norm_via_profile",
    "plancherel_residual",
    "expected_exponent",
    "embedding_target",
    "embedding_ratio",
    "square_pw_coefficient",
    "gsquare_synthesize",
    "gsquare_bound_integral",
    "Lemma8Result",
    "lemma8_membership",
]

DEFAULT_SCALES = tuple(2.0**k for k in range(-2, 3))


# -- measures ---------------------------------------------------------------------


@dataclass(frozen=True)
class MeasureSpec:
    cone: ConeDescriptor
    s: np.ndarray
    kind: str  # "delta0" or "density"

    @classmethod
    def from_s(cls, cone: ConeDescriptor, s) -> MeasureSpec:
        s = J.as_multiindex(cone, s)
        u = J.wallach_parameters(cone, s)
        if u is None:
            raise ConeDomainError(f"s = {s.tolist()} is not in the Wallach set")
        if np.all(s == 0):
            return cls(cone, s, "delta0")
        if np.all(u > 0):
            return cls(cone, s, "density")
        raise ConeDomainError(f"s = {s.tolist()} gives a singular Wallach measure, which is not supported")

    def density(self, t) -> np.ndarray:
        return mu_density(self, t)


def mu_density(ms: MeasureSpec, t) -> np.ndarray:
    """``chi_Omega(t) Delta_s(t) / Gamma_Omega(s) / Delta(t)^(n/r)``."""
    if ms.kind != "density":
        raise ConeDomainError("delta0 has no density")
    cone = ms.cone
    t = J._points(cone, np.asarray(t, float))
    inside = J.in_cone(cone, t)
    out = np.zeros(t.shape[:-1])
    if np.any(inside):
        ti = t[inside]
        out[inside] = J.power_function(cone, ms.s - cone.n_over_r, ti) / gamma_closed(cone, ms.s)
    return out


# -- profiles ------------------------------------------------------------------------


@dataclass(frozen=True)
class ProfileTerm:
    coeff: complex
    a: np.ndarray  # multi-index
    b: np.ndarray  # point of the cone


@dataclass(frozen=True)
class ProfileFunction:
    """``f(xi) = sum_i c_i Delta_{a_i}(xi) exp(-(b_i | xi))`` on the cone."""

    cone: ConeDescriptor
    terms: tuple

    @classmethod
    def single(cls, cone: ConeDescriptor, a=0.0, b=None, coeff: complex = 1.0) -> ProfileFunction:
        b = J.identity(cone) if b is None else b
        return cls(cone, (cls._term(cone, coeff, a, b),))

    @staticmethod
    def _term(cone, coeff, a, b) -> ProfileTerm:
        b = J._points(cone, np.asarray(b, float))
        if not J.in_cone(cone, b):
            raise ConeDomainError("profile decay point b must lie in the open cone")
        return ProfileTerm(complex(coeff), J.as_multiindex(cone, a), b)

    def __add__(self, other: ProfileFunction) -> ProfileFunction:
        return ProfileFunction(self.cone, self.terms + other.terms)

    def scaled(self, c: complex) -> ProfileFunction:
        return ProfileFunction(self.cone, tuple(replace(t, coeff=t.coeff * c) for t in self.terms))

    def __call__(self, xi) -> np.ndarray:
        cone = self.cone
        xi = J._points(cone, np.asarray(xi, float))
        out = np.zeros(xi.shape[:-1], complex)
        for t in self.terms:
            out += t.coeff * J.power_function(cone, t.a, xi) * np.exp(-J.trace_inner(cone, t.b, xi))
        return out

    def dilated(self, t: float, s) -> ProfileFunction:
        """Profile of ``z -> F(z / t)`` when F is synthesized from this profile with index s."""
        cone = self.cone
        ss = J.multiindex_star(J.as_multiindex(cone, s))
        terms = tuple(
            ProfileTerm(term.coeff * t ** (term.a.sum() + ss.sum() + cone.n), term.a, term.b * t) for term in self.terms
        )
        return ProfileFunction(cone, terms)

    def describe(self) -> str:
        parts = [
            f"{t.coeff.real:g}{t.coeff.imag:+g}j*Delta_{t.a.tolist()}*exp(-(b|xi)),b={t.b.tolist()}" for t in self.terms
        ]
        return " + ".join(parts)


def _sstar(cone, s):
    return J.multiindex_star(J.as_multiindex(cone, s))


def _term_synthesis(cone, s, term, w):
    """Closed-form ``int e^{-(w|xi)} Delta_a(xi) Delta*_{s*}(2 xi) d xi`` for complex w in the right tube."""
    ss = _sstar(cone, s)
    nr = cone.n_over_r
    scale = 2.0 ** ss.sum()
    if cone.r == 1:
        sigma = ss[0] + term.a[0] + 1.0
        if not sigma > 0:
            raise ConeDomainError(f"profile not integrable at the origin (exponent {sigma:g})")
        logw = _principal_log(w[..., 0], "w")
        return scale * math.exp(log_gamma_closed(cone, [sigma])) * np.exp(-sigma * logw)
    if np.all(term.a == term.a[0]):
        # Delta^c Delta*_{s*} = Delta*_{s*+c}; Laplace transform in the rotated frame
        sig = ss + term.a[0] + nr
        lg = log_gamma_closed(cone, sig)  # frame-independent
        d1 = _principal_log(J.principal_minor(cone, 1, w), "Delta_1(w)")
    elif np.all(ss == ss[0]):
        sig = term.a + ss[0] + nr
        lg = log_gamma_closed(cone, sig)
        d1 = _principal_log(J.rotated_minor(cone, 1, w), "Delta*_1(w)")
    else:
        raise NotImplementedError("closed form needs a scalar profile exponent or a scalar s")
    dl = _principal_log(J.determinant(cone, w), "Delta(w)")
    # Delta*_sig(w^-1) = Delta_1(w)^(sig1 - sig2) Delta(w)^(-sig1) (and its mirror image)
    return scale * np.exp(lg + (sig[0] - sig[1]) * d1 - sig[0] * dl)


@dataclass(frozen=True)
class PaleyWienerFunction(TubeFunction):
    """F synthesized from a profile, evaluated in closed form."""

    cone: ConeDescriptor
    s: np.ndarray
    profile: ProfileFunction

    def __call__(self, z) -> np.ndarray:
        cone = self.cone
        z = _tube_array(cone, z)
        out = 0.0
        for term in self.profile.terms:
            w = term.b - 1j * z
            out = out + term.coeff * _term_synthesis(cone, self.s, term, w)
        return out / (2 * math.pi) ** (cone.n / 2)

    def dilated(self, t: float) -> PaleyWienerFunction:
        return PaleyWienerFunction(self.cone, self.s, self.profile.dilated(t, self.s))

    def scaled(self, c: complex) -> PaleyWienerFunction:
        return PaleyWienerFunction(self.cone, self.s, self.profile.scaled(c))

    def describe(self) -> str:
        return f"pw(s={np.asarray(self.s).tolist()}; {self.profile.describe()})"


def pw_synthesize(cone: ConeDescriptor, s, f: ProfileFunction, z, spec: QuadratureSpec | None = None):
    """Quadrature value of the synthesis integral at z (one point -> IntegralEstimate, many -> list)."""
    ss = _sstar(cone, s)
    z = _tube_array(cone, z)
    single = z.ndim == 1
    zs = np.atleast_2d(z)
    if not np.all(J.in_cone(cone, zs.imag)):
        raise ConeDomainError("pw_synthesize: z must lie in the tube")
    spec = spec or default_spec(cone)
    rule = build_rule(ConeRegion(cone), spec)
    xi = rule.points
    base = evaluate(rule, lambda p: f(p) * J.power_function(cone, ss, 2 * p, rotated=True))
    phase = np.exp(1j * J.trace_inner(cone, zs[:, None, :], xi[None, :, :]))
    vals = phase * base[None, :]
    c = (2 * math.pi) ** (-cone.n / 2)
    out = []
    for row in vals:
        v, err = rule.combine(row)
        out.append(IntegralEstimate(complex(v) * c, err * c, len(rule), True, spec))
    return out[0] if single else out


def profile_norm_closed(cone: ConeDescriptor, s, f: ProfileFunction, weight_index=None) -> float:
    """``(int |f|^2 Delta*_{w}(2 xi) d xi)^(1/2)`` in closed form (w = s* by default).

    Needs scalar profile exponents on Lorentz cones.
    """
    w = _sstar(cone, s) if weight_index is None else J.as_multiindex(cone, weight_index)
    total = 0.0
    for ti in f.terms:
        for tj in f.terms:
            a = ti.a + tj.a
            if cone.r > 1 and not np.all(a == a[0]):
                raise NotImplementedError("closed-form profile norm needs scalar exponents")
            sig = w + a + cone.n_over_r
            b = ti.b + tj.b
            val = 2.0 ** w.sum() * gamma_closed(cone, sig) * float(J.power_function(cone, sig, J.inverse(cone, b), rotated=True))
            total += (ti.coeff * np.conj(tj.coeff)).real * val
    return math.sqrt(total)


def h2mu_norm_via_profile(cone: ConeDescriptor, s, f: ProfileFunction, spec: QuadratureSpec | None = None, weight_index=None) -> NormResult:
    """``||f||_{L^2_{s*}} = (int_Omega |f(xi)|^2 Delta*_{s*}(2 xi) d xi)^(1/2)`` by quadrature."""
    w = _sstar(cone, s) if weight_index is None else J.as_multiindex(cone, weight_index)
    est = integrate(ConeRegion(cone), lambda p: np.abs(f(p)) ** 2 * J.power_function(cone, w, 2 * p, rotated=True), spec)
    value = math.sqrt(max(est.value, 0.0))
    return NormResult(value, [est], {"s": J.as_multiindex(cone, s), "weight": w}, value * est.relative_error / 2)


def plancherel_residual(
    cone: ConeDescriptor, s, f: ProfileFunction, y, spec: QuadratureSpec | None = None, profile_spec: QuadratureSpec | None = None
) -> float:
    """Ratio ``int_V |F(x+iy)|^2 dx / int_Omega e^{-2(y|xi)} |f|^2 Delta*_{2s*}(xi) d xi``.

    With the normalizations used here the ratio is ``4^{|s*|}`` for every y.
    """
    y = J._points(cone, np.asarray(y, float))
    F = PaleyWienerFunction(cone, J.as_multiindex(cone, s), f)
    ss = _sstar(cone, s)
    lhs = integrate(SlabRegion(cone), lambda x: np.abs(F(x + 1j * y)) ** 2, spec)
    rhs = integrate(
        ConeRegion(cone),
        lambda xi: np.exp(-2 * J.trace_inner(cone, y, xi)) * np.abs(f(xi)) ** 2 * J.power_function(cone, 2 * ss, xi, rotated=True),
        profile_spec,
    )
    return lhs.value / rhs.value


# -- embeddings ----------------------------------------------------------------------


def expected_exponent(cone: ConeDescriptor, s, p: float, q: float, nu) -> float:
    """Dilation exponent of ``||F(./t)||_{A^{p,q}_nu} / ||F(./t)||_{H^2_mu}``.

    Zero exactly when ``nu/q + n/(rp) = n/(2r) + s/2`` summed over components.
    """
    s, nu = J.as_multiindex(cone, s), J.as_multiindex(cone, nu)
    return float(cone.n / p + nu.sum() / q - (cone.n + s.sum()) / 2)


def embedding_target(cone: ConeDescriptor, s, suite: str, q: float, p: float | None = None, nu=None):
    """(p, q, nu) for the sufficiency suites, or the given target for ``free``."""
    s = J.as_multiindex(cone, s)
    if suite == "thm11":
        nu = q / 2 * s
        if q < 2 or not np.all(nu > cone.g0):
            raise ConeDomainError("Theorem 11 suite needs q >= 2 and (q/2)s > g0")
        return 2.0, q, nu
    if suite == "thm12":
        if q < 4:
            raise ConeDomainError("Theorem 12 suite needs q >= 4")
        return 4.0, q, q / 4 * (2 * s + cone.n_over_r)
    if suite == "free":
        if p is None or nu is None:
            raise ValueError("free target needs p and nu")
        return float(p), q, J.as_multiindex(cone, nu)
    raise ValueError(f"unknown embedding suite {suite!r}")


def embedding_ratio(
    cone: ConeDescriptor,
    s,
    target: tuple,
    f_sample: list,
    spec: QuadratureSpec | None = None,
    inner_spec: QuadratureSpec | None = None,
    scales=DEFAULT_SCALES,
    slope_tol: float = 1e-3,
    suite: str = "free",
    covariant: bool = False,
) -> ExperimentResult:
    """``||F||_{A^{p,q}_nu} / ||F||_{H^2_mu}`` per profile with a dilation sweep.

    The H^2_mu norm is the profile norm (Theorem 10 identity).  For each
    profile the log-log slope of the ratio over the sweep is fitted and
    compared with the change-of-variables exponent.  With ``covariant`` the
    rules are scaled with the dilation, which removes quadrature drift from
    the slope (the ratio values keep the error of the chosen rules).
    """
    p, q, nu = target
    s = J.as_multiindex(cone, s)
    nu = J.as_multiindex(cone, nu)
    expo = expected_exponent(cone, s, p, q, nu)
    res = ExperimentResult(
        f"embedding-{suite}", {"cone": cone.spec_string(), "s": s, "p": p, "q": q, "nu": nu, "scales": list(scales)}
    )
    slopes, finite = [], True
    for idx, f in enumerate(f_sample):
        ratios = []
        for t in scales:
            ft = f.dilated(t, s)
            F = PaleyWienerFunction(cone, s, ft)
            sp, si = spec, inner_spec
            if covariant:
                sp, si = (replace(x or QuadratureSpec(), scale=(x or QuadratureSpec()).scale * t) for x in (spec, inner_spec))
            a = mixed_norm(F, p, q, nu, sp, si)
            # the dilated profile lives on the frequency scale 1/t
            sh = replace(spec or QuadratureSpec(), scale=(spec or QuadratureSpec()).scale / t) if covariant else spec
            h = h2mu_norm_via_profile(cone, s, ft, sh)
            ratio = a.value / h.value
            ok = bool(np.isfinite(ratio) and a.finite)
            finite &= ok
            ratios.append(ratio)
            res.records.append(
                {"function": idx, "profile": f.describe(), "scale": t, "a_norm": a.value, "h2_norm": h.value, "ratio": ratio, "finite": ok}
            )
        slopes.append(fit_slope(scales, ratios))
    slopes_arr = np.array(slopes)
    res.summary = {
        "expected_exponent": expo,
        "slopes": slopes,
        "max_slope_error": float(np.max(np.abs(slopes_arr - expo))),
        "max_ratio": max(r["ratio"] for r in res.records),
        "all_finite": finite,
    }
    res.passed = bool(finite and np.all(np.abs(slopes_arr - expo) < slope_tol))
    res.status = "exponent matches" if res.passed else "exponent mismatch or divergence"
    return res


# -- F^2 and its coefficient g --------------------------------------------------------


def square_pw_coefficient(cone: ConeDescriptor, s, f: ProfileFunction, u, spec: QuadratureSpec | None = None) -> IntegralEstimate:
    """``g(u) = int_{Omega cap (u - Omega)} f(u - xi) f(xi) Delta*_{s*}(2(u - xi)) Delta*_{s*}(2 xi) d xi``."""
    ss = _sstar(cone, s)
    u = J._points(cone, np.asarray(u, float))

    def g(xi):
        rest = u - xi
        return f(rest) * f(xi) * J.power_function(cone, ss, 2 * rest, rotated=True) * J.power_function(cone, ss, 2 * xi, rotated=True)

    return integrate(ConeCapRegion(cone, u), g, spec)


def _g_values(cone, s, f, points, spec):
    return np.array([square_pw_coefficient(cone, s, f, u, spec).value for u in points])


def gsquare_synthesize(cone: ConeDescriptor, s, f: ProfileFunction, z, spec=None, inner_spec=None) -> np.ndarray:
    """``int_Omega e^{i(z|u)} g(u) du`` for each z (F^2 up to the constant ``(2 pi)^n``)."""
    z = np.atleast_2d(_tube_array(cone, z))
    rule = build_rule(ConeRegion(cone), spec or default_spec(cone))
    g = _g_values(cone, s, f, rule.points, inner_spec or spec)
    phase = np.exp(1j * J.trace_inner(cone, z[:, None, :], rule.points[None, :, :]))
    return phase @ (rule.weights * g)


def gsquare_bound_integral(cone: ConeDescriptor, s, f: ProfileFunction, spec=None, inner_spec=None) -> float:
    """``int_Omega |g(u)|^2 / Delta*_{2s* + n/r}(u) du``."""
    ss = _sstar(cone, s)
    rule = build_rule(ConeRegion(cone), spec or default_spec(cone))
    g = _g_values(cone, s, f, rule.points, inner_spec or spec)
    vals = np.abs(g) ** 2 / J.power_function(cone, 2 * ss + cone.n_over_r, rule.points, rotated=True)
    return float(rule.weights @ vals)


# -- Lemma 8 ----------------------------------------------------------------------------


@dataclass
class Lemma8Result:
    member: bool
    bergman_norm: NormResult
    profile_norm: NormResult
    ratio: float
    notes: list = field(default_factory=list)


def lemma8_membership(cone: ConeDescriptor, nu, q: float, f: ProfileFunction, spec=None, inner_spec=None) -> Lemma8Result:
    """Synthesize F with index ``s = nu`` and compare ``||F||_{A^{2,q}_nu}`` with
    ``||f||`` in ``L^2(Delta*_{2(1-1/q) nu*}(2 xi) d xi)``."""
    nu = J.as_multiindex(cone, nu)
    if q < 2 or not np.all(nu > cone.g0):
        raise ConeDomainError("Lemma 8 needs q >= 2 and nu > g0")
    w = 2 * (1 - 1 / q) * J.multiindex_star(nu)
    pn = h2mu_norm_via_profile(cone, nu, f, spec, weight_index=w)
    F = PaleyWienerFunction(cone, nu, f)
    bn = mixed_norm(F, 2, q, nu, spec, inner_spec)
    ratio = bn.value / pn.value
    return Lemma8Result(bool(np.isfinite(bn.value) and np.isfinite(pn.value)), bn, pn, ratio)

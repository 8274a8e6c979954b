"""Function spaces on the tube ``T_Omega = V + i Omega``.

Holomorphic functions are vectorized callables on complex arrays of shape
``(..., n)``.  Norms are computed by nested quadrature: an inner rule over
``V = R^n`` for each outer node ``y`` of a rule over the cone.  Integrals
over ``V`` and ``Omega`` use the trace-form Lebesgue measure (see ``quad``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import jordan as J
from .jordan import ConeDescriptor, ConeDomainError
from .quad import (
    ConeRegion,
    IntegralEstimate,
    QuadratureSpec,
    Rule,
    SlabRegion,
    build_rule,
    integrate,
)

__all__ = [
    "TubePoint",
    "TubeFunction",
    "KernelFunction",
    "CallableFunction",
    "ProductFunction",
    "NormResult",
    "complex_determinant",
    "complex_power",
    "bergman_kernel",
    "weight",
    "default_specs",
    "mixed_norm",
    "kernel_mixed_norm",
    "lebesgue_norm",
    "hardy_mu_norm",
    "default_t_grid",
    "lemma41_condition",
    "lemma42_condition",
    "J_alpha",
    "J_alpha_constant",
    "weighted_cone_integral",
    "scale_sensitivity",
    "pointwise_bound_ratio",
    "box_symbol",
    "box_apply",
    "lattice_norm_rank1",
    "LatticeWindowError",
]

_BLOCK = 1 << 20  # complex evaluations per block in nested norms


# -- points and complex powers -----------------------------------------------


@dataclass(frozen=True)
class TubePoint:
    cone: ConeDescriptor
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = J._points(self.cone, np.asarray(self.x, float))
        y = J._points(self.cone, np.asarray(self.y, float))
        if x.shape != (self.cone.n,) or y.shape != (self.cone.n,):
            raise ValueError("TubePoint holds a single point")
        if not J.in_cone(self.cone, y):
            raise ConeDomainError(f"imaginary part {y.tolist()} is not in the open cone")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_complex(cls, cone: ConeDescriptor, z) -> TubePoint:
        z = J._points(cone, np.asarray(z, complex))
        return cls(cone, z.real, z.imag)

    @property
    def z(self) -> np.ndarray:
        return self.x + 1j * self.y

    def __str__(self) -> str:
        return ",".join(f"{c.real:g}{c.imag:+g}j" for c in self.z)


def _tube_array(cone: ConeDescriptor, z) -> np.ndarray:
    if isinstance(z, TubePoint):
        return z.z
    return J._points(cone, np.asarray(z, complex))


def complex_determinant(cone: ConeDescriptor, z) -> np.ndarray:
    return J.determinant(cone, J._points(cone, np.asarray(z, complex)))


def _principal_log(v: np.ndarray, label: str) -> np.ndarray:
    bad = (v.imag == 0) & (v.real <= 0)
    if np.any(bad):
        raise ConeDomainError(f"branch cut: factor {label} = {complex(v[bad].flat[0])} lies on (-inf, 0]")
    return np.log(v)


def complex_power(cone: ConeDescriptor, z, exponent, rotated: bool = False) -> np.ndarray:
    """``Delta_s(z)`` with the principal branch taken separately for each minor."""
    s = J.as_multiindex(cone, exponent)
    z = J._points(cone, np.asarray(z, complex))
    minor = J.rotated_minor if rotated else J.principal_minor
    log = np.zeros(z.shape[:-1], complex)
    for k in range(cone.r):
        expo = s[k] - (s[k + 1] if k + 1 < cone.r else 0.0)
        if expo != 0.0:
            log = log + expo * _principal_log(minor(cone, k + 1, z), f"Delta_{k + 1}")
    return np.exp(log)


def bergman_kernel(cone: ConeDescriptor, nu: float, z, w) -> np.ndarray:
    """``Delta^(-(nu + n/r))((z - conj(w)) / i)`` (normalizing constant set to 1)."""
    if not nu > cone.n_over_r - 1:
        raise ConeDomainError(f"Bergman kernel needs nu > n/r - 1 = {cone.n_over_r - 1:g}, got {nu:g}")
    z, w = _tube_array(cone, z), _tube_array(cone, w)
    return complex_power(cone, (z - np.conj(w)) / 1j, -(nu + cone.n_over_r))


def weight(cone: ConeDescriptor, nu, y) -> np.ndarray:
    """Density of ``Delta_nu(y) dy / Delta(y)^(n/r)``."""
    return J.power_function(cone, J.as_multiindex(cone, nu) - cone.n_over_r, y)


# -- functions on the tube -----------------------------------------------------


class TubeFunction:
    """A holomorphic (or merely measurable) function on the tube, vectorized over points."""

    cone: ConeDescriptor

    def __call__(self, z) -> np.ndarray:
        raise NotImplementedError

    def describe(self) -> str:
        return type(self).__name__

    def dilated(self, t: float) -> TubeFunction:
        """The function ``z -> F(z / t)``."""
        base = self
        return CallableFunction(self.cone, lambda z: base(np.asarray(z) / t), f"{self.describe()}(z/{t:g})")

    def scaled(self, c: complex) -> TubeFunction:
        base = self
        return CallableFunction(self.cone, lambda z: c * base(z), f"{c:g}*{self.describe()}")

    def __mul__(self, other: TubeFunction) -> TubeFunction:
        return ProductFunction(self.cone, (self, other))


@dataclass(frozen=True)
class KernelFunction(TubeFunction):
    """``coeff * Delta^(-mu)((z - conj(w)) / i)`` for a fixed tube point ``w``."""

    cone: ConeDescriptor
    w: np.ndarray
    mu: float
    coeff: complex = 1.0

    def __post_init__(self):
        w = J._points(self.cone, np.asarray(self.w, complex))
        if not J.in_cone(self.cone, w.imag):
            raise ConeDomainError("kernel base point must lie in the tube")
        object.__setattr__(self, "w", w)

    def __call__(self, z) -> np.ndarray:
        z = _tube_array(self.cone, z)
        return self.coeff * complex_power(self.cone, (z - np.conj(self.w)) / 1j, -self.mu)

    def describe(self) -> str:
        w = ",".join(f"{c.real:g}{c.imag:+g}j" for c in self.w)
        return f"kernel(w=[{w}],mu={self.mu:g},coeff={complex(self.coeff):g})"

    def dilated(self, t: float) -> KernelFunction:
        # Delta^(-mu)((z/t - conj w)/i) = t^(r mu) Delta^(-mu)((z - t conj w)/i)
        return KernelFunction(self.cone, self.w * t, self.mu, self.coeff * t ** (self.cone.r * self.mu))

    def scaled(self, c: complex) -> KernelFunction:
        return KernelFunction(self.cone, self.w, self.mu, self.coeff * c)


@dataclass(frozen=True)
class CallableFunction(TubeFunction):
    cone: ConeDescriptor
    fn: Callable[[np.ndarray], np.ndarray]
    label: str = "callable"

    def __call__(self, z) -> np.ndarray:
        return np.asarray(self.fn(_tube_array(self.cone, z)))

    def describe(self) -> str:
        return self.label


@dataclass(frozen=True)
class ProductFunction(TubeFunction):
    cone: ConeDescriptor
    factors: tuple

    def __call__(self, z) -> np.ndarray:
        out = 1.0
        for f in self.factors:
            out = out * f(z)
        return out

    def describe(self) -> str:
        return "*".join(f.describe() for f in self.factors)

    def dilated(self, t: float) -> ProductFunction:
        return ProductFunction(self.cone, tuple(f.dilated(t) for f in self.factors))


# -- norms ---------------------------------------------------------------------


@dataclass
class NormResult:
    value: float
    inner_estimates: list = field(default_factory=list)
    parameters: dict = field(default_factory=dict)
    error_estimate: float = 0.0
    finite: bool = True

    def __post_init__(self):
        if isinstance(self.value, complex) or np.isnan(self.value) or self.value < 0:
            raise ValueError(f"invalid norm value {self.value!r}")

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "finite": self.finite,
            "parameters": {k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in self.parameters.items()},
            "inner_estimates": [e.to_dict() for e in self.inner_estimates],
        }


def default_specs(cone: ConeDescriptor) -> tuple[QuadratureSpec, QuadratureSpec]:
    """(outer cone rule, inner R^n rule) used when none is given."""
    if cone.r == 1:
        return QuadratureSpec(nodes=97), QuadratureSpec(nodes=97)
    return QuadratureSpec(nodes=17), QuadratureSpec(nodes=17)


def _inner_integrals(cone, F, p, X, wi, cwi, Y, scale: float = 1.0):
    """Fine and coarse ``int |F(x + i y)|^p dx`` for each outer node y.

    The slab rule is mapped by ``x -> P((y/scale + e)^(1/2)) x`` (Jacobian
    ``Delta(y/scale + e)^(n/r)``), so its width follows y: the identity near
    the boundary, proportional to y far from it.  ``P`` preserves the cone, so
    the singular cell faces stay on cell faces.
    """
    nx = len(X)
    fine = np.empty(len(Y))
    coarse = np.empty(len(Y)) if cwi is not None else None
    rows = max(1, _BLOCK // max(nx, 1))
    e = J.identity(cone)
    for start in range(0, len(Y), rows):
        y = Y[start : start + rows]
        a = y / scale + e
        M = J.quadratic_representation(cone, J.sqrt(cone, a))
        jac = J.determinant(cone, a) ** cone.n_over_r
        z = np.einsum("rij,kj->rki", M, X) + 1j * y[:, None, :]
        vals = np.abs(np.asarray(F(z.reshape(-1, cone.n)))).reshape(len(y), nx) ** p
        bad = ~np.isfinite(vals)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise FloatingPointError(f"non-finite |F|^p at x={z[i, j].real.tolist()}, y={y[i].tolist()}")
        fine[start : start + len(y)] = (vals @ wi) * jac
        if coarse is not None:
            coarse[start : start + len(y)] = (vals @ cwi) * jac
    return fine, coarse


def _outer(rule: Rule, g_fine, g_inner_coarse):
    value, err = rule.combine(g_fine)
    if g_inner_coarse is not None:
        err += abs(value - rule.weights @ g_inner_coarse)
    return float(value), float(err)


def _nested(cone, F, p, outer_rule, inner_rule, outer_fn, translate=None):
    Y = outer_rule.points if translate is None else outer_rule.points + translate
    scale = inner_rule.spec.scale if inner_rule.spec is not None else 1.0
    fine, coarse = _inner_integrals(cone, F, p, inner_rule.points, inner_rule.weights, inner_rule.coarse_weights, Y, scale)
    g = outer_fn(outer_rule.points, fine)
    gc = outer_fn(outer_rule.points, coarse) if coarse is not None else None
    return _outer(outer_rule, g, gc)


def mixed_norm(
    F: TubeFunction,
    p: float,
    q: float,
    nu,
    spec: QuadratureSpec | None = None,
    inner_spec: QuadratureSpec | None = None,
    cone: ConeDescriptor | None = None,
) -> NormResult:
    """``(int_Omega (int_V |F(x+iy)|^p dx)^(q/p) Delta_nu(y) dy / Delta^(n/r)(y))^(1/q)``."""
    cone = cone or F.cone
    if not (p >= 1 and q >= 1):
        raise ValueError("mixed_norm needs p, q >= 1")
    nu = J.as_multiindex(cone, nu)
    so, si = default_specs(cone)
    outer_rule = build_rule(ConeRegion(cone), spec or so)
    inner_rule = build_rule(SlabRegion(cone), inner_spec or si)

    def outer_fn(Y, inner):
        return inner ** (q / p) * weight(cone, nu, Y)

    val, err = _nested(cone, F, p, outer_rule, inner_rule, outer_fn)
    est = IntegralEstimate(val, err, len(outer_rule) * len(inner_rule), err <= (spec or so).target_rel_tol * abs(val), spec or so)
    value = max(val, 0.0) ** (1.0 / q)
    rel = err / val if val > 0 else math.inf
    return NormResult(
        value,
        [est],
        {"p": p, "q": q, "nu": nu, "function": F.describe()},
        error_estimate=value * rel / q,
        finite=bool(np.isfinite(value)),
    )


def kernel_mixed_norm(F: KernelFunction, p: float, q: float, nu, spec: QuadratureSpec | None = None) -> NormResult:
    """Mixed norm of ``c Delta^{-mu}((z - conj w)/i)`` with the slice integrals in closed form.

    ``int_V |F(x+iy)|^p dx = |c|^p C_{mu p} Delta^{n/r - mu p}(y + Im w)``; the
    remaining cone integral is a weighted cone integral.
    """
    cone = F.cone
    a = F.mu * p
    if not lemma41_condition(cone, a):
        return NormResult(math.inf, [], {"p": p, "q": q, "nu": nu, "function": F.describe()}, finite=False)
    nu = J.as_multiindex(cone, nu)
    b = F.w.imag
    beta = (cone.n_over_r - a) * q / p
    if not lemma42_condition(cone, nu, beta):
        # the outer cone integral diverges at infinity; quadrature would return a truncation artefact
        return NormResult(math.inf, [], {"p": p, "q": q, "nu": nu, "function": F.describe()}, finite=False)
    est = weighted_cone_integral(cone, beta, nu, b, spec)
    lead = abs(complex(F.coeff)) ** q * J_alpha_constant(cone, a) ** (q / p)
    val = lead * est.value
    value = val ** (1.0 / q)
    return NormResult(
        value, [est], {"p": p, "q": q, "nu": nu, "function": F.describe()}, error_estimate=value * est.relative_error / q
    )


def lebesgue_norm(F: TubeFunction, p: float, nu, spec=None, inner_spec=None, cone=None) -> NormResult:
    """``L^p_nu`` norm, i.e. the mixed norm with ``q = p``."""
    return mixed_norm(F, p, p, nu, spec, inner_spec, cone)


def default_t_grid(cone: ConeDescriptor) -> np.ndarray:
    """Boundary limit ``t = 0`` followed by ``2^k e`` for ``k = -10..3``."""
    e = J.identity(cone)
    return np.vstack([np.zeros(cone.n)] + [2.0**k * e for k in range(-10, 4)])


def hardy_mu_norm(
    F: TubeFunction,
    p: float,
    s,
    spec: QuadratureSpec | None = None,
    t_grid=None,
    inner_spec: QuadratureSpec | None = None,
    cone: ConeDescriptor | None = None,
) -> NormResult:
    """``(sup_t int int |F(x + i(y + t))|^p dx dmu_s(y))^(1/p)`` over ``t_grid``.

    ``t = 0`` in the grid stands for the boundary limit and is evaluated
    directly, which needs F to extend continuously to the boundary.
    """
    from .paleywiener import MeasureSpec

    cone = cone or F.cone
    ms = MeasureSpec.from_s(cone, s)
    t_grid = default_t_grid(cone) if t_grid is None else np.atleast_2d(np.asarray(t_grid, float))
    so, si = default_specs(cone)
    inner_rule = build_rule(SlabRegion(cone), inner_spec or si)
    values, errors = [], []
    if ms.kind == "delta0":
        for t in t_grid:
            fine, coarse = _inner_integrals(
                cone, F, p, inner_rule.points, inner_rule.weights, inner_rule.coarse_weights, t[None, :]
            )
            values.append(float(fine[0]))
            errors.append(float(abs(fine[0] - coarse[0])) if coarse is not None else 0.0)
    else:
        outer_rule = build_rule(ConeRegion(cone), spec or so)
        dens = ms.density(outer_rule.points)
        for t in t_grid:
            val, err = _nested(cone, F, p, outer_rule, inner_rule, lambda Y, inner: inner * dens, translate=t)
            values.append(val)
            errors.append(err)
    k = int(np.argmax(values))
    best = values[k]
    value = max(best, 0.0) ** (1.0 / p)
    est = IntegralEstimate(best, errors[k], len(inner_rule), True, spec or so)
    return NormResult(
        value,
        [est],
        {"p": p, "s": ms.s, "kind": ms.kind, "argmax_t": t_grid[k], "profile": values, "function": F.describe()},
        error_estimate=value * (errors[k] / best if best > 0 else math.inf) / p,
    )


# -- Lemma 4 integrals -----------------------------------------------------------


def lemma41_condition(cone: ConeDescriptor, alpha) -> bool:
    """``alpha > g0* + n/r`` componentwise."""
    alpha = J.as_multiindex(cone, alpha)
    return bool(np.all(alpha > J.multiindex_star(cone.g0) + cone.n_over_r))


def lemma42_condition(cone: ConeDescriptor, s, beta, reading: str = "corrected") -> bool:
    """Integrability of ``Delta_beta(y + t) Delta_s(y)`` against ``dy / Delta^(n/r)``.

    ``reading="printed"`` uses ``s + beta < g0*``; the default uses
    ``s + beta < -g0*``, the condition the integral actually needs.
    """
    s, beta = J.as_multiindex(cone, s), J.as_multiindex(cone, beta)
    bound = J.multiindex_star(cone.g0)
    if reading == "corrected":
        bound = -bound
    elif reading != "printed":
        raise ValueError(f"unknown reading {reading!r}")
    return bool(np.all(s > cone.g0) and np.all(s + beta < bound))


def J_alpha(cone: ConeDescriptor, alpha, y, spec: QuadratureSpec | None = None) -> IntegralEstimate:
    """``int_{R^n} |Delta_{-alpha}((x + iy)/i)| dx``."""
    alpha = J.as_multiindex(cone, alpha)
    if not lemma41_condition(cone, alpha):
        raise ConeDomainError(
            f"J_alpha diverges: alpha = {alpha.tolist()} must exceed g0* + n/r = "
            f"{(J.multiindex_star(cone.g0) + cone.n_over_r).tolist()}"
        )
    y = J._points(cone, np.asarray(y, float))
    if not J.in_cone(cone, y):
        raise ConeDomainError("J_alpha requires y in the open cone")

    def f(x):
        return np.abs(complex_power(cone, y[None, :] - 1j * x, -alpha))

    return integrate(SlabRegion(cone), f, spec or QuadratureSpec(nodes=97 if cone.r == 1 else 33))


def J_alpha_constant(cone: ConeDescriptor, alpha: float) -> float:
    """``C_alpha`` for scalar alpha, from Plancherel applied to ``Delta^{-alpha/2}``.

    ``C_alpha = (2 pi)^n Gamma_Omega(alpha - n/r) 2^{-r(alpha - n/r)} / Gamma_Omega(alpha/2)^2``.
    """
    from .conefunc import log_gamma_closed

    a = float(alpha) - cone.n_over_r
    lg = cone.n * math.log(2 * math.pi) + log_gamma_closed(cone, a) - cone.r * a * math.log(2) - 2 * log_gamma_closed(cone, alpha / 2)
    return math.exp(lg)


def weighted_cone_integral(cone: ConeDescriptor, beta, s, t, spec: QuadratureSpec | None = None) -> IntegralEstimate:
    """``int_Omega Delta_beta(y + t) Delta_s(y) dy / Delta^(n/r)(y)``.

    Only ``s > g0`` is enforced; divergence at infinity shows up as
    sensitivity to the truncation scale (see ``scale_sensitivity``).
    """
    beta, s = J.as_multiindex(cone, beta), J.as_multiindex(cone, s)
    if not np.all(s > cone.g0):
        raise ConeDomainError(f"weighted_cone_integral needs s > g0 = {cone.g0.tolist()}, got {s.tolist()}")
    t = J._points(cone, np.asarray(t, float))
    if not J.in_cone(cone, t):
        raise ConeDomainError("weighted_cone_integral requires t in the open cone")

    def f(y):
        return J.power_function(cone, beta, y + t) * J.power_function(cone, s - cone.n_over_r, y)

    return integrate(ConeRegion(cone), f, spec or QuadratureSpec(nodes=97 if cone.r == 1 else 49))


def scale_sensitivity(compute: Callable[[QuadratureSpec], IntegralEstimate], spec: QuadratureSpec, factor: float = 16.0) -> float:
    """Relative change of an integral when the truncation scale is multiplied by ``factor``.

    Convergent integrals are insensitive (up to quadrature error); divergent
    ones are dominated by the truncation and move.
    """
    from dataclasses import replace

    a = compute(spec).value
    b = compute(replace(spec, scale=spec.scale * factor)).value
    return abs(b - a) / max(abs(a), 1e-300)


# -- pointwise estimates -----------------------------------------------------------


def pointwise_bound_ratio(
    F: TubeFunction, p: float, q: float, nu, z_grid, spec=None, inner_spec=None, norm: NormResult | None = None
) -> float:
    """``max_z |F(z)| Delta_{nu/q + n/(rp)}(Im z) / ||F||_{A^{p,q}_nu}``."""
    cone = F.cone
    nu = J.as_multiindex(cone, nu)
    norm = norm or mixed_norm(F, p, q, nu, spec, inner_spec)
    z = J._points(cone, np.asarray(z_grid, complex))
    vals = np.abs(F(z)) * J.power_function(cone, nu / q + cone.n_over_r / p, z.imag)
    return float(np.max(vals) / norm.value)


# -- the box operator ---------------------------------------------------------------


def box_symbol(cone: ConeDescriptor, xi) -> np.ndarray:
    return J.determinant(cone, xi)


def box_apply(cone: ConeDescriptor, F: Callable, z, h) -> np.ndarray:
    """``Delta((1/i) d/dx) F`` at z by central differences (O(h^2)).

    With the trace-form pairing, ``(x | xi) = 2 <x, xi>`` on Lorentz cones,
    the operator is ``(-d0^2 + d1^2 + ... + d_(n-1)^2) / 4``.  ``h`` may be
    a scalar or one step per point.
    """
    h = np.asarray(h, float)
    if not np.all(h > 0):
        raise ValueError("step h must be positive")
    z = J._points(cone, np.asarray(z, complex))
    if not np.all(J.in_cone(cone, z.imag)):
        raise ConeDomainError("box_apply: stencil centre outside the tube")
    hv = h[..., None] if h.ndim else h
    if cone.r == 1:
        return -1j * (F(z + hv) - F(z - hv)) / (2 * h)
    f0 = F(z)
    out = 0.0
    for k in range(cone.n):
        step = np.zeros(cone.n)
        step[k] = 1.0
        second = (F(z + hv * step) - 2 * f0 + F(z - hv * step)) / h**2
        out = out + (-0.25 if k == 0 else 0.25) * second
    return out


# -- rank-one sampling lattice --------------------------------------------------------


class LatticeWindowError(RuntimeError):
    pass


def _lattice_sum(F, p, q, nu, delta, k_range, x_max, j_max):
    total = 0.0
    for k in range(k_range[0], k_range[1] + 1):
        y = 2.0**k
        step = delta * y
        jm = min(int(math.ceil(x_max * max(1.0, y) / step)), j_max)
        j = np.arange(-jm, jm + 1)
        vals = np.abs(F((j * step + 1j * y)[:, None])) ** p
        total += vals.sum() ** (q / p) * y ** (nu + q / p)
    return total


def lattice_norm_rank1(
    F: TubeFunction,
    p: float,
    q: float,
    nu: float,
    delta: float,
    k_range: tuple[int, int] = (-20, 20),
    x_max: float = 2.0**10,
    j_max: int = 1 << 18,
    tol: float = 1e-3,
) -> NormResult:
    """Discrete norm on ``z_jk = j delta 2^k + i 2^k``.

    The value is ``(sum_k (sum_j |F(z_jk)|^p)^(q/p) y_k^(nu + q/p))^(1/q)``.
    The window is accepted when dropping two dyadic levels at each end and
    halving ``x_max`` changes the sum by less than ``tol`` relative.
    """
    if F.cone.r != 1:
        raise NotImplementedError("the sampling lattice is implemented for the half-line only")
    full = _lattice_sum(F, p, q, nu, delta, k_range, x_max, j_max)
    half = _lattice_sum(F, p, q, nu, delta, (k_range[0] + 2, k_range[1] - 2), x_max / 2, j_max)
    tail = abs(full - half) / full if full > 0 else 0.0
    if tail > tol:
        raise LatticeWindowError(f"lattice window too small: tail estimate {tail:.2e} > {tol:g}")
    value = full ** (1.0 / q)
    return NormResult(value, [], {"p": p, "q": q, "nu": nu, "delta": delta, "tail": tail}, error_estimate=value * tail / q)

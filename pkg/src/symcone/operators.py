"""Bergman projection, the multifunctional operators T_beta and S_beta, and the
norm-ratio experiments built on them.

Every tube integral here uses one fixed rule on ``T_Omega``: a tensor
double-exponential rule in rank 1 and Monte Carlo otherwise.  Operator values
at many points are then matrix products against the rule, so a full
``(z_1, z_2)`` grid of ``T_beta`` costs one matrix multiply.

Unknown constants (``d_nu``, ``C_beta``, ``C_{m,beta}``) are never fixed;
identities are checked by ratio constancy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from . import jordan as J
from .jordan import ConeDescriptor, ConeDomainError
from .quad import QuadratureSpec, TubeRegion, build_rule
from .results import ExperimentResult, drift, fit_slope
from .spaces import (
    CallableFunction,
    KernelFunction,
    ProductFunction,
    TubeFunction,
    _tube_array,
    box_apply,
    complex_power,
    kernel_mixed_norm,
    lebesgue_norm,
)

__all__ = [
    "OperatorParams",
    "c3_feasible",
    "admissible_exists",
    "ParamSetMembership",
    "kernel_in_mixed",
    "param_membership",
    "in_tau",
    "in_sigma",
    "beta_large_enough",
    "TubeNodes",
    "default_operator_spec",
    "tube_nodes",
    "OperatorValues",
    "bergman_project",
    "projected",
    "t_beta_apply",
    "s_beta_apply",
    "t_beta_grid",
    "s_beta_grid",
    "balanced_function",
    "box_coefficient",
    "box_function",
    "SUITES",
    "norm_ratio_experiment",
    "FORMULAS",
    "reproducing_ratio_check",
]

DEFAULT_SCALES = tuple(2.0**k for k in range(-2, 3))
ALL = "all"


# -- parameter predicates -------------------------------------------------------------


def _ratio_with_zero_denominator(num: float, den: float) -> float:
    # 0 denominator: +inf for a positive numerator, -inf otherwise
    if den == 0:
        return math.inf if num > 0 else -math.inf
    return num / den


@dataclass(frozen=True)
class OperatorParams:
    """Parameters ``(m, beta, nu, p)`` of ``T_beta``; conditions are queried, not enforced."""

    cone: ConeDescriptor
    m: int
    beta: tuple
    nu: tuple
    p: float = 1.0

    def __post_init__(self):
        beta = tuple(float(b) for b in np.atleast_1d(self.beta))
        nu = tuple(float(v) for v in np.atleast_1d(self.nu))
        if self.m < 1:
            raise ValueError("m must be at least 1")
        if len(beta) == 1 and self.m > 1:
            beta = beta * self.m
        if len(nu) == 1 and self.m > 1:
            nu = nu * self.m
        if len(beta) != self.m or len(nu) != self.m:
            raise ValueError(f"beta and nu need length m = {self.m}, got {len(beta)} and {len(nu)}")
        if not self.p >= 1:
            raise ValueError("p must be >= 1")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "nu", nu)

    @property
    def beta_mean(self) -> float:
        return float(np.mean(self.beta))

    def kernel_exponents(self) -> np.ndarray:
        """``(n/r + beta_j) / m``."""
        return (self.cone.n_over_r + np.array(self.beta)) / self.m

    def c1(self) -> bool:
        return self.beta_mean > self.cone.n_over_r - 1

    def c2(self) -> bool:
        ratio = _ratio_with_zero_denominator(min(self.nu), self.cone.n_over_r - 1)
        return 1 <= self.p < 1 + self.m * (ratio - 1)

    def c3_margin(self) -> float:
        nr = self.cone.n_over_r
        rhs = self.beta_mean - nr / self.p + self.m / self.p * (2 * nr - 1 + max(self.nu))
        return min(self.beta) - rhs

    def c3(self) -> bool:
        return self.c3_margin() > 0

    def admissible(self) -> bool:
        return self.c1() and self.c2() and self.c3()

    def conditions(self) -> dict:
        return {"c1": self.c1(), "c2": self.c2(), "c3": self.c3(), "c3_margin": self.c3_margin()}

    def to_dict(self) -> dict:
        return {"cone": self.cone.spec_string(), "m": self.m, "beta": list(self.beta), "nu": list(self.nu), "p": self.p}


def c3_feasible(cone: ConeDescriptor, m: int, p: float, nu) -> bool:
    """Whether some beta satisfies the third condition.

    ``min beta - mean beta <= 0`` with equality for constant beta, so the
    condition is satisfiable iff ``n/(rp) > (m/p)(2n/r - 1 + max nu)``.
    """
    nr = cone.n_over_r
    return nr / p > m / p * (2 * nr - 1 + float(np.max(nu)))


def admissible_exists(cone: ConeDescriptor, m: int, p: float, nu) -> bool:
    """Some beta makes (m, beta, nu, p) admissible (the first condition holds for large constant beta)."""
    probe = OperatorParams(cone, m, (0.0,) * m, tuple(np.broadcast_to(nu, (m,))), p)
    return probe.c2() and c3_feasible(cone, m, p, probe.nu)


@dataclass(frozen=True)
class ParamSetMembership:
    in_tau: bool
    in_sigma: bool


def _dual(p: float) -> float:
    return math.inf if p == 1 else p / (p - 1)


def kernel_in_mixed(cone: ConeDescriptor, a: float, p: float, q: float, nu: float) -> bool:
    """Whether ``Delta^{-a}((z + ie)/i)`` lies in ``L^{p', q'}_nu`` (scalar a, nu).

    Inner slice integrals converge iff ``a p' > 2n/r - 1`` and equal
    ``C Delta^{n/r - a p'}(y + e)``; the outer integral then follows the
    weighted cone-integral criterion ``s > g0``, ``s + beta < -g0*``.
    """
    nr = cone.n_over_r
    if not nu > nr - 1:
        return False
    pd, qd = _dual(p), _dual(q)
    if math.isinf(pd):
        if not a > 0:
            return False
        inner = -a
    else:
        if not a * pd > 2 * nr - 1:
            return False
        inner = (nr - a * pd) / pd
    if math.isinf(qd):
        return inner <= 0
    return nu + inner * qd < -(nr - 1)


def param_membership(cone: ConeDescriptor, p: float, q: float, nu: float) -> ParamSetMembership:
    """tau: ``B_nu(., ie)`` in ``L^{p',q'}_nu``; sigma: the same with q = p."""
    a = nu + cone.n_over_r
    return ParamSetMembership(kernel_in_mixed(cone, a, p, q, nu), kernel_in_mixed(cone, a, p, p, nu))


def in_tau(cone: ConeDescriptor, p: float, q: float, nu: float) -> bool:
    return param_membership(cone, p, q, nu).in_tau


def in_sigma(cone: ConeDescriptor, nu: float, p: float) -> bool:
    return param_membership(cone, p, p, nu).in_sigma


def beta_large_enough(cone: ConeDescriptor, beta: float, p: float, q: float, nu: float, margin: float = 1.0) -> bool:
    """``B_{beta - margin}(., ie)`` in ``L^{p',q'}_nu``, so beta clears the threshold by the margin."""
    return kernel_in_mixed(cone, beta - margin + cone.n_over_r, p, q, nu)


# -- the tube rule ----------------------------------------------------------------------


@dataclass(frozen=True)
class TubeNodes:
    """Nodes ``z = x + iy`` with weights for ``dV``; coarse weights or MC cell labels for errors."""

    z: np.ndarray
    weights: np.ndarray
    coarse_weights: np.ndarray | None
    cell_index: np.ndarray | None
    spec: QuadratureSpec

    def __len__(self) -> int:
        return len(self.weights)

    def errors(self, values: np.ndarray) -> np.ndarray:
        """Per-row error estimates for ``values @ weights`` (values shaped (rows, N))."""
        if self.coarse_weights is not None:
            return np.abs(values @ self.weights - values @ self.coarse_weights)
        var = np.zeros(values.shape[0])
        for c in np.unique(self.cell_index):
            sel = self.cell_index == c
            terms = values[:, sel] * self.weights[sel]
            var += np.var(terms, axis=1) * sel.sum()
        return np.sqrt(var)


def default_operator_spec(cone: ConeDescriptor, purpose: str = "point") -> QuadratureSpec:
    """Tube rule defaults.

    ``point`` (operator values at given points): 97 double-exponential nodes
    per axis in rank 1, 20000 Monte Carlo samples otherwise.  ``grid``
    (operator values on the node grid itself, an N x N matrix): 41 nodes per
    axis in rank 1, 1500 samples otherwise.
    """
    if purpose not in ("point", "grid"):
        raise ValueError(f"unknown purpose {purpose!r}")
    if cone.r == 1:
        return QuadratureSpec(nodes=97 if purpose == "point" else 41)
    return QuadratureSpec(scheme="monte_carlo", samples=20000 if purpose == "point" else 1500, seed=42)


@lru_cache(maxsize=16)
def _cached_nodes(cone: ConeDescriptor, spec_text: str, y_max: float | None) -> TubeNodes:
    spec = QuadratureSpec.from_text(spec_text)
    rule = build_rule(TubeRegion(cone, y_max), spec)
    n = cone.n
    z = rule.points[:, :n] + 1j * rule.points[:, n:]
    return TubeNodes(z, rule.weights, rule.coarse_weights, rule.cell_index, spec)


def tube_nodes(
    cone: ConeDescriptor, spec: QuadratureSpec | None = None, purpose: str = "point", y_max: float | None = None
) -> TubeNodes:
    """Nodes of the tube rule, cached; ``y_max`` truncates the imaginary part (see ``TubeRegion``)."""
    return _cached_nodes(cone, (spec or default_operator_spec(cone, purpose)).to_text(), y_max)


@dataclass(frozen=True)
class OperatorValues:
    values: np.ndarray
    errors: np.ndarray
    evaluations: int

    def to_dict(self) -> dict:
        return {
            "values": [[v.real, v.imag] for v in np.ravel(self.values)],
            "errors": np.ravel(self.errors).tolist(),
            "evaluations": self.evaluations,
        }


_ROWS = 256


def _kernel_rows(cone, z, nodes: TubeNodes, exponent: float) -> np.ndarray:
    """``Delta^{-exponent}((z_a - conj w_b)/i)`` for all a, b."""
    d = (z[:, None, :] - np.conj(nodes.z)[None, :, :]) / 1j
    return complex_power(cone, d.reshape(-1, cone.n), -exponent).reshape(len(z), len(nodes))


def _weight(cone, index, y) -> np.ndarray:
    return J.power_function(cone, float(index), y)


def _apply(cone, z, nodes: TubeNodes, exponent: float, g: np.ndarray) -> OperatorValues:
    """``sum_b w_b g_b Delta^{-exponent}((z_a - conj w_b)/i)`` with per-row error estimates."""
    vals, errs = np.empty(len(z), complex), np.empty(len(z))
    for start in range(0, len(z), _ROWS):
        K = _kernel_rows(cone, z[start : start + _ROWS], nodes, exponent) * g[None, :]
        vals[start : start + _ROWS] = K @ nodes.weights
        errs[start : start + _ROWS] = nodes.errors(K)
    return OperatorValues(vals, errs, len(z) * len(nodes))


def _points(cone, z) -> np.ndarray:
    z = np.atleast_2d(_tube_array(cone, z))
    if not np.all(J.in_cone(cone, z.imag)):
        raise ConeDomainError("evaluation points must lie in the tube")
    return z


# -- operators ---------------------------------------------------------------------------


def bergman_project(cone: ConeDescriptor, nu: float, f: TubeFunction, z, spec: QuadratureSpec | None = None) -> OperatorValues:
    """``P_nu f(z) = int B_nu(z, w) f(w) dV_nu(w)`` with kernel constant 1."""
    if not nu > cone.n_over_r - 1:
        raise ConeDomainError(f"Bergman projection needs nu > n/r - 1 = {cone.n_over_r - 1:g}, got {nu:g}")
    nodes = tube_nodes(cone, spec)
    g = np.asarray(f(nodes.z)) * _weight(cone, nu - cone.n_over_r, nodes.z.imag)
    return _apply(cone, _points(cone, z), nodes, nu + cone.n_over_r, g)


def projected(cone: ConeDescriptor, nu: float, f: TubeFunction, spec: QuadratureSpec | None = None) -> CallableFunction:
    """``P_nu f`` as a tube function evaluated by quadrature."""
    return CallableFunction(cone, lambda z: bergman_project(cone, nu, f, z, spec).values, f"P_{nu:g}[{f.describe()}]")


def _check_functions(params: OperatorParams, f) -> list:
    f = list(f)
    if len(f) != params.m:
        raise ValueError(f"expected {params.m} functions, got {len(f)}")
    return f


def _density(params: OperatorParams, nodes: TubeNodes, factors) -> np.ndarray:
    cone = params.cone
    g = _weight(cone, params.beta_mean - cone.n_over_r, nodes.z.imag).astype(complex)
    for fac in factors:
        g = g * fac
    return g


def _aligned(params: OperatorParams, zs, nodes: TubeNodes, g: np.ndarray, exponents) -> OperatorValues:
    cone = params.cone
    pts = [_points(cone, z) for z in zs]
    if len(pts) != params.m or len({len(p) for p in pts}) != 1:
        raise ValueError("need m point arrays of equal length")
    k = len(pts[0])
    vals, errs = np.empty(k, complex), np.empty(k)
    for start in range(0, k, _ROWS):
        M = np.broadcast_to(g, (min(_ROWS, k - start), len(nodes))).copy()
        for zj, e in zip(pts, exponents):
            M *= _kernel_rows(cone, zj[start : start + _ROWS], nodes, e)
        vals[start : start + _ROWS] = M @ nodes.weights
        errs[start : start + _ROWS] = nodes.errors(M)
    return OperatorValues(vals, errs, k * len(nodes))


def t_beta_apply(params: OperatorParams, f, zs, spec: QuadratureSpec | None = None, exponents=None) -> OperatorValues:
    """``T_beta(f_1..f_m)(z_1..z_m)`` at aligned point tuples ``(zs[0][i], ..., zs[m-1][i])``.

    ``exponents`` overrides the kernel exponents ``(n/r + beta_j)/m``.
    """
    f = _check_functions(params, f)
    nodes = tube_nodes(params.cone, spec)
    g = _density(params, nodes, [np.asarray(fj(nodes.z)) for fj in f])
    exps = params.kernel_exponents() if exponents is None else exponents
    return _aligned(params, zs, nodes, g, exps)


def _s_factors(params: OperatorParams, f, k: int, nodes: TubeNodes, spec) -> list:
    out = []
    for j, fj in enumerate(f):
        if j == k:
            out.append(np.asarray(fj(nodes.z)))
        else:
            out.append(bergman_project(params.cone, params.nu[j], fj, nodes.z, spec).values)
    return out


def _k_list(params: OperatorParams, k) -> list:
    if isinstance(k, str):
        if k != ALL:
            raise ValueError(f"k must be an index or {ALL!r}")
        return list(range(params.m))
    if not 0 <= k < params.m:
        raise ValueError(f"k must lie in 0..{params.m - 1}")
    return [k]


def s_beta_apply(params: OperatorParams, k, f, zs, spec: QuadratureSpec | None = None, exponents=None) -> OperatorValues:
    """``S_{beta,k}`` (0-based k) or ``S_beta = sum_k S_{beta,k}`` for ``k = "all"``."""
    f = _check_functions(params, f)
    nodes = tube_nodes(params.cone, spec)
    exps = params.kernel_exponents() if exponents is None else exponents
    total = None
    for kk in _k_list(params, k):
        g = _density(params, nodes, _s_factors(params, f, kk, nodes, spec))
        part = _aligned(params, zs, nodes, g, exps)
        total = part if total is None else OperatorValues(total.values + part.values, total.errors + part.errors, total.evaluations + part.evaluations)
    return total


def _grid(params: OperatorParams, nodes: TubeNodes, g: np.ndarray) -> np.ndarray:
    """Operator values on the full node grid (vector for m = 1, matrix for m = 2)."""
    cone = params.cone
    exps = params.kernel_exponents()
    A = [_kernel_rows(cone, nodes.z, nodes, e) for e in exps]
    wg = nodes.weights * g
    if params.m == 1:
        return A[0] @ wg
    if params.m == 2:
        return (A[0] * wg[None, :]) @ A[1].T
    raise NotImplementedError("grid evaluation supports m <= 2")


def t_beta_grid(params: OperatorParams, f, spec: QuadratureSpec | None = None, y_max: float | None = None) -> tuple[TubeNodes, np.ndarray]:
    """T_beta on the full grid of the (optionally truncated) grid rule."""
    f = _check_functions(params, f)
    nodes = tube_nodes(params.cone, spec, "grid", y_max)
    return nodes, _grid(params, nodes, _density(params, nodes, [np.asarray(fj(nodes.z)) for fj in f]))


def s_beta_grid(
    params: OperatorParams,
    k,
    f,
    spec: QuadratureSpec | None = None,
    proj_spec: QuadratureSpec | None = None,
    y_max: float | None = None,
) -> tuple[TubeNodes, np.ndarray]:
    """S_beta on the grid rule; the projections ``P_{nu_j} f_j`` at its nodes use ``proj_spec``."""
    f = _check_functions(params, f)
    nodes = tube_nodes(params.cone, spec, "grid", y_max)
    total = 0
    for kk in _k_list(params, k):
        total = total + _grid(params, nodes, _density(params, nodes, _s_factors(params, f, kk, nodes, proj_spec)))
    return nodes, total


# -- test functions ------------------------------------------------------------------------


def balanced_function(cone: ConeDescriptor, exponent: float, base=None) -> KernelFunction:
    """``Delta^{-exponent}((z + i b)/i)``; b = e by default.

    With exponents ``(n/r + beta_j)/m`` the product of the m functions is the
    weighted Bergman kernel at ``ib``, which makes the reproducing-formula
    integrals exact pairings.
    """
    b = J.identity(cone) if base is None else np.asarray(base, float)
    return KernelFunction(cone, 1j * b, float(exponent))


def box_coefficient(cone: ConeDescriptor, mu: float) -> float:
    """``c`` in ``Box Delta^{-mu}((z - conj w)/i) = c Delta^{-mu-1}((z - conj w)/i)``.

    Bernstein identity ``Delta(d) Delta^s = prod_j (s + (j-1)d/2) Delta^{s-1}``
    with ``Box = Delta(d/i)`` and the chain rule through ``u = (z - conj w)/i``.
    """
    s = -mu
    b = np.prod([s + j * cone.d / 2 for j in range(cone.r)])
    return float((-1) ** cone.r * b)


def box_function(F: TubeFunction, h: float = 1e-3) -> TubeFunction:
    """``Box F``: exact for kernel functions, central differences otherwise."""
    cone = F.cone
    if isinstance(F, KernelFunction):
        return KernelFunction(cone, F.w, F.mu + 1, F.coeff * box_coefficient(cone, F.mu))
    return CallableFunction(cone, lambda z: box_apply(cone, F, z, h), f"box[{F.describe()}]")


def _box_product(fs: list) -> TubeFunction:
    cone = fs[0].cone

    def fn(z):
        vals = [np.asarray(f(z)) for f in fs]
        out = 0
        for j, f in enumerate(fs):
            term = np.asarray(box_function(f)(z))
            for k, v in enumerate(vals):
                if k != j:
                    term = term * v
            out = out + term
        return out

    return CallableFunction(cone, fn, "box(" + "*".join(f.describe() for f in fs) + ")")


# -- norm-ratio experiments ------------------------------------------------------------------

SUITES = ("thm1", "thm7", "lemma7", "prop1", "prop2", "boxes")


def _pairs_integral(params: OperatorParams, nodes: TubeNodes, grid: np.ndarray) -> float:
    """``int ... int |G(z_1..z_m)|^p prod Delta^{nu_k - n/r}(Im z_k) dV`` on the node grid."""
    cone = params.cone
    w = [nodes.weights * _weight(cone, v - cone.n_over_r, nodes.z.imag) for v in params.nu]
    a = np.abs(grid) ** params.p
    if params.m == 1:
        return float(w[0] @ a)
    return float(w[0] @ a @ w[1])


def _norm_p(f, p, nu, norm_specs):
    # kernel functions have closed-form slice integrals; everything else is nested quadrature
    if isinstance(f, KernelFunction):
        return kernel_mixed_norm(f, p, p, nu).value
    return lebesgue_norm(f, p, nu, *norm_specs).value


def _sides(suite, params: OperatorParams, fs: list, spec, norm_specs, opts, proj_spec=None) -> tuple[float, float]:
    cone, p, nr, m = params.cone, params.p, params.cone.n_over_r, params.m
    if suite == "thm1":
        nodes, grid = t_beta_grid(params, fs, spec, opts.get("y_max"))
        lhs = _pairs_integral(params, nodes, grid)
        if opts.get("reading", "mp") == "mp":
            rhs = math.prod(_norm_p(f, m * p, m * v + (m - 1) * nr, norm_specs) ** p for f, v in zip(fs, params.nu))
        else:
            rhs = math.prod(_norm_p(f, p, m * v + (m - 1) * nr, norm_specs) ** p for f, v in zip(fs, params.nu))
        return lhs, rhs
    if suite == "thm7":
        nodes, grid = s_beta_grid(params, ALL, fs, spec, proj_spec, opts.get("y_max"))
        lhs = _pairs_integral(params, nodes, grid)
        return lhs, math.prod(_norm_p(f, p, v, norm_specs) ** p for f, v in zip(fs, params.nu))
    if suite == "lemma7":
        w = (m - 1) * nr + sum(params.nu)
        lhs = _norm_p(ProductFunction(cone, tuple(fs)), p, w, norm_specs) ** p
        return lhs, math.prod(_norm_p(f, p, v, norm_specs) ** p for f, v in zip(fs, params.nu))
    if suite == "prop1":
        k = int(opts.get("k", 2))
        nu = params.nu[0]
        Pf = projected(cone, nu, fs[0], proj_spec)
        lhs = _norm_p(Pf, k * p, k * nu + (k - 1) * nr, norm_specs)
        return lhs, _norm_p(fs[0], p, nu, norm_specs)
    if suite == "prop2":
        lp = int(opts.get("l", 1)) * p
        Pfs = [projected(cone, v, f, proj_spec) for f, v in zip(fs, params.nu)]
        w = sum(lp / p * (v + nr) for v in params.nu) - nr
        lhs = _norm_p(ProductFunction(cone, tuple(Pfs)), lp, w, norm_specs) ** lp
        return lhs, math.prod(_norm_p(f, p, v, norm_specs) ** lp for f, v in zip(fs, params.nu))
    if suite == "boxes":
        q = float(opts.get("q", 1.0))
        if not 1 <= q <= p:
            raise ValueError("boxes suite needs 1 <= q <= p")
        nu = params.nu[0]
        bx = _box_product(fs)

        def h(z):
            out = np.abs(bx(z))
            for f in fs:
                out = out * np.abs(f(z)) ** ((p - q) / q)
            return out

        w = m * (nu + nr) + q - nr
        lhs = _norm_p(CallableFunction(cone, h, "boxes-integrand"), q, w, norm_specs) ** q
        return lhs, m**q * math.prod(_norm_p(f, p, nu, norm_specs) ** p for f in fs)
    raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")


def _monotone(values) -> bool:
    d = np.diff(values)
    return bool(np.all(d > 0) or np.all(d < 0))


def norm_ratio_experiment(
    suite: str,
    params: OperatorParams,
    function_sample: list,
    spec: QuadratureSpec | None = None,
    norm_specs: tuple = (None, None),
    scales=DEFAULT_SCALES,
    drift_tol: float = 0.1,
    proj_spec: QuadratureSpec | None = None,
    **opts,
) -> ExperimentResult:
    """Ratio LHS/RHS of the suite's inequality for each sample tuple over a dilation sweep.

    Every suite is dilation covariant with exponent 0, so a bounded, flat
    ratio is the signature of boundedness on the sample and a monotone drift
    the signature of divergence.  ``spec`` is the fixed grid rule for the
    multi-point integrals and ``norm_specs`` the fixed rules of the norms.
    Projections ``P_nu f`` use ``proj_spec`` with its scale multiplied by the
    dilation, so the rule follows the width of the dilated kernels.

    For thm1 and thm7 the multi-point integral runs over the tube cut at
    ``y_max`` (option, default 1024): a convergent integral does not notice
    the cut, a divergent one grows as the dilation shrinks.
    """
    if suite in ("thm1", "thm7"):
        opts.setdefault("y_max", 1024.0)
    base_proj = proj_spec or default_operator_spec(params.cone)
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    if not function_sample:
        raise ValueError("function_sample must not be empty")
    conds = params.conditions()
    res = ExperimentResult(suite, {**params.to_dict(), **conds, "scales": list(scales), **opts})
    maxima, drifts, monotone, finite = [], [], [], True
    for idx, fs in enumerate(function_sample):
        fs = [fs] if isinstance(fs, TubeFunction) else list(fs)
        ratios = []
        for t in scales:
            ft = [f.dilated(t) for f in fs]
            try:
                ps = replace(base_proj, scale=base_proj.scale * t)
                lhs, rhs = _sides(suite, params, ft, spec, norm_specs, opts, ps)
                ratio = lhs / rhs
            except (ArithmeticError, ConeDomainError, RuntimeError) as exc:
                lhs = rhs = ratio = math.nan
                res.notes.append(f"function {idx}, scale {t:g}: {exc}")
            ok = bool(np.isfinite(ratio))
            finite &= ok
            ratios.append(ratio)
            res.records.append(
                {"function": idx, "functions": [f.describe() for f in fs], "scale": t, "lhs": lhs, "rhs": rhs, "ratio": ratio, "finite": ok}
            )
        r = np.array(ratios)
        if np.all(np.isfinite(r)) and np.all(r > 0):
            drifts.append(drift(r))
            monotone.append(_monotone(r))
            maxima.append(float(r.max()))
            res.summary.setdefault("slopes", []).append(fit_slope(scales, r))
        else:
            drifts.append(math.inf)
            monotone.append(False)
    res.summary.update(
        {
            "max_ratio": max(maxima) if maxima else math.nan,
            "drifts": drifts,
            "max_drift": max(drifts),
            "monotone": monotone,
            "all_finite": finite,
        }
    )
    res.passed = bool(finite and max(drifts) < drift_tol)
    res.status = "bounded on sample" if res.passed else "divergence signature"
    return res


# -- reproducing formulas -----------------------------------------------------------------------

FORMULAS = ("repr1", "repr2", "prod", "rep")


def _exponents(formula: str, params: OperatorParams, reading: str) -> np.ndarray:
    if formula in ("repr1", "rep") and reading == "printed":
        beta = params.beta[0]
        return np.full(2, 0.5 * (params.cone.n_over_r + beta / 2))
    return params.kernel_exponents()


def reproducing_ratio_check(
    formula: str,
    params: OperatorParams,
    f,
    z_pairs,
    spec: QuadratureSpec | None = None,
    reading: str = "corrected",
    tol: float = 0.02,
    k: int = 0,
) -> ExperimentResult:
    """Ratio ``integral / product`` over point tuples; constant ratio verifies the formula up to its constant.

    repr1 / rep: ``P f(z_1) P f(z_2)`` against ``int f P f Delta^{beta - n/r}`` with two kernel
    factors (m = 2, one function).  ``reading="printed"`` uses the exponent
    ``(n/r + beta/2)/2`` as displayed; the default uses ``(n/r + beta)/2``.
    repr2: ``prod f_j(z_j)`` against ``T_beta``.  prod: ``prod P f_j(z_j)`` against ``S_{beta,k}``.
    """
    if formula not in FORMULAS:
        raise ValueError(f"unknown formula {formula!r}; choose from {FORMULAS}")
    cone = params.cone
    if formula in ("repr1", "rep"):
        if params.m != 2:
            raise ValueError(f"{formula} uses m = 2")
        fs = [f, f] if isinstance(f, TubeFunction) else list(f)
    else:
        fs = [f] * params.m if isinstance(f, TubeFunction) else list(f)
    zs = [np.array([_tube_array(cone, pair[j]) for pair in z_pairs]) for j in range(params.m)]
    exps = _exponents(formula, params, reading)
    if formula == "repr2":
        rhs = t_beta_apply(params, fs, zs, spec, exps)
        lhs = math.prod(np.asarray(fj(z)) for fj, z in zip(fs, zs))
    else:
        kk = 0 if formula in ("repr1", "rep") else k
        rhs = s_beta_apply(params, kk, fs, zs, spec, exps)
        lhs = math.prod(bergman_project(cone, v, fj, z, spec).values for fj, v, z in zip(fs, params.nu, zs))
    res = ExperimentResult(f"reproducing-{formula}", {**params.to_dict(), "reading": reading, "tol": tol})
    scale = max(float(np.max(np.abs(rhs.values))), 1e-300)
    ratios = []
    for i in range(len(z_pairs)):
        pair = [np.asarray(z[i]).tolist() for z in zs]
        if abs(lhs[i]) <= 1e-12 * scale or abs(lhs[i]) == 0:
            res.notes.append(f"pair {i} skipped: degenerate product")
            res.records.append({"pair": i, "points": str(pair), "skipped": True})
            continue
        ratio = rhs.values[i] / lhs[i]
        ratios.append(ratio)
        res.records.append(
            {"pair": i, "points": str(pair), "lhs": complex(lhs[i]), "rhs": complex(rhs.values[i]), "ratio": complex(ratio), "error": float(rhs.errors[i])}
        )
    if not ratios:
        res.status = "vacuous"
        res.summary = {"cv": math.nan, "pairs": 0}
        return res
    r = np.array(ratios)
    cv = float(np.std(r) / abs(np.mean(r))) if len(r) > 1 else 0.0
    res.summary = {"cv": cv, "mean_ratio": complex(np.mean(r)), "pairs": len(r)}
    res.passed = bool(cv < tol)
    res.status = "ratio constant" if res.passed else "ratio varies"
    return res

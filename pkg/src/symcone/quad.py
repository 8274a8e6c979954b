"""Numerical integration over the cone, capped cones, R^n and the tube.

Every region is a union of cells; a cell is a box of "axes" (half-lines,
lines, finite intervals) plus a smooth map into the region.  Lorentz regions
use spectral coordinates: ordered eigenvalues ``lambda_1 = rho`` and
``lambda_2 = rho * t`` (``0 < t < 1``) and a frame direction on the sphere
``S^(n-2)``, so that boundary singularities of determinant powers sit on cell
faces where the node distributions cluster.

Measures are Lebesgue measure of the trace-form Euclidean structure, i.e.
``cone.volume_factor`` times coordinate Lebesgue measure.

Integrands are vectorized: they receive an ``(N, dim)`` float array of points
and return ``N`` real or complex values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.special import expit, roots_hermite, roots_laguerre

from . import jordan
from .jordan import ConeDescriptor

__all__ = [
    "SCHEMES",
    "QuadratureSpec",
    "IntegralEstimate",
    "QuadratureError",
    "Axis",
    "Cell",
    "Region",
    "ConeRegion",
    "ConeCapRegion",
    "SlabRegion",
    "TubeRegion",
    "TubeBoxRegion",
    "Rule",
    "build_rule",
    "integrate",
    "refine",
    "default_spec",
]

SCHEMES = ("tensor_gauss", "double_exponential", "monte_carlo")

# max |t| of the double-exponential variable per axis kind; keeps nodes
# representable and away from interval endpoints by >= ~5e-14
_DE_INTERVAL_T = 3.0
_DE_SEMI_T = (-4.5, 3.5)
_DE_LINE_T = 3.2

_MAX_TENSOR_POINTS = 30_000_000
_CHUNK = 1 << 17


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: str = "double_exponential"
    nodes: int = 49
    samples: int = 200_000
    scale: float = 1.0
    seed: int = 42
    target_rel_tol: float = 1e-6

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if self.nodes < 2 or self.samples < 2:
            raise ValueError("node and sample counts must be >= 2")
        if not self.scale > 0:
            raise ValueError("truncation scale must be > 0")

    def refined(self) -> QuadratureSpec:
        if self.scheme == "monte_carlo":
            return replace(self, samples=2 * self.samples)
        if self.scheme == "double_exponential":
            return replace(self, nodes=2 * self.nodes - 1)
        return replace(self, nodes=2 * self.nodes)

    def to_text(self) -> str:
        return (
            f"scheme={self.scheme} nodes={self.nodes} samples={self.samples} "
            f"scale={self.scale!r} seed={self.seed} target_rel_tol={self.target_rel_tol!r}"
        )

    @classmethod
    def from_text(cls, text: str) -> QuadratureSpec:
        kw = {}
        for item in text.replace(",", " ").split():
            key, _, val = item.partition("=")
            key = key.strip()
            if key == "scheme":
                kw[key] = val
            elif key in ("nodes", "samples", "seed"):
                kw[key] = int(float(val))
            elif key in ("scale", "target_rel_tol"):
                kw[key] = float(val)
            else:
                raise ValueError(f"unknown quadrature key {key!r}")
        return cls(**kw)


@dataclass
class IntegralEstimate:
    value: complex | float
    error_estimate: float
    evaluations: int
    converged: bool = True
    spec: QuadratureSpec | None = None

    @property
    def relative_error(self) -> float:
        return self.error_estimate / abs(self.value) if self.value != 0 else math.inf

    def to_dict(self) -> dict:
        v = self.value
        val = {"re": v.real, "im": v.imag} if isinstance(v, complex) else v
        return {
            "value": val,
            "error_estimate": self.error_estimate,
            "evaluations": self.evaluations,
            "converged": self.converged,
            "quadrature": self.spec.to_text() if self.spec else None,
        }


# -- axes and 1-d rules ------------------------------------------------------


@dataclass(frozen=True)
class Axis:
    kind: str  # "semi" (0, inf), "semi_cut" (0, hi), "line" (-inf, inf), "interval" (lo, hi)
    lo: float = 0.0
    hi: float = 1.0
    scaled: bool = True  # whether QuadratureSpec.scale applies


def _de_nodes(axis: Axis, nodes: int, scale: float):
    """Fine nodes/weights and embedded coarse weights (step 2h) on the same nodes."""
    m = max(nodes // 2, 1)
    if axis.kind == "interval":
        t = np.linspace(-_DE_INTERVAL_T, _DE_INTERVAL_T, 2 * m + 1)
        h = t[1] - t[0]
        s = 0.5 * math.pi * np.sinh(t)
        half = 0.5 * (axis.hi - axis.lo)
        # 1 +/- tanh(s) written without cancellation near either endpoint
        with np.errstate(over="ignore"):
            x = np.where(
                s <= 0,
                axis.lo + half * 2.0 / (1.0 + np.exp(-2 * s)),
                axis.hi - half * 2.0 / (1.0 + np.exp(2 * s)),
            )
        w = half * 0.5 * math.pi * np.cosh(t) / np.cosh(s) ** 2 * h
    elif axis.kind == "semi":
        a = scale if axis.scaled else 1.0
        t = np.linspace(_DE_SEMI_T[0], _DE_SEMI_T[1], 2 * m + 1)
        h = t[1] - t[0]
        x = a * np.exp(0.5 * math.pi * np.sinh(t))
        w = x * 0.5 * math.pi * np.cosh(t) * h
    elif axis.kind == "semi_cut":
        # x = hi * expit(s - c): a * e^s near 0 like the semi map, double-exponential clustering at hi
        a = scale if axis.scaled else 1.0
        c = math.log(axis.hi / a)
        t_hi = math.asinh(2.0 / math.pi * (max(c, 0.0) + 40.0))
        t = np.linspace(_DE_SEMI_T[0], t_hi, 2 * m + 1)
        h = t[1] - t[0]
        u = 0.5 * math.pi * np.sinh(t) - c
        x = axis.hi * expit(u)
        w = axis.hi * expit(u) * expit(-u) * 0.5 * math.pi * np.cosh(t) * h
    elif axis.kind == "line":
        t = np.linspace(-_DE_LINE_T, _DE_LINE_T, 2 * m + 1)
        h = t[1] - t[0]
        a = scale if axis.scaled else 1.0
        s = 0.5 * math.pi * np.sinh(t)
        x = a * np.sinh(s)
        w = a * np.cosh(s) * 0.5 * math.pi * np.cosh(t) * h
    else:
        raise ValueError(axis.kind)
    cw = np.zeros_like(w)
    cw[::2] = 2.0 * w[::2]
    return x, w, cw


def _gauss_nodes(axis: Axis, nodes: int, scale: float):
    a = scale if axis.scaled else 1.0
    if axis.kind == "semi_cut":
        axis = Axis("interval", 0.0, axis.hi, False)
    if axis.kind == "interval":
        t, w = np.polynomial.legendre.leggauss(nodes)
        half = 0.5 * (axis.hi - axis.lo)
        return axis.lo + half * (t + 1.0), half * w
    if axis.kind == "semi":
        t, w = roots_laguerre(nodes)
        return a * t, a * w * np.exp(t)
    if axis.kind == "line":
        t, w = roots_hermite(nodes)
        return a * t, a * w * np.exp(t**2)
    raise ValueError(axis.kind)


def _mc_map(axis: Axis, u: np.ndarray, scale: float):
    a = scale if axis.scaled else 1.0
    if axis.kind == "interval":
        return axis.lo + (axis.hi - axis.lo) * u, np.full_like(u, axis.hi - axis.lo)
    if axis.kind == "semi":
        return a * u / (1.0 - u), a / (1.0 - u) ** 2
    if axis.kind == "semi_cut":
        top = axis.hi / (a + axis.hi)
        v = top * u
        return a * v / (1.0 - v), a * top / (1.0 - v) ** 2
    if axis.kind == "line":
        c = math.pi * (u - 0.5)
        return a * np.tan(c), a * math.pi / np.cos(c) ** 2
    raise ValueError(axis.kind)


# -- regions -----------------------------------------------------------------

Transform = Callable[[np.ndarray], "tuple[np.ndarray, np.ndarray]"]


@dataclass
class Cell:
    axes: tuple[Axis, ...]
    transform: Transform  # (N, D) axis coordinates -> (points (N, dim), jacobian (N,))


def _sphere_basis(u: np.ndarray) -> np.ndarray:
    """Orthonormal basis of R^(n-1) (columns) whose first column is u."""
    k = len(u)
    m = np.eye(k)
    m[:, 0] = u
    q, _ = np.linalg.qr(m)
    if q[:, 0] @ u < 0:
        q = -q
    return q


def _sphere_cells(cone: ConeDescriptor, directions=None):
    """Parametrizations of S^(n-2) as lists of (axes, fn(angles) -> (w, jac)).

    ``directions`` are unit vectors where the integrand may be singular (by
    default +u and -u, where the frame minors vanish on the boundary). On the
    circle every one of them lies on a cell face; in higher dimension the
    polar axis is the first one.
    """
    if directions is None:
        directions = [cone.u, -cone.u]
    k = cone.n - 1
    if k == 2:
        cuts = sorted({float(np.mod(math.atan2(d[1], d[0]), 2 * math.pi)) for d in directions})
        cuts = cuts + [cuts[0] + 2 * math.pi]
        if len(cuts) == 2:
            cuts = [cuts[0], cuts[0] + math.pi, cuts[1]]

        def circle(ang):
            phi = ang[:, 0]
            return np.stack([np.cos(phi), np.sin(phi)], axis=-1), np.ones(len(phi))

        return [
            ((Axis("interval", a, b, False),), circle)
            for a, b in zip(cuts[:-1], cuts[1:])
            if b - a > 1e-12
        ]

    basis = _sphere_basis(np.asarray(directions[0], float))

    def hyper(ang):
        thetas, phi = ang[:, :-1], ang[:, -1]
        coords = np.empty((len(phi), k))
        jac = np.ones(len(phi))
        sin_prod = np.ones(len(phi))
        for i in range(k - 2):
            coords[:, i] = sin_prod * np.cos(thetas[:, i])
            jac *= np.sin(thetas[:, i]) ** (k - 2 - i)
            sin_prod = sin_prod * np.sin(thetas[:, i])
        coords[:, k - 2] = sin_prod * np.cos(phi)
        coords[:, k - 1] = sin_prod * np.sin(phi)
        return coords @ basis.T, jac

    axes = tuple(Axis("interval", 0.0, math.pi, False) for _ in range(k - 2))
    axes += (Axis("interval", 0.0, 2 * math.pi, False),)
    return [(axes, hyper)]


def _lorentz_point(lam1, lam2, w):
    x0 = 0.5 * (lam1 + lam2)
    return np.concatenate([x0[:, None], (0.5 * (lam1 - lam2))[:, None] * w], axis=-1)


class Region:
    cone: ConeDescriptor
    dim: int

    def cells(self) -> list[Cell]:
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError


@dataclass
class ConeRegion(Region):
    """The open cone; with ``radial`` an interval the cone is cut to eigenvalues in it."""

    cone: ConeDescriptor
    radial: Axis = field(default_factory=lambda: Axis("semi"))
    directions: list | None = None

    @property
    def dim(self) -> int:
        return self.cone.n

    def describe(self) -> str:
        return f"cone({self.cone})"

    def cells(self) -> list[Cell]:
        cone = self.cone
        if cone.r == 1:
            return [Cell((self.radial,), lambda c: (c[:, :1], np.ones(len(c))))]
        vf, n = cone.volume_factor, cone.n
        out = []
        for ang_axes, sph in _sphere_cells(cone, self.directions):

            def tr(c, sph=sph):
                rho, t = c[:, 0], c[:, 1]
                w, sj = sph(c[:, 2:])
                lam2 = rho * t
                jac = vf * 0.5 * (0.5 * rho * (1.0 - t)) ** (n - 2) * rho * sj
                return _lorentz_point(rho, lam2, w), jac

            out.append(Cell((self.radial, Axis("interval", 0.0, 1.0, False)) + ang_axes, tr))
        return out


@dataclass
class ConeCapRegion(Region):
    """``Omega cap (y - Omega)``, the image of the cap at e under ``P(y^(1/2))``."""

    cone: ConeDescriptor
    y: np.ndarray

    def __post_init__(self):
        self.y = jordan._points(self.cone, self.y).astype(float)
        if not jordan.in_cone(self.cone, self.y):
            raise jordan.ConeDomainError("cone_cap requires y in the open cone")

    @property
    def dim(self) -> int:
        return self.cone.n

    def describe(self) -> str:
        return f"cone_cap({self.cone}, y={self.y.tolist()})"

    def cells(self) -> list[Cell]:
        cone = self.cone
        if cone.r == 1:
            y = float(self.y[0])
            return [Cell((Axis("interval", 0.0, y, False),), lambda c: (c[:, :1], np.ones(len(c))))]
        P = jordan.quadratic_representation(cone, jordan.sqrt(cone, self.y))
        detfac = float(jordan.determinant(cone, self.y)) ** (cone.n / 2)
        # boundary rays along the frame pull back to these directions at e
        Pinv = jordan.quadratic_representation(cone, jordan.inverse(cone, jordan.sqrt(cone, self.y)))
        dirs = []
        for sign in (1.0, -1.0):
            v = Pinv @ np.concatenate([[1.0], sign * cone.u])
            v = v[1:] / np.linalg.norm(v[1:])
            dirs += [v, -v]  # -v carries the singularity of y - x
        base = ConeRegion(cone, Axis("interval", 0.0, 1.0, False), dirs).cells()
        out = []
        for cell in base:

            def tr(c, inner=cell.transform):
                pts, jac = inner(c)
                return pts @ P.T, jac * detfac

            out.append(Cell(cell.axes, tr))
        return out


@dataclass
class SlabRegion(Region):
    """All of V = R^n, split for Lorentz cones into Omega, -Omega and the indefinite part."""

    cone: ConeDescriptor

    @property
    def dim(self) -> int:
        return self.cone.n

    def describe(self) -> str:
        return f"slab({self.cone.n})"

    def cells(self) -> list[Cell]:
        cone = self.cone
        if cone.r == 1:
            return [Cell((Axis("line"),), lambda c: (c[:, :1], np.ones(len(c))))]
        vf, n = cone.volume_factor, cone.n
        pos = ConeRegion(cone).cells()
        out = list(pos)
        for cell in pos:

            def neg(c, inner=cell.transform):
                pts, jac = inner(c)
                return -pts, jac

            out.append(Cell(cell.axes, neg))
        for ang_axes, sph in _sphere_cells(cone):

            def mixed(c, sph=sph):
                p, q = c[:, 0], c[:, 1]
                w, sj = sph(c[:, 2:])
                jac = vf * 0.5 * (0.5 * (p + q)) ** (n - 2) * sj
                return _lorentz_point(p, -q, w), jac

            out.append(Cell((Axis("semi"), Axis("semi")) + ang_axes, mixed))
        return out


@dataclass
class TubeRegion(Region):
    """The tube ``V + i Omega``; points are ``(x, y)`` concatenated (dim 2n).

    With ``y_max`` the imaginary part is cut to eigenvalues below ``y_max``.
    """

    cone: ConeDescriptor
    y_max: float | None = None

    @property
    def dim(self) -> int:
        return 2 * self.cone.n

    def describe(self) -> str:
        cut = "" if self.y_max is None else f", y_max={self.y_max:g}"
        return f"tube({self.cone}{cut})"

    def cells(self) -> list[Cell]:
        radial = Axis("semi") if self.y_max is None else Axis("semi_cut", 0.0, float(self.y_max))
        out = []
        for xc in SlabRegion(self.cone).cells():
            for yc in ConeRegion(self.cone, radial).cells():
                dx = len(xc.axes)

                def tr(c, xc=xc, yc=yc, dx=dx):
                    px, jx = xc.transform(c[:, :dx])
                    py, jy = yc.transform(c[:, dx:])
                    return np.concatenate([px, py], axis=-1), jx * jy

                out.append(Cell(xc.axes + yc.axes, tr))
        return out


@dataclass
class TubeBoxRegion(Region):
    """Box ``[x_lo, x_hi] x [y_lo, y_hi]`` in coordinates, imaginary window inside Omega."""

    cone: ConeDescriptor
    x_lo: np.ndarray
    x_hi: np.ndarray
    y_lo: np.ndarray
    y_hi: np.ndarray

    def __post_init__(self):
        n = self.cone.n
        for name in ("x_lo", "x_hi", "y_lo", "y_hi"):
            setattr(self, name, np.broadcast_to(np.asarray(getattr(self, name), float), (n,)).copy())
        corners = np.array(np.meshgrid(*[[a, b] for a, b in zip(self.y_lo, self.y_hi)], indexing="ij"))
        corners = corners.reshape(n, -1).T
        if not np.all(jordan.in_cone(self.cone, corners)):
            raise jordan.ConeDomainError("tube_box imaginary window must lie inside the open cone")

    @property
    def dim(self) -> int:
        return 2 * self.cone.n

    def describe(self) -> str:
        return f"tube_box({self.cone})"

    def cells(self) -> list[Cell]:
        lo = np.concatenate([self.x_lo, self.y_lo])
        hi = np.concatenate([self.x_hi, self.y_hi])
        axes = tuple(Axis("interval", float(a), float(b), False) for a, b in zip(lo, hi))
        vf = self.cone.volume_factor**2
        return [Cell(axes, lambda c: (c.copy(), np.full(len(c), vf)))]


# -- rules -------------------------------------------------------------------


@dataclass
class Rule:
    """Points with fine weights and either embedded coarse weights or MC cell labels."""

    points: np.ndarray
    weights: np.ndarray
    coarse_weights: np.ndarray | None = None
    cell_index: np.ndarray | None = None
    spec: QuadratureSpec | None = None

    def __len__(self) -> int:
        return len(self.points)

    def combine(self, values: np.ndarray) -> tuple[complex | float, float]:
        """Integral and error estimate from integrand values at the points."""
        values = np.asarray(values)
        value = self.weights @ values
        if self.coarse_weights is not None:
            return value, float(abs(value - self.coarse_weights @ values))
        var = 0.0
        for c in np.unique(self.cell_index):
            sel = self.cell_index == c
            terms = self.weights[sel] * values[sel]
            nc = sel.sum()
            var += np.var(terms) * nc  # weights already carry 1/nc
        return value, float(math.sqrt(var))


def _tensor(axes_nodes):
    grids = np.meshgrid(*axes_nodes, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


def _cell_tensor(cell: Cell, scheme: str, nodes: int, scale: float):
    if scheme == "double_exponential":
        per = [_de_nodes(ax, nodes, scale) for ax in cell.axes]
        size = math.prod(len(p[0]) for p in per)
        if size > _MAX_TENSOR_POINTS:
            raise QuadratureError(f"tensor grid of {size} points too large; use monte_carlo")
        coords = _tensor([p[0] for p in per])
        w = _tensor([p[1] for p in per]).prod(axis=-1)
        cw = _tensor([p[2] for p in per]).prod(axis=-1)
        pts, jac = cell.transform(coords)
        return pts, w * jac, cw * jac
    fine = [_gauss_nodes(ax, nodes, scale) for ax in cell.axes]
    coarse = [_gauss_nodes(ax, max(nodes // 2, 1), scale) for ax in cell.axes]
    size = math.prod(len(p[0]) for p in fine)
    if size > _MAX_TENSOR_POINTS:
        raise QuadratureError(f"tensor grid of {size} points too large; use monte_carlo")
    out = []
    for per in (fine, coarse):
        coords = _tensor([p[0] for p in per])
        w = _tensor([p[1] for p in per]).prod(axis=-1)
        pts, jac = cell.transform(coords)
        out.append((pts, w * jac))
    (pf, wf), (pc, wc) = out
    pts = np.concatenate([pf, pc])
    return pts, np.concatenate([wf, np.zeros_like(wc)]), np.concatenate([np.zeros_like(wf), wc])


def build_rule(region: Region, spec: QuadratureSpec) -> Rule:
    cells = region.cells()
    if spec.scheme == "monte_carlo":
        pts_all, w_all, idx_all = [], [], []
        per_cell = max(spec.samples // len(cells), 2)
        for ci, cell in enumerate(cells):
            rng = np.random.default_rng([spec.seed, ci])
            u = rng.random((per_cell, len(cell.axes)))
            coords = np.empty_like(u)
            w = np.ones(per_cell)
            for k, ax in enumerate(cell.axes):
                coords[:, k], dens = _mc_map(ax, u[:, k], spec.scale)
                w *= dens
            pts, jac = cell.transform(coords)
            pts_all.append(pts)
            w_all.append(w * jac / per_cell)
            idx_all.append(np.full(per_cell, ci))
        return Rule(np.concatenate(pts_all), np.concatenate(w_all), None, np.concatenate(idx_all), spec)
    pts_all, w_all, cw_all = [], [], []
    for cell in cells:
        p, w, cw = _cell_tensor(cell, spec.scheme, spec.nodes, spec.scale)
        pts_all.append(p)
        w_all.append(w)
        cw_all.append(cw)
    return Rule(np.concatenate(pts_all), np.concatenate(w_all), np.concatenate(cw_all), None, spec)


def evaluate(rule: Rule, integrand: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Integrand values at the rule's points, evaluated in chunks; rejects non-finite samples."""
    n = len(rule.points)
    out = None
    for start in range(0, n, _CHUNK):
        chunk = rule.points[start : start + _CHUNK]
        vals = np.asarray(integrand(chunk))
        if vals.shape != (len(chunk),):
            vals = np.broadcast_to(vals, (len(chunk),))
        if out is None:
            out = np.empty(n, dtype=np.result_type(vals.dtype, float))
        elif np.iscomplexobj(vals) and not np.iscomplexobj(out):
            out = out.astype(complex)
        bad = ~np.isfinite(vals)
        if bad.any():
            i = int(np.argmax(bad))
            raise QuadratureError(f"non-finite integrand value {vals[i]} at point {chunk[i].tolist()}")
        out[start : start + len(chunk)] = vals
    return out


def _scalar(v):
    v = complex(v) if np.iscomplexobj(v) else float(v)
    return v


def default_spec(cone: ConeDescriptor, **overrides) -> QuadratureSpec:
    """Per-axis defaults: 97 double-exponential nodes in rank 1, 49 otherwise."""
    base = QuadratureSpec(nodes=97 if cone.r == 1 else 49)
    return replace(base, **overrides)


def integrate(region: Region, integrand: Callable[[np.ndarray], np.ndarray], spec: QuadratureSpec | None = None) -> IntegralEstimate:
    spec = spec or default_spec(region.cone)
    rule = build_rule(region, spec)
    vals = evaluate(rule, integrand)
    value, err = rule.combine(vals)
    value = _scalar(value)
    converged = err <= spec.target_rel_tol * abs(value) if value != 0 else err == 0
    return IntegralEstimate(value, err, len(rule), bool(converged), spec)


def refine(previous: IntegralEstimate, region: Region, integrand, spec: QuadratureSpec | None = None) -> IntegralEstimate:
    """Recompute at doubled resolution; the error estimate compares with ``previous``."""
    base = spec or previous.spec or default_spec(region.cone)
    finer = base.refined()
    new = integrate(region, integrand, finer)
    err = abs(new.value - previous.value)
    if finer.scheme == "monte_carlo":
        err = new.error_estimate
    converged = err <= finer.target_rel_tol * abs(new.value) if new.value != 0 else err == 0
    return IntegralEstimate(new.value, float(err), new.evaluations, bool(converged), finer)

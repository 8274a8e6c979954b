"""Euclidean Jordan algebra core for the half-line and the Lorentz cones.

Points of ``V = R^n`` are numpy arrays whose last axis has length ``n``; all
functions broadcast over leading axes.  On the half-line a bare scalar or a
1-d batch is promoted to shape ``(..., 1)``.

The Lorentz algebra ``lorentz(n)`` is the spin factor ``R x R^(n-1)`` with
``(x o y)_0 = <x, y>`` and ``(x o y)_k = x_0 y_k + y_0 x_k``; its identity is
``e = (1, 0, ..., 0)`` and its fixed Jordan frame is
``c_1 = (1, u)/2``, ``c_2 = (1, -u)/2`` for a unit ``u`` in ``R^(n-1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "ConeDescriptor",
    "ConeDomainError",
    "SpectralDecomposition",
    "halfline",
    "lorentz",
    "parse_cone",
    "as_multiindex",
    "identity",
    "jordan_product",
    "trace",
    "trace_inner",
    "spectral",
    "determinant",
    "principal_minor",
    "rotated_minor",
    "power_function",
    "inverse",
    "quadratic_representation",
    "sqrt",
    "reflect",
    "in_cone",
    "multiindex_star",
    "multiindex_shift",
    "multiindex_less",
    "wallach_parameters",
    "in_wallach",
]


class ConeDomainError(ValueError):
    """A point or parameter lies outside the domain where a quantity is defined."""


@dataclass(frozen=True)
class ConeDescriptor:
    kind: str
    n: int
    frame_direction: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.kind == "halfline":
            if self.n != 1:
                raise ValueError("halfline has n = 1")
            object.__setattr__(self, "frame_direction", ())
        elif self.kind == "lorentz":
            if self.n < 3:
                raise ValueError(f"lorentz cone needs n >= 3, got {self.n}")
            u = np.asarray(self.frame_direction or (1.0,) + (0.0,) * (self.n - 2), dtype=float)
            if u.shape != (self.n - 1,):
                raise ValueError(f"frame_direction must have length {self.n - 1}")
            norm = np.linalg.norm(u)
            if abs(norm - 1.0) > 1e-12:
                raise ValueError(f"frame_direction must be a unit vector (|u| = {norm})")
            object.__setattr__(self, "frame_direction", tuple(float(v) for v in u))
        else:
            raise ValueError(f"unknown cone kind {self.kind!r}")

    @property
    def r(self) -> int:
        return 1 if self.kind == "halfline" else 2

    @property
    def d(self) -> float:
        # (r - 1) d / 2 = n / r - 1; set to 0 on the half-line by convention
        return 0.0 if self.r == 1 else 2.0 * (self.n / self.r - 1.0) / (self.r - 1)

    @property
    def n_over_r(self) -> float:
        return self.n / self.r

    @property
    def g0(self) -> np.ndarray:
        return np.array([(j - 1) * self.d / 2 for j in range(1, self.r + 1)])

    @property
    def u(self) -> np.ndarray:
        return np.asarray(self.frame_direction, dtype=float)

    @property
    def volume_factor(self) -> float:
        """Density of trace-form Lebesgue measure w.r.t. coordinate Lebesgue measure."""
        return 1.0 if self.r == 1 else 2.0 ** (self.n / 2)

    def frame(self) -> tuple[np.ndarray, ...]:
        if self.r == 1:
            return (np.array([1.0]),)
        c1 = 0.5 * np.concatenate([[1.0], self.u])
        c2 = 0.5 * np.concatenate([[1.0], -self.u])
        return c1, c2

    def spec_string(self) -> str:
        if self.kind == "halfline":
            return "halfline"
        default = (1.0,) + (0.0,) * (self.n - 2)
        if self.frame_direction == default:
            return f"lorentz:{self.n}"
        return f"lorentz:{self.n}:u=" + ",".join(repr(v) for v in self.frame_direction)

    def __str__(self) -> str:
        return self.spec_string()


def halfline() -> ConeDescriptor:
    return ConeDescriptor("halfline", 1)


def lorentz(n: int = 3, u: Sequence[float] | None = None) -> ConeDescriptor:
    return ConeDescriptor("lorentz", n, tuple(u) if u is not None else ())


_CONE_RE = re.compile(r"^lorentz:(\d+)(?::u=([-+0-9eE.,\s]+))?$")


def parse_cone(text: str) -> ConeDescriptor:
    """Parse ``halfline`` or ``lorentz:<n>[:u=<comma list>]``."""
    text = text.strip()
    if text == "halfline":
        return halfline()
    m = _CONE_RE.match(text)
    if not m:
        raise ValueError(f"bad cone specification {text!r}")
    n = int(m.group(1))
    u = None
    if m.group(2):
        u = [float(v) for v in m.group(2).split(",") if v.strip()]
    return lorentz(n, u)


class SpectralDecomposition(NamedTuple):
    eigenvalues: np.ndarray  # (..., r)
    idempotents: np.ndarray  # (..., r, n)


# -- helpers -----------------------------------------------------------------


def _points(cone: ConeDescriptor, x) -> np.ndarray:
    x = np.asarray(x)
    if not np.iscomplexobj(x):
        x = x.astype(float, copy=False)
    if cone.n == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.shape[-1] != cone.n:
        raise ValueError(f"dimension mismatch: expected last axis {cone.n}, got {x.shape[-1]}")
    return x


def as_multiindex(cone: ConeDescriptor, s) -> np.ndarray:
    """Broadcast a scalar or sequence to an r-vector of exponents."""
    s = np.asarray(s, dtype=float)
    if s.size == 1:
        return np.full(cone.r, float(s.reshape(-1)[0]))
    if s.shape != (cone.r,):
        raise ValueError(f"multi-index must have length r = {cone.r}, got {s.shape}")
    return s.copy()


def identity(cone: ConeDescriptor) -> np.ndarray:
    e = np.zeros(cone.n)
    e[0] = 1.0
    return e


def jordan_product(cone: ConeDescriptor, x, y) -> np.ndarray:
    x, y = _points(cone, x), _points(cone, y)
    if cone.r == 1:
        return x * y
    x, y = np.broadcast_arrays(x, y)
    out = np.empty(x.shape, dtype=np.result_type(x, y))
    out[..., 0] = np.sum(x * y, axis=-1)
    out[..., 1:] = x[..., :1] * y[..., 1:] + y[..., :1] * x[..., 1:]
    return out


def trace(cone: ConeDescriptor, x) -> np.ndarray:
    x = _points(cone, x)
    return x[..., 0] if cone.r == 1 else 2.0 * x[..., 0]


def trace_inner(cone: ConeDescriptor, x, y) -> np.ndarray:
    """Trace form ``(x | y) = tr(x o y)``; bilinear (no conjugation) on complex input."""
    x, y = _points(cone, x), _points(cone, y)
    dot = np.sum(x * y, axis=-1)
    return dot if cone.r == 1 else 2.0 * dot


def spectral(cone: ConeDescriptor, x) -> SpectralDecomposition:
    x = _points(cone, x)
    if cone.r == 1:
        return SpectralDecomposition(x.copy(), np.ones(x.shape[:-1] + (1, 1)))
    x0, xb = x[..., 0], x[..., 1:]
    rho = np.linalg.norm(xb, axis=-1)
    safe = rho > 0
    direction = np.where(safe[..., None], xb / np.where(safe, rho, 1.0)[..., None], cone.u)
    lam = np.stack([x0 + rho, x0 - rho], axis=-1)
    c1 = 0.5 * np.concatenate([np.ones(x0.shape + (1,)), direction], axis=-1)
    c2 = 0.5 * np.concatenate([np.ones(x0.shape + (1,)), -direction], axis=-1)
    return SpectralDecomposition(lam, np.stack([c1, c2], axis=-2))


def determinant(cone: ConeDescriptor, x) -> np.ndarray:
    """Lorentz form ``x_0^2 - x_1^2 - ... `` (polynomial, so valid on complex input)."""
    x = _points(cone, x)
    if cone.r == 1:
        return x[..., 0]
    return x[..., 0] ** 2 - np.sum(x[..., 1:] ** 2, axis=-1)


def _check_k(cone: ConeDescriptor, k: int):
    if not 1 <= k <= cone.r:
        raise ValueError(f"minor index k must be in 1..{cone.r}, got {k}")


def principal_minor(cone: ConeDescriptor, k: int, x) -> np.ndarray:
    _check_k(cone, k)
    x = _points(cone, x)
    if k == cone.r:
        return determinant(cone, x)
    return x[..., 0] + x[..., 1:] @ cone.u


def rotated_minor(cone: ConeDescriptor, k: int, x) -> np.ndarray:
    """Principal minors for the reversed frame ``(c_r, ..., c_1)``."""
    _check_k(cone, k)
    x = _points(cone, x)
    if k == cone.r:
        return determinant(cone, x)
    return x[..., 0] - x[..., 1:] @ cone.u


def _minors(cone, x, rotated):
    minor = rotated_minor if rotated else principal_minor
    return [minor(cone, k, x) for k in range(1, cone.r + 1)]


def power_function(cone: ConeDescriptor, s, x, rotated: bool = False) -> np.ndarray:
    """Generalized power ``Delta_s(x) = prod_k Delta_k(x)^(s_k - s_(k+1))`` on the open cone."""
    s = as_multiindex(cone, s)
    x = _points(cone, x)
    if not np.all(in_cone(cone, x)):
        raise ConeDomainError("power_function: point outside the open cone")
    minors = _minors(cone, x, rotated)
    out = np.ones(x.shape[:-1])
    for k in range(cone.r):
        expo = s[k] - (s[k + 1] if k + 1 < cone.r else 0.0)
        if expo != 0.0:
            out = out * minors[k] ** expo
    return out


def inverse(cone: ConeDescriptor, x) -> np.ndarray:
    x = _points(cone, x)
    det = determinant(cone, x)
    if np.any(det == 0):
        raise ConeDomainError("inverse: singular element (determinant 0)")
    if cone.r == 1:
        return 1.0 / x
    conj = np.concatenate([x[..., :1], -x[..., 1:]], axis=-1)
    return conj / det[..., None]


def quadratic_representation(cone: ConeDescriptor, a) -> np.ndarray:
    """Matrix of ``P(a) = 2 L(a)^2 - L(a^2)``; maps ``e`` to ``a^2``."""
    a = _points(cone, a)
    if cone.r == 1:
        return (a[..., 0] ** 2)[..., None, None]
    refl = np.diag(np.concatenate([[1.0], -np.ones(cone.n - 1)]))
    det = determinant(cone, a)
    return 2.0 * a[..., :, None] * a[..., None, :] - det[..., None, None] * refl


def sqrt(cone: ConeDescriptor, x) -> np.ndarray:
    lam, c = spectral(cone, x)
    if np.any(lam < 0):
        raise ConeDomainError("sqrt: point outside the closed cone")
    return np.einsum("...k,...kn->...n", np.sqrt(lam), c)


def reflect(cone: ConeDescriptor, x) -> np.ndarray:
    """Frame-swapping reflection (negates the component of x-bar along u)."""
    x = _points(cone, x)
    if cone.r == 1:
        return x.copy()
    u = cone.u
    out = x.copy()
    out[..., 1:] = x[..., 1:] - 2.0 * (x[..., 1:] @ u)[..., None] * u
    return out


def in_cone(cone: ConeDescriptor, x) -> np.ndarray:
    """Strict membership: every eigenvalue > 0 (no tolerance)."""
    x = _points(cone, x)
    if cone.r == 1:
        return x[..., 0] > 0
    return x[..., 0] > np.linalg.norm(x[..., 1:], axis=-1)


# -- multi-indices -----------------------------------------------------------


def multiindex_star(s) -> np.ndarray:
    return np.asarray(s, dtype=float)[::-1].copy()


def multiindex_shift(s, a: float) -> np.ndarray:
    return np.asarray(s, dtype=float) + a


def multiindex_less(s, t) -> bool:
    return bool(np.all(np.asarray(s, dtype=float) < np.asarray(t, dtype=float)))


def wallach_parameters(cone: ConeDescriptor, s) -> np.ndarray | None:
    """Return ``u >= 0`` with ``s_j = u_j + (d/2) sum_{i<j} sgn(u_i)``, or None.

    The sign pattern determines ``u`` uniquely, so a single forward pass
    decides membership.
    """
    s = as_multiindex(cone, s)
    u = np.empty_like(s)
    positives = 0
    for j in range(cone.r):
        u[j] = s[j] - cone.d / 2 * positives
        if u[j] < 0:
            return None
        positives += u[j] > 0
    return u


def in_wallach(cone: ConeDescriptor, s) -> bool:
    return wallach_parameters(cone, s) is not None

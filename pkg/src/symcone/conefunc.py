"""Gamma and beta functions of the cone, each with a closed form and a quadrature path."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln

from . import jordan as J
from .jordan import ConeDescriptor, ConeDomainError
from .quad import ConeCapRegion, ConeRegion, IntegralEstimate, QuadratureSpec, integrate

__all__ = [
    "ConvergenceDomain",
    "convergence_domain",
    "check_gamma_domain",
    "log_gamma_closed",
    "gamma_closed",
    "gamma_integral",
    "beta_closed",
    "beta_integral",
    "rotated_beta_integral",
    "laplace_power",
    "laplace_closed",
]

_OVERFLOW_LOG = 700.0


class ConvergenceDomain:
    """Componentwise thresholds ``(j - 1) d / 2`` for Gamma_Omega; equal to g0."""

    def __init__(self, cone: ConeDescriptor):
        self.lower_bounds = cone.g0

    def contains(self, s) -> bool:
        return bool(np.all(np.asarray(s, float) > self.lower_bounds))


def convergence_domain(cone: ConeDescriptor) -> ConvergenceDomain:
    return ConvergenceDomain(cone)


def check_gamma_domain(cone: ConeDescriptor, s, name: str = "s") -> np.ndarray:
    s = J.as_multiindex(cone, s)
    for j, (sj, bound) in enumerate(zip(s, cone.g0), start=1):
        if not sj > bound:
            raise ConeDomainError(
                f"convergence violation: {name}_{j} = {sj:g} must exceed (j-1)d/2 = {bound:g}"
            )
    return s


def log_gamma_closed(cone: ConeDescriptor, s) -> float:
    s = check_gamma_domain(cone, s)
    shifted = s - cone.g0
    return 0.5 * (cone.n - cone.r) * math.log(2 * math.pi) + float(np.sum(gammaln(shifted)))


def gamma_closed(cone: ConeDescriptor, s) -> float:
    lg = log_gamma_closed(cone, s)
    if lg > _OVERFLOW_LOG:
        raise OverflowError(f"Gamma_Omega overflows (log value {lg:.1f})")
    return math.exp(lg)


def _gamma_integrand(cone, s, y=None):
    nr = cone.n_over_r
    e = J.identity(cone) if y is None else y

    def f(x):
        return np.exp(-J.trace_inner(cone, e, x)) * J.power_function(cone, s, x) * J.determinant(cone, x) ** (-nr)

    return f


def gamma_integral(cone: ConeDescriptor, s, spec: QuadratureSpec | None = None) -> IntegralEstimate:
    s = check_gamma_domain(cone, s)
    return integrate(ConeRegion(cone), _gamma_integrand(cone, s), spec)


def beta_closed(cone: ConeDescriptor, p, q) -> float:
    p = check_gamma_domain(cone, p, "p")
    q = check_gamma_domain(cone, q, "q")
    return math.exp(log_gamma_closed(cone, p) + log_gamma_closed(cone, q) - log_gamma_closed(cone, p + q))


def beta_integral(cone: ConeDescriptor, p, q, spec: QuadratureSpec | None = None) -> IntegralEstimate:
    p = check_gamma_domain(cone, p, "p")
    q = check_gamma_domain(cone, q, "q")
    e = J.identity(cone)
    nr = cone.n_over_r

    def f(x):
        return J.power_function(cone, p - nr, x) * J.power_function(cone, q - nr, e - x)

    return integrate(ConeCapRegion(cone, e), f, spec)


def rotated_beta_integral(cone: ConeDescriptor, p, q, y, spec: QuadratureSpec | None = None) -> IntegralEstimate:
    """``F(y) = int_{(y - Omega) cap Omega} Delta*_{p* - n/r}(x) Delta*_{q* - n/r}(y - x) dx``.

    The integral converges when the reversed indices p*, q* are admissible for
    Gamma_Omega; that is what is checked here.
    """
    ps = check_gamma_domain(cone, J.multiindex_star(J.as_multiindex(cone, p)), "p*")
    qs = check_gamma_domain(cone, J.multiindex_star(J.as_multiindex(cone, q)), "q*")
    y = J._points(cone, y).astype(float)
    nr = cone.n_over_r

    def f(x):
        return J.power_function(cone, ps - nr, x, rotated=True) * J.power_function(cone, qs - nr, y - x, rotated=True)

    return integrate(ConeCapRegion(cone, y), f, spec)


def laplace_power(cone: ConeDescriptor, s, y, spec: QuadratureSpec | None = None) -> IntegralEstimate:
    """``int_Omega exp(-(y|xi)) Delta_s(xi) Delta(xi)^(-n/r) d xi`` (real-exponential kernel)."""
    s = check_gamma_domain(cone, s)
    y = J._points(cone, y).astype(float)
    if not J.in_cone(cone, y):
        raise ConeDomainError("laplace_power requires y in the open cone")
    return integrate(ConeRegion(cone), _gamma_integrand(cone, s, y), spec)


def laplace_closed(cone: ConeDescriptor, s, y) -> float:
    """``Gamma_Omega(s) Delta_s(y^-1)``."""
    s = check_gamma_domain(cone, s)
    return gamma_closed(cone, s) * float(J.power_function(cone, s, J.inverse(cone, y)))

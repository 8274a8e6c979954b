"""Numerical analysis on symmetric cones and their tube domains.

Modules: ``jordan`` (cone algebra), ``conefunc`` (Gamma/Beta/Laplace),
``quad`` (cone and tube quadrature), ``spaces`` (mixed-norm Bergman and
Hardy-type norms), ``operators`` (Bergman projection, T_beta, S_beta),
``paleywiener`` (Laplace synthesis and embeddings) and ``cli``.
"""

from . import conefunc, jordan, operators, paleywiener, quad, results, spaces

__version__ = "0.1.0"

__all__ = ["conefunc", "jordan", "operators", "paleywiener", "quad", "results", "spaces", "__version__"]

"""Exact construction and certification of tame automorphisms of k[x1, x2, x3]
admitting Shestakov-Umirbaev reductions of type I."""

from .kernels import BACKEND
from .polyring import NEG_INF, MinusInfinity, Polynomial, parse_poly, render_poly

__version__ = "0.1.0"

__all__ = ["BACKEND", "NEG_INF", "MinusInfinity", "Polynomial", "parse_poly", "render_poly", "__version__"]

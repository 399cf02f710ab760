"""Exact transition matrices among the plethystic bases H, E, E+ and P of
polysymmetric functions, with the combinatorics behind them."""

from .combinat import Polycomposition, TypeIndex, enum_family, psort
from .notation import NotationError, parse_expr, render_expr

__version__ = "0.1.0"

__all__ = [
    "NotationError",
    "Polycomposition",
    "TypeIndex",
    "enum_family",
    "parse_expr",
    "psort",
    "render_expr",
]

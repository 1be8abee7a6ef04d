"""Exact shift equivalence testing, rational summability and telescoper
existence for multivariate rational functions over the rationals."""

from .polyarith import (
    Poly,
    Rat,
    RatFun,
    VarTable,
    dir_coeff_derivative,
    divexact,
    make_primitive,
    poly_gcd,
    symbolic_shift,
)
from .parser import ParseError, parse, print_expr

__version__ = "0.1.0"

__all__ = [
    "Poly",
    "Rat",
    "RatFun",
    "VarTable",
    "dir_coeff_derivative",
    "divexact",
    "make_primitive",
    "poly_gcd",
    "symbolic_shift",
    "ParseError",
    "parse",
    "print_expr",
    "__version__",
]

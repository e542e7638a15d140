from .poly import (LaurentPoly, NotDivisible, PolySyntaxError, RingMismatch, divides,
                   evaluate, exact_divide, laurent_gcd, parse_poly, poly_arith, ring_name,
                   unit_normalize)
from .matrix import LaurentMatrix, bareiss_rank, determinant

__all__ = [
    "LaurentMatrix", "LaurentPoly", "NotDivisible", "PolySyntaxError", "RingMismatch",
    "bareiss_rank", "determinant", "divides", "evaluate", "exact_divide", "laurent_gcd",
    "parse_poly", "poly_arith", "ring_name", "unit_normalize",
]

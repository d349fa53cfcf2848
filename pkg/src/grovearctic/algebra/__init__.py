"""Exact algebra: polynomials, rational functions, series, determinants, elimination."""

from .elim import (
    discriminant,
    gcd,
    resultant,
    squarefree_decomposition,
    squarefree_part,
    sylvester_matrix,
)
from .linalg import cramer, det, det_bareiss, det_cofactor, mat_mul
from .poly import PolyQ, format_rational, parse_rational
from .ratfunc import RatFuncQ
from .series import TruncSeries3, graded_indices, series_inverse

__all__ = [
    "PolyQ",
    "RatFuncQ",
    "TruncSeries3",
    "cramer",
    "det",
    "det_bareiss",
    "det_cofactor",
    "discriminant",
    "format_rational",
    "gcd",
    "graded_indices",
    "mat_mul",
    "parse_rational",
    "resultant",
    "series_inverse",
    "squarefree_decomposition",
    "squarefree_part",
    "sylvester_matrix",
]

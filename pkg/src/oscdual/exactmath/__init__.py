"""Exact rational polynomial arithmetic and fraction-free linear algebra."""

from .linalg import (
    PolyMatrix,
    all_minors,
    det,
    ff_rank_kernel,
    gcd_reduce,
    generic_rank,
    normalize_vector,
    rational_kernel,
    rational_rank,
)
from .poly import (
    MultiPoly,
    NotDivisible,
    PolyParseError,
    Rational,
    differentiate,
    parse_poly,
    poly_gcd,
    poly_gcd_list,
    prem,
    resultant,
    sort_variables,
    squarefree_part,
)

__all__ = [
    "MultiPoly",
    "NotDivisible",
    "PolyMatrix",
    "PolyParseError",
    "Rational",
    "all_minors",
    "det",
    "differentiate",
    "ff_rank_kernel",
    "gcd_reduce",
    "generic_rank",
    "normalize_vector",
    "parse_poly",
    "poly_gcd",
    "poly_gcd_list",
    "prem",
    "rational_kernel",
    "rational_rank",
    "resultant",
    "sort_variables",
    "squarefree_part",
]

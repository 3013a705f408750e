"""Hypothesis strategies shared by the property tests."""

from fractions import Fraction

import sympy
from hypothesis import strategies as st

from oscdual.exactmath import MultiPoly

small = st.integers(min_value=-6, max_value=6)
nonzero_small = small.filter(bool)
rationals = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))


def polys(variables=("t",), max_degree=4, max_terms=4):
    k = len(variables)
    exps = st.tuples(*[st.integers(0, max_degree)] * k).filter(lambda e: sum(e) <= max_degree)
    return st.dictionaries(exps, nonzero_small, max_size=max_terms).map(
        lambda d: MultiPoly(variables, {e: Fraction(c) for e, c in d.items()}))


def nonzero_polys(variables=("t",), max_degree=4, max_terms=4):
    return polys(variables, max_degree, max_terms).filter(lambda p: bool(p.terms))


def to_sympy(p: MultiPoly):
    syms = sympy.symbols(p.variables) if p.variables else ()
    if len(p.variables) == 1:
        syms = (syms,) if not isinstance(syms, (tuple, list)) else syms
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            term *= s ** k
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, variables):
    syms = sympy.symbols(variables)
    if len(variables) == 1:
        syms = (syms,) if not isinstance(syms, (tuple, list)) else syms
    poly = sympy.Poly(sympy.expand(expr), *syms)
    terms = {tuple(m): Fraction(int(c.p), int(c.q)) for m, c in poly.terms()}
    return MultiPoly(tuple(variables), terms)

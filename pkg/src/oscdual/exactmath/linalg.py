"""Fraction-free linear algebra over Q[vars].

Elimination is Bareiss-style: every division is exact, so entries stay
polynomial.  Rank and kernel are over the fraction field.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Mapping, Sequence

from .poly import MultiPoly, poly_gcd_list

__all__ = [
    "PolyMatrix",
    "det",
    "ff_rank_kernel",
    "all_minors",
    "normalize_vector",
    "rational_rank",
    "rational_kernel",
    "generic_rank",
]


def _as_poly(x, variables=()):
    return x if isinstance(x, MultiPoly) else MultiPoly.constant(Fraction(x), variables)


@dataclass(frozen=True)
class PolyMatrix:
    entries: tuple[tuple[MultiPoly, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "PolyMatrix":
        rows = [list(r) for r in rows]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        variables: tuple[str, ...] = ()
        for r in rows:
            for x in r:
                if isinstance(x, MultiPoly):
                    variables = variables + tuple(v for v in x.variables if v not in variables)
        entries = tuple(
            tuple(_as_poly(x, variables).with_variables(variables) for x in r) for r in rows
        )
        return cls(entries)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def variables(self) -> tuple[str, ...]:
        return self.entries[0][0].variables if self.entries and self.entries[0] else ()

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[MultiPoly, ...]:
        return self.entries[i]

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(tuple(zip(*self.entries)))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(tuple(tuple(self.entries[i][j] for j in cols) for i in rows))

    def evaluate(self, values: Mapping) -> list[list[Fraction]]:
        out = []
        for r in self.entries:
            row = []
            for x in r:
                v = x.evaluate(values)
                if isinstance(v, MultiPoly):
                    raise ValueError(f"free variables left after evaluation: {v}")
                row.append(v)
            out.append(row)
        return out

    def apply(self, vec: Sequence[MultiPoly]) -> list[MultiPoly]:
        return [sum((a * b for a, b in zip(r, vec)), MultiPoly()) for r in self.entries]

    def to_lists(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.entries]


def _rows_of(m) -> list[list[MultiPoly]]:
    if isinstance(m, PolyMatrix):
        return [list(r) for r in m.entries]
    return [list(r) for r in PolyMatrix.from_rows(m).entries]


def _cost(p: MultiPoly):
    return (p.degree(), len(p.terms))


def _bareiss(rows: list[list], divide, is_zero, cost, full: bool):
    """In-place fraction-free elimination.

    With ``full`` the result is in reduced form: every pivot column is zero
    off the pivot and every pivot equals the last pivot.  Returns the pivot
    (row, col) list and the row permutation sign.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    prev = None
    pivots = []
    sign = 1
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        candidates = [i for i in range(r, nrows) if not is_zero(rows[i][c])]
        if not candidates:
            continue
        best = min(candidates, key=lambda i: cost(rows[i][c]))
        if best != r:
            rows[r], rows[best] = rows[best], rows[r]
            sign = -sign
        p = rows[r][c]
        targets = range(nrows) if full else range(r + 1, nrows)
        for i in targets:
            if i == r:
                continue
            a = rows[i][c]
            new = []
            for j in range(ncols):
                if j < c and not full:
                    new.append(rows[i][j])
                    continue
                val = p * rows[i][j] - a * rows[r][j]
                if prev is not None:
                    val = divide(val, prev)
                new.append(val)
            rows[i] = new
        pivots.append((r, c))
        prev = p
        r += 1
    return pivots, sign


def _poly_divide(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a.divexact(b)


def det(m) -> MultiPoly:
    """Determinant by Bareiss elimination."""
    rows = _rows_of(m)
    n = len(rows)
    if n == 0:
        return MultiPoly.constant(1)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    variables = rows[0][0].variables
    if n == 1:
        return rows[0][0]
    pivots, sign = _bareiss(rows, _poly_divide, lambda x: not x.terms, _cost, full=False)
    if len(pivots) < n:
        return MultiPoly((), {}).with_variables(variables)
    return rows[n - 1][n - 1] * sign


def normalize_vector(vec: Sequence[MultiPoly]) -> tuple[MultiPoly, ...]:
    """Projective canonical form.

    Divide by the polynomial gcd, clear denominators, remove integer content,
    and make the first nonzero entry's leading coefficient positive.
    """
    vec = list(vec)
    if not vec:
        return ()
    variables: tuple[str, ...] = ()
    for x in vec:
        variables = variables + tuple(v for v in x.variables if v not in variables)
    vec = [x.with_variables(variables) for x in vec]
    nonzero = [x for x in vec if x.terms]
    if not nonzero:
        return tuple(vec)
    g = poly_gcd_list(nonzero)
    if not g.is_constant():
        vec = [x.divexact(g) for x in vec]
    num = 0
    den = 1
    for x in vec:
        if x.terms:
            c = x.content()
            num = gcd(num, c.numerator)
            den = lcm(den, c.denominator)
    scale = Fraction(den, num)
    first = next(x for x in vec if x.terms)
    if first.leading_coefficient() < 0:
        scale = -scale
    return tuple(x * scale for x in vec)


def gcd_reduce(vec: Sequence[MultiPoly]) -> tuple[MultiPoly, ...]:
    """Divide out the nonconstant common factor only; scalars are kept."""
    vec = list(vec)
    nonzero = [x for x in vec if x.terms]
    if not nonzero:
        return tuple(vec)
    g = poly_gcd_list(nonzero)
    if g.is_constant():
        return tuple(vec)
    return tuple(x.divexact(g) for x in vec)


def ff_rank_kernel(m) -> tuple[int, list[tuple[MultiPoly, ...]]]:
    """Rank over the fraction field and a polynomial kernel basis.

    Kernel vectors are normalized with :func:`normalize_vector`; one vector per
    free column, ordered by column.
    """
    rows = _rows_of(m)
    if isinstance(m, PolyMatrix):
        ncols = m.cols
    else:
        ncols = len(rows[0]) if rows else 0
    variables = rows[0][0].variables if rows and rows[0] else ()
    zero = MultiPoly((), {}).with_variables(variables)
    if not rows:
        basis = []
        for f in range(ncols):
            basis.append(tuple(MultiPoly.constant(1 if j == f else 0, variables) for j in range(ncols)))
        return 0, basis
    pivots, _ = _bareiss(rows, _poly_divide, lambda x: not x.terms, _cost, full=True)
    rank = len(pivots)
    pivot_cols = [c for _, c in pivots]
    free = [c for c in range(ncols) if c not in pivot_cols]
    d = rows[pivots[-1][0]][pivots[-1][1]] if pivots else MultiPoly.constant(1, variables)
    basis = []
    for f in free:
        vec = [zero] * ncols
        vec[f] = d
        for r, c in pivots:
            vec[c] = -rows[r][f]
        basis.append(normalize_vector(vec))
    return rank, basis


def all_minors(m, k: int) -> list[tuple[tuple[int, ...], tuple[int, ...], MultiPoly]]:
    pm = m if isinstance(m, PolyMatrix) else PolyMatrix.from_rows(m)
    if not 1 <= k <= min(pm.rows, pm.cols):
        raise ValueError(f"minor size {k} out of range for {pm.rows}x{pm.cols} matrix")
    out = []
    for rs in combinations(range(pm.rows), k):
        for cs in combinations(range(pm.cols), k):
            out.append((rs, cs, det(pm.submatrix(rs, cs))))
    return out


# purely rational helpers

def _rational_rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    a = [[Fraction(x) for x in r] for r in rows]
    ncols = len(a[0]) if a else 0
    pivcols = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivcols.append(c)
        r += 1
        if r == len(a):
            break
    return a, pivcols


def rational_rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(_rational_rref(rows)[1])


def rational_kernel(rows: Sequence[Sequence], ncols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Kernel basis with integer entries, content 1, first nonzero positive."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [tuple(Fraction(int(i == f)) for i in range(ncols)) for f in range(ncols)]
    a, pivcols = _rational_rref(rows)
    free = [c for c in range(ncols) if c not in pivcols]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in enumerate(pivcols):
            v[c] = -a[r][f]
        den = 1
        num = 0
        for x in v:
            den = lcm(den, x.denominator)
        v = [x * den for x in v]
        for x in v:
            num = gcd(num, x.numerator)
        first = next(x for x in v if x)
        s = Fraction(1 if first > 0 else -1, num)
        basis.append(tuple(x * s for x in v))
    return basis


def _sample_points(variables: Sequence[str], count: int):
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
    for s in range(count):
        yield {v: Fraction(primes[(i + 3 * s) % len(primes)] + s, 1 + i + s)
               for i, v in enumerate(variables)}


def generic_rank(m) -> int:
    """Rank over the fraction field.

    Evaluation at a point bounds the rank from below; reaching min(rows, cols)
    settles it exactly, otherwise fall back to symbolic elimination.
    """
    pm = m if isinstance(m, PolyMatrix) else PolyMatrix.from_rows(m)
    if pm.rows == 0:
        return 0
    top = min(pm.rows, pm.cols)
    variables = pm.variables
    best = 0
    for pt in _sample_points(variables, 2):
        best = max(best, rational_rank(pm.evaluate(pt)))
        if best == top:
            return best
    return ff_rank_kernel(pm)[0]

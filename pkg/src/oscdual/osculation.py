"""Jet matrices, osculating spaces, second fundamental forms and osculating duals."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .contact import LegendrianResult, SkewForm, legendrian_check, polarity
from .exactmath import MultiPoly, PolyMatrix, det, gcd_reduce, generic_rank, rational_kernel, rational_rank
from .projective import (
    LinearSubspace,
    ParamVariety,
    _point_dict,
    cross_determinants,
    hyperplane_containment,
    span_of_rows,
)


class OsculationError(ValueError):
    pass


class CertificateError(ValueError):
    """A precondition of the self-duality certificate fails."""

    reason = "certificate precondition failed"


class NotLegendrian(CertificateError):
    reason = "not Legendrian"


class DegenerateOsculation(CertificateError):
    reason = "degenerate osculation"


class ContainedInHyperplane(CertificateError):
    reason = "contained in hyperplane"


def multi_indices(k: int, s: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree <= s, by degree then reverse-lex.

    For k = 2, s = 2: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2).
    """
    out = []
    for d in range(s + 1):
        level = [e for e in itertools.product(range(d + 1), repeat=k) if sum(e) == d]
        level.sort(reverse=True)
        out.extend(level)
    return out


@dataclass(frozen=True)
class JetMatrix:
    source: ParamVariety
    order: int
    matrix: PolyMatrix
    legend: tuple[tuple[int, ...], ...]

    def label(self, i: int) -> str:
        e = self.legend[i]
        if not any(e):
            return "v"
        parts = [p if k == 1 else f"{p}^{k}" for p, k in zip(self.source.params, e) if k]
        return "d" + "d".join(parts)

    def rows_of_order(self, s: int) -> list[int]:
        return [i for i, e in enumerate(self.legend) if sum(e) == s]


def jet_matrix(x: ParamVariety, s: int) -> JetMatrix:
    if s < 0:
        raise ValueError("jet order must be nonnegative")
    legend = multi_indices(x.dim, s)
    cache: dict[tuple[int, ...], tuple[MultiPoly, ...]] = {(0,) * x.dim: x.coords}
    for e in legend:
        if e in cache:
            continue
        # differentiate the parent obtained by lowering the last nonzero exponent
        i = max(j for j, k in enumerate(e) if k)
        parent = e[:i] + (e[i] - 1,) + e[i + 1:]
        cache[e] = tuple(c.diff(x.params[i]) for c in cache[parent])
    rows = [cache[e] for e in legend]
    return JetMatrix(x, s, PolyMatrix.from_rows(rows), tuple(legend))


def osculating_space(x: ParamVariety, s: int, at) -> LinearSubspace:
    values = _point_dict(x.params, at)
    base = [c.evaluate(values) for c in x.coords]
    if not any(base):
        raise OsculationError("base point is undefined at these parameter values")
    return span_of_rows(jet_matrix(x, s).matrix, values)


def osc_dim(x: ParamVariety, s: int, at) -> int:
    """Projective dimension of Osc^s at ``at``."""
    return osculating_space(x, s, at).projective_dim


def generic_osc_dim(x: ParamVariety, s: int) -> int:
    return generic_rank(jet_matrix(x, s).matrix) - 1


@dataclass(frozen=True)
class QuadFormSpace:
    basis: tuple[tuple[tuple[Fraction, ...], ...], ...]
    dim: int
    params: tuple[str, ...] = ()

    def as_polynomials(self) -> list[MultiPoly]:
        """Each form as sum Q_ij t_i t_j in the tangent variables."""
        out = []
        for q in self.basis:
            p = MultiPoly.constant(0, self.params)
            for i, a in enumerate(self.params):
                for j, b in enumerate(self.params):
                    if q[i][j]:
                        p = p + MultiPoly.var(a, self.params) * MultiPoly.var(b, self.params) * q[i][j]
            out.append(p)
        return out


def second_fundamental_form(x: ParamVariety, at) -> QuadFormSpace:
    """Quadratic forms sum_ij (h . d_i d_j v) t_i t_j for hyperplanes h through T_pX."""
    values = _point_dict(x.params, at)
    jet = jet_matrix(x, 2)
    ev = jet.matrix.evaluate(values)
    first = [ev[i] for i, e in enumerate(jet.legend) if sum(e) <= 1]
    if rational_rank(first) < x.dim + 1:
        raise OsculationError("not an immersion at this point")
    k = x.dim
    second = {}
    for i, e in enumerate(jet.legend):
        if sum(e) == 2:
            idx = [j for j, m in enumerate(e) for _ in range(m)]
            second[tuple(idx)] = ev[i]
    hyperplanes = rational_kernel(first, len(x.coords))
    forms = []
    for h in hyperplanes:
        q = [[Fraction(0)] * k for _ in range(k)]
        for a in range(k):
            for b in range(k):
                row = second[tuple(sorted((a, b)))]
                q[a][b] = sum((hc * rc for hc, rc in zip(h, row)), Fraction(0))
        forms.append(q)
    flat = [[q[a][b] for a in range(k) for b in range(a, k)] for q in forms]
    basis = []
    for q, f in zip(forms, flat):
        if rational_rank([g for g in (_flat(b) for b in basis)] + [f]) > len(basis):
            basis.append(tuple(tuple(r) for r in q))
    return QuadFormSpace(tuple(basis), len(basis), x.params)


def _flat(q):
    k = len(q)
    return [q[a][b] for a in range(k) for b in range(a, k)]


def _independent_rows(m: PolyMatrix) -> list[int]:
    chosen: list[int] = []
    for i in range(m.rows):
        cand = chosen + [i]
        if generic_rank(m.submatrix(cand, range(m.cols))) == len(cand):
            chosen = cand
    return chosen


def osculating_dual(x: ParamVariety) -> ParamVariety:
    """Second osculating hyperplanes h(t), as signed maximal minors of the jet matrix.

    h_j = (-1)^j * minor deleting column j, taken over a generically
    independent choice of 2k+1 jet rows, then gcd-reduced.
    """
    k = x.dim
    if len(x.coords) != 2 * k + 2:
        raise OsculationError(f"osculating duality needs a {k}-fold in P^{2 * k + 1}")
    jet = jet_matrix(x, 2)
    rows = _independent_rows(jet.matrix)
    if len(rows) != 2 * k + 1:
        raise OsculationError(
            f"generic second osculating space has projective dimension {len(rows) - 1}, "
            f"not a hyperplane ({2 * k})")
    sub = jet.matrix.submatrix(rows, range(jet.matrix.cols))
    ncols = sub.cols
    h = []
    for j in range(ncols):
        minor = det(sub.submatrix(range(sub.rows), [c for c in range(ncols) if c != j]))
        h.append(minor if j % 2 == 0 else -minor)
    return ParamVariety(x.params, gcd_reduce(h), f"dual({x.name})" if x.name else "")


@dataclass
class SelfDualReport:
    legendrian: bool
    osc2_generic_dim: int
    in_hyperplane: bool
    selfdual: bool
    residuals: list[MultiPoly] = field(default_factory=list)
    dual: ParamVariety | None = None
    polar: tuple[MultiPoly, ...] = ()

    def to_dict(self) -> dict:
        return {
            "legendrian": self.legendrian,
            "osc2_generic_dim": self.osc2_generic_dim,
            "in_hyperplane": self.in_hyperplane,
            "selfdual": self.selfdual,
            "residuals": [str(r) for r in self.residuals],
        }


def selfdual_certificate(x: ParamVariety, b: SkewForm) -> SelfDualReport:
    """Certify Osc^2_p X = p^perp identically in the parameters.

    Raises a :class:`CertificateError` subclass naming the failed precondition.
    """
    leg: LegendrianResult = legendrian_check(x, b)
    if not leg.legendrian:
        raise NotLegendrian(
            "not Legendrian: " + ", ".join(f"{k} = {v}" for k, v in leg.nonzero_residuals().items())
            if leg.nonzero_residuals() else f"not Legendrian: {x.dim} parameters, need {b.n - 1}")
    if hyperplane_containment(x):
        raise ContainedInHyperplane("contained in hyperplane")
    dim2 = generic_osc_dim(x, 2)
    if dim2 != 2 * b.n - 2:
        raise DegenerateOsculation(
            f"degenerate osculation: generic dim Osc^2 = {dim2}, expected {2 * b.n - 2}")
    dual = osculating_dual(x)
    polar = polarity(b).apply_vector(x.coords)
    residuals = [r for r in cross_determinants(dual.coords, polar) if r.terms]
    return SelfDualReport(True, dim2, False, not residuals, residuals, dual, polar)


def annihilation_residuals(h: Sequence[MultiPoly], x: ParamVariety, s: int = 2) -> list[MultiPoly]:
    """h . (every jet row up to order s); all zero for an osculating dual."""
    jet = jet_matrix(x, s)
    out = []
    for i in range(jet.matrix.rows):
        row = jet.matrix.row(i)
        total = MultiPoly.constant(0, x.params)
        for a, b in zip(h, row):
            total = total + a * b
        out.append(total)
    return out

"""The birational map between the incidence variety P*(T P^n) and P^{2n-1}.

``theta`` sends ((x), (y)) with sum x_i y_i = 0 to

    z0 = x0 y1,  z1 = (x1 y1 - x0 y0)/2,
    z_{2k-2} = x_k y1,  z_{2k-1} = -x0 y_k / 2   (2 <= k <= n),

and ``beta`` is its inverse.  Conormal lifts of plane curves pushed through
``theta`` are Legendrian curves in P^3.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from fractions import Fraction
from typing import Sequence

from .exactmath import (
    MultiPoly,
    PolyMatrix,
    det,
    gcd_reduce,
    generic_rank,
    poly_gcd,
    resultant,
    squarefree_part,
)
from .projective import ParamVariety, ProjPoint, cross_determinants, proj_equal
from .contact import standard_forms

HALF = Fraction(1, 2)


class CenterError(ValueError):
    """The point lies in the indeterminacy locus x0 = y1 = 0."""


class GenericityInputError(ValueError):
    pass


@dataclass(frozen=True)
class IncidencePoint:
    x: ProjPoint
    y: ProjPoint

    def __post_init__(self):
        if self.x.ambient_dim != self.y.ambient_dim:
            raise ValueError("x and y live in spaces of different dimension")

    def pairing(self) -> MultiPoly:
        total = MultiPoly()
        for a, b in zip(self.x.coords, self.y.coords):
            total = total + a * b
        return total

    def check(self) -> "IncidencePoint":
        if self.pairing().terms:
            raise ValueError(f"point is not incident: sum x_i y_i = {self.pairing()}")
        return self

    @property
    def n(self) -> int:
        return self.x.ambient_dim


def theta_coords(x: Sequence[MultiPoly], y: Sequence[MultiPoly]) -> list[MultiPoly]:
    n = len(x) - 1
    z = [x[0] * y[1], (x[1] * y[1] - x[0] * y[0]) * HALF]
    for k in range(2, n + 1):
        z.append(x[k] * y[1])
        z.append(x[0] * y[k] * (-HALF))
    return z


def beta_coords(z: Sequence[MultiPoly]) -> tuple[list[MultiPoly], list[MultiPoly]]:
    n = len(z) // 2
    s = MultiPoly()
    for j in range(1, n):
        s = s + z[2 * j] * z[2 * j + 1]
    x = [z[0] * z[0], z[0] * z[1] + s]
    y = [-z[0] * z[1] + s, z[0] * z[0]]
    for k in range(2, n + 1):
        x.append(z[0] * z[2 * k - 2])
        y.append(z[0] * z[2 * k - 1] * -2)
    return x, y


def theta_point(p: IncidencePoint, n: int | None = None) -> ProjPoint:
    n = p.n if n is None else n
    if p.n != n:
        raise ValueError(f"incidence point lives over P^{p.n}, not P^{n}")
    x, y = p.x.coords, p.y.coords
    if not x[0].terms and not y[1].terms:
        raise CenterError("point lies in the center x0 = y1 = 0")
    z = theta_coords(x, y)
    if all(not c.terms for c in z):
        raise CenterError("theta is undefined at this point")
    return ProjPoint(z)


def beta_point(z: ProjPoint) -> IncidencePoint:
    if z.ambient_dim % 2 == 0:
        raise ValueError("beta needs an odd-dimensional projective space")
    x, y = beta_coords(z.coords)
    if all(not c.terms for c in x) or all(not c.terms for c in y):
        raise CenterError("beta is undefined at this point")
    return IncidencePoint(ProjPoint(x), ProjPoint(y))


def _symbols(prefix: str, count: int, start: int = 0):
    names = tuple(f"{prefix}{i}" for i in range(start, start + count))
    return names, [MultiPoly.var(v, names) for v in names]


@dataclass
class PullbackResult:
    n: int
    ok: bool
    pulled_back: dict[str, MultiPoly]
    omega: dict[str, MultiPoly]
    residuals: dict[str, MultiPoly] = field(default_factory=dict)


def verify_pullback(n: int) -> PullbackResult:
    """Check beta^* eta = omega on the chart z0 = 1, symbolically."""
    if not 2 <= n <= 4:
        raise ValueError("verify_pullback supports 2 <= n <= 4")
    names = tuple(f"z{i}" for i in range(1, 2 * n))
    one = MultiPoly.constant(1, names)
    z = [one] + [MultiPoly.var(v, names) for v in names]
    x, y = beta_coords(z)
    if not (y[1] == 1 and x[0] == 1):
        raise AssertionError("beta does not land in the x0 = y1 = 1 chart")
    xi = {j: y[j] for j in range(2, n + 1)}  # y_j / y_1 with y_1 = 1
    # eta = dx1 + sum_j xi_j dx_j, pulled back: coefficients on dz_i
    pulled = {v: MultiPoly.constant(0, names) for v in names}
    for v in names:
        pulled[v] = pulled[v] + x[1].diff(v)
        for j in range(2, n + 1):
            pulled[v] = pulled[v] + xi[j] * x[j].diff(v)
    omega, _ = standard_forms(n)
    target = {v: c.with_variables(names) for v, c in omega.as_dict().items()}
    residuals = {v: pulled[v] - target[v] for v in names}
    ok = all(not r.terms for r in residuals.values())
    return PullbackResult(n, ok, pulled, target, residuals)


def theta_after_beta(n: int) -> list[MultiPoly]:
    """Cross-determinants of theta(beta(z)) against z; all zero when the round trip holds."""
    _, z = _symbols("z", 2 * n)
    x, y = beta_coords(z)
    return cross_determinants(theta_coords(x, y), z)


def reduce_mod_incidence(p: MultiPoly, n: int) -> MultiPoly:
    """Eliminate y0 = -(sum_{i>=1} x_i y_i)/x0, cleared by the matching power of x0."""
    xs, xv = _symbols("x", n + 1)
    ys, yv = _symbols("y", n + 1)
    allv = xs + ys
    p = p.with_variables(allv) if set(p.used_variables()) <= set(allv) else p
    rest = MultiPoly.constant(0, allv)
    for i in range(1, n + 1):
        rest = rest + xv[i].with_variables(allv) * yv[i].with_variables(allv)
    x0 = xv[0].with_variables(allv)
    d = p.degree("y0")
    out = MultiPoly.constant(0, allv)
    for k, c in p.coefficients("y0").items():
        out = out + c * (-rest) ** k * x0 ** (d - k)
    return out


def beta_after_theta(n: int) -> list[MultiPoly]:
    """Residuals of beta(theta(x, y)) ~ (x, y) modulo the incidence relation."""
    xs, xv = _symbols("x", n + 1)
    ys, yv = _symbols("y", n + 1)
    allv = xs + ys
    xv = [v.with_variables(allv) for v in xv]
    yv = [v.with_variables(allv) for v in yv]
    bx, by = beta_coords(theta_coords(xv, yv))
    out = []
    for r in cross_determinants(bx, xv) + cross_determinants(by, yv):
        red = reduce_mod_incidence(r, n)
        if red.terms:
            out.append(red)
    return out


def center_vanishes(n: int) -> bool:
    """Every theta coordinate vanishes on x0 = y1 = 0."""
    xs, xv = _symbols("x", n + 1)
    ys, yv = _symbols("y", n + 1)
    allv = xs + ys
    xv = [v.with_variables(allv) for v in xv]
    yv = [v.with_variables(allv) for v in yv]
    z = theta_coords(xv, yv)
    return all(not c.subs({"x0": 0, "y1": 0}).terms for c in z)


def center_is_exact(n: int) -> bool:
    """Off x0 = y1 = 0 the theta coordinates have no common zero.

    With x0 = 1 the coordinates are linear in y and some maximal minor of
    their coefficient matrix is a nonzero constant, forcing y = 0; likewise
    for y1 = 1 and x.
    """
    xs, xv = _symbols("x", n + 1)
    ys, yv = _symbols("y", n + 1)
    allv = xs + ys
    z = theta_coords([v.with_variables(allv) for v in xv], [v.with_variables(allv) for v in yv])
    for fixed, unknowns in (("x0", ys), ("y1", xs)):
        forms = [c.subs({fixed: 1}) for c in z]
        mat = [[f.diff(u) for u in unknowns] for f in forms]
        if not any(_constant_nonzero(det(PolyMatrix.from_rows([mat[r] for r in rows])))
                   for rows in combinations(range(len(forms)), len(unknowns))):
            return False
    return True


def _constant_nonzero(p: MultiPoly) -> bool:
    return bool(p.terms) and p.is_constant()


# conormal lifts

def cross(u: Sequence[MultiPoly], w: Sequence[MultiPoly]) -> list[MultiPoly]:
    return [u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]]


@dataclass(frozen=True)
class ConormalLift:
    base: ParamVariety
    gamma: tuple[MultiPoly, ...]
    ell: tuple[MultiPoly, ...]
    is_line: bool = False

    def incidence_residuals(self) -> list[MultiPoly]:
        t = self.base.params[0]
        r1 = sum((a * b for a, b in zip(self.ell, self.gamma)), MultiPoly())
        r2 = sum((a * b.diff(t) for a, b in zip(self.ell, self.gamma)), MultiPoly())
        return [r1, r2]


def _require_plane_curve(c: ParamVariety):
    if c.ambient_dim != 2 or c.dim != 1:
        raise GenericityInputError("expected a curve in P^2 with one parameter")


def conormal_lift(c: ParamVariety) -> ConormalLift:
    _require_plane_curve(c)
    t = c.params[0]
    gamma = c.coords
    d = [g.diff(t) for g in gamma]
    ell = cross(gamma, d)
    if all(not e.terms for e in ell):
        raise GenericityInputError("parametrization is constant; no tangent lines")
    ell = gcd_reduce(ell)
    is_line = all(e.is_constant() for e in ell)
    return ConormalLift(c, tuple(gamma), tuple(ell), is_line)


def theta_pushforward(lift: ConormalLift, n: int = 2) -> ParamVariety:
    if n != 2:
        raise ValueError("pushforward of plane-curve lifts lands in P^3 (n = 2)")
    x, y = lift.gamma, lift.ell
    if not x[0].terms and not y[1].terms:
        raise CenterError("conormal lift lies in the center x0 = y1 = 0")
    z = theta_coords(list(x), list(y))
    if all(not c.terms for c in z):
        raise CenterError("conormal lift lies in the center x0 = y1 = 0")
    name = f"theta({lift.base.name})" if lift.base.name else ""
    return ParamVariety(lift.base.params, gcd_reduce(z), name)


# genericity

LEMMA_A_TEXT = {
    1: "X meets the line {x0=0} transversally",
    2: "tangents at the points of X on {x0=0} avoid (0:1:0)",
    3: "tangents at inflection points avoid (0:1:0)",
    4: "X avoids the point (0:0:1)",
}
LEMMA_B_TEXT = {
    1: LEMMA_A_TEXT[1],
    2: LEMMA_A_TEXT[2],
    3: "no bitangent of X passes through (0:1:0)",
}


@dataclass
class HypothesisResult:
    index: int
    text: str
    passed: bool
    witness: str = ""

    def to_dict(self) -> dict:
        return {"index": self.index, "text": self.text, "passed": self.passed, "witness": self.witness}


@dataclass
class GenericityReport:
    lemma: str
    hypotheses: list[HypothesisResult]

    @property
    def passed(self) -> bool:
        return all(h.passed for h in self.hypotheses)

    def failures(self) -> list[int]:
        return [h.index for h in self.hypotheses if not h.passed]

    def to_dict(self) -> dict:
        return {"lemma": self.lemma, "passed": self.passed,
                "hypotheses": [h.to_dict() for h in self.hypotheses]}


@dataclass
class _Chart:
    t: str
    gamma: tuple[MultiPoly, ...]
    ell: tuple[MultiPoly, ...]
    wronskian: MultiPoly


def _chart(c: ParamVariety) -> _Chart:
    t = c.params[0]
    g = c.coords
    d1 = [x.diff(t) for x in g]
    d2 = [x.diff(t) for x in d1]
    w = det(PolyMatrix.from_rows([g, d1, d2]))
    ell = conormal_lift(c).ell
    return _Chart(t, g, ell, w)


def _charts(c: ParamVariety) -> tuple[_Chart, _Chart]:
    """The given chart and the chart at parameter infinity (t = 1/s)."""
    _require_plane_curve(c)
    t = c.params[0]
    far = c.invert_parameter(t, "s")
    return _chart(c), _chart(far)


def _at_zero(p: MultiPoly, var: str) -> Fraction:
    v = p.evaluate({var: 0})
    return v if isinstance(v, Fraction) else Fraction(0)


def _nonconstant(p: MultiPoly) -> bool:
    return p.terms != {} and not p.is_constant()


def _hyp1(fin: _Chart, inf: _Chart) -> HypothesisResult:
    x0 = fin.gamma[0]
    if not x0.terms:
        return HypothesisResult(1, LEMMA_A_TEXT[1], False, "x0 vanishes identically")
    g = poly_gcd(x0, x0.diff(fin.t)) if not x0.is_constant() else MultiPoly.constant(1)
    if _nonconstant(g):
        return HypothesisResult(1, LEMMA_A_TEXT[1], False, f"repeated factor of x0: {g}")
    x0s = inf.gamma[0]
    if _at_zero(x0s, inf.t) == 0 and _at_zero(x0s.diff(inf.t), inf.t) == 0:
        return HypothesisResult(1, LEMMA_A_TEXT[1], False, f"tangency at t = oo: x0(1/s) ~ {x0s}")
    return HypothesisResult(1, LEMMA_A_TEXT[1], True)


def _hyp2(fin: _Chart, inf: _Chart) -> HypothesisResult:
    x0, l1 = fin.gamma[0], fin.ell[1]
    if x0.is_constant() and x0.terms:
        res = MultiPoly.constant(1)
    else:
        res = resultant(x0, l1, fin.t)
    if not res.terms:
        return HypothesisResult(2, LEMMA_A_TEXT[2], False,
                                f"Res(x0, l1) = 0; common factor {poly_gcd(x0, l1)}")
    if _at_zero(inf.gamma[0], inf.t) == 0 and _at_zero(inf.ell[1], inf.t) == 0:
        return HypothesisResult(2, LEMMA_A_TEXT[2], False, "at t = oo: x0 = l1 = 0")
    return HypothesisResult(2, LEMMA_A_TEXT[2], True, f"Res(x0, l1) = {res}")


def _hyp3_inflection(fin: _Chart, inf: _Chart) -> HypothesisResult:
    w, l1 = fin.wronskian, fin.ell[1]
    g = poly_gcd(w, l1)
    if _nonconstant(g) or not g.terms:
        return HypothesisResult(3, LEMMA_A_TEXT[3], False, f"gcd(W, l1) = {g}")
    if _at_zero(inf.wronskian, inf.t) == 0 and _at_zero(inf.ell[1], inf.t) == 0:
        return HypothesisResult(3, LEMMA_A_TEXT[3], False, "inflection at t = oo with l1 = 0")
    return HypothesisResult(3, LEMMA_A_TEXT[3], True, f"W = {w}")


def _hyp4(fin: _Chart, inf: _Chart) -> HypothesisResult:
    x0, x1 = fin.gamma[0], fin.gamma[1]
    if not x0.terms or not x1.terms:
        return HypothesisResult(4, LEMMA_A_TEXT[4], False, "x0 or x1 vanishes identically")
    res = resultant(x0, x1, fin.t)
    if not res.terms:
        return HypothesisResult(4, LEMMA_A_TEXT[4], False,
                                f"Res(x0, x1) = 0; common factor {poly_gcd(x0, x1)}")
    if _at_zero(inf.gamma[0], inf.t) == 0 and _at_zero(inf.gamma[1], inf.t) == 0:
        return HypothesisResult(4, LEMMA_A_TEXT[4], False, "curve passes through (0:0:1) at t = oo")
    return HypothesisResult(4, LEMMA_A_TEXT[4], True, f"Res(x0, x1) = {res}")


def genericity_A(c: ParamVariety) -> GenericityReport:
    fin, inf = _charts(c)
    return GenericityReport("A", [_hyp1(fin, inf), _hyp2(fin, inf),
                                  _hyp3_inflection(fin, inf), _hyp4(fin, inf)])


def _ratio_shift(f: MultiPoly, l0: MultiPoly, l2: MultiPoly, t: str) -> int:
    """Smallest c >= 0 with l2 + c*l0 nonzero at every root of f."""
    c = 0
    while True:
        m = l2 + l0 * c
        if m.terms and (m.is_constant() or resultant(f, m, t).terms):
            return c
        c += 1


def bitangent_eliminant(fin: _Chart) -> MultiPoly:
    """Polynomial in u whose roots are repeated tangent-line slopes through (0:1:0).

    The tangents through (0:1:0) sit at the distinct roots r of l1, and are
    the lines (l0(r) : 0 : l2(r)).  With m = l2 + c*l0 nonzero at those roots,
    Q(u) = Res_t(f(t), u*m(t) - l0(t)) has the slopes l0(r)/m(r) as roots, so
    two distinct roots r share a tangent exactly when Q has a repeated root.
    Returns gcd(Q, Q'), constant when no bitangent passes through (0:1:0).
    """
    t = fin.t
    l0, l1, l2 = fin.ell
    if l1.is_constant():
        return MultiPoly.constant(1)
    f = squarefree_part(l1, t)
    c = _ratio_shift(f, l0, l2, t)
    names = (t, "u")
    u = MultiPoly.var("u", names)
    g = u * (l2 + l0 * c).with_variables(names) - l0.with_variables(names)
    q = resultant(f.with_variables(names), g, t).with_variables(("u",))
    if q.degree("u") <= 1:
        return MultiPoly.constant(1, ("u",))
    return poly_gcd(q, q.diff("u"))


def _hyp3_bitangent(fin: _Chart, inf: _Chart) -> HypothesisResult:
    if not fin.ell[1].terms:
        return HypothesisResult(3, LEMMA_B_TEXT[3], False, "every tangent passes through (0:1:0)")
    e = bitangent_eliminant(fin)
    if _nonconstant(e):
        return HypothesisResult(3, LEMMA_B_TEXT[3], False,
                                f"two tangents through (0:1:0) share slope u with {e} = 0")
    if _at_zero(inf.ell[1], inf.t) == 0:
        far = [_at_zero(p, inf.t) for p in inf.ell]
        # tangent at t = oo passes through (0:1:0): compare with finite tangents through it
        other = fin.ell[0] * far[2] - fin.ell[2] * far[0]
        g = poly_gcd(fin.ell[1], other) if other.terms else fin.ell[1]
        if _nonconstant(g):
            return HypothesisResult(3, LEMMA_B_TEXT[3], False,
                                    f"tangent at t = oo is also tangent where {g} = 0")
    return HypothesisResult(3, LEMMA_B_TEXT[3], True)


def genericity_B(c: ParamVariety) -> GenericityReport:
    fin, inf = _charts(c)
    h1 = _hyp1(fin, inf)
    h2 = _hyp2(fin, inf)
    h1.text, h2.text = LEMMA_B_TEXT[1], LEMMA_B_TEXT[2]
    return GenericityReport("B", [h1, h2, _hyp3_bitangent(fin, inf)])


# degrees

def _covectors(size: int, count: int):
    fib = [1, 1]
    while len(fib) < size:
        fib.append(fib[-1] + fib[-2])
    yield tuple(fib[:size])
    primes = [1, 2, 3, 5, 7, 11, 13, 17, 19, 23]
    yield tuple(primes[:size]) if size <= len(primes) else tuple(range(1, size + 1))
    for i in range(count):
        yield tuple((i + 3) ** j for j in range(size))


def section_root_count(x: ParamVariety, h: Sequence[int]) -> int:
    """Distinct zeros on the projective parameter line of h . v."""
    t = x.params[0]
    d = max(c.degree(t) for c in x.coords)
    f = sum((c * a for c, a in zip(x.coords, h)), MultiPoly.constant(0, x.params))
    if not f.terms:
        return 0
    finite = squarefree_part(f, t).degree(t) if f.degree(t) > 0 else 0
    at_infinity = 1 if f.degree(t) < d else 0
    return finite + at_infinity


def parametric_curve_degree(x: ParamVariety) -> int:
    """Degree of the image of a (proper) rational curve parametrization.

    Homogenize to the common degree after removing common factors; cross-check
    against distinct zero counts of hyperplane sections for fixed covectors.
    """
    if x.dim != 1:
        raise ValueError("degree computation expects a curve")
    red = x.reduced()
    t = red.params[0]
    d = max(c.degree(t) for c in red.coords)
    if d <= 0:
        return 0
    best = 0
    for h in _covectors(len(red.coords), 16):
        best = max(best, section_root_count(red, h))
        if best == d:
            return d
    raise ArithmeticError(f"hyperplane sections never reach degree {d}; best {best}")


@dataclass(frozen=True)
class ExpectedDegrees:
    nodes: int
    dual_degree: int
    legendrian_degree: int


def expected_degrees(d: int, g: int) -> ExpectedDegrees:
    if d < 2:
        raise ValueError("degree must be at least 2")
    top = (d - 1) * (d - 2) // 2
    if not 0 <= g <= top:
        raise ValueError(f"genus {g} out of range 0..{top} for degree {d}")
    nodes = top - g
    dual = d * (d - 1) - 2 * nodes
    leg = d + dual
    assert leg == 3 * d + 2 * g - 2
    return ExpectedDegrees(nodes, dual, leg)


def plane_curve_class(c: ParamVariety) -> int:
    """Degree of the dual curve, from the parametrized tangent lines."""
    lift = conormal_lift(c)
    return parametric_curve_degree(ParamVariety(c.params, lift.ell))


def is_line(c: ParamVariety) -> bool:
    return generic_rank(PolyMatrix.from_rows([c.coords, [x.diff(c.params[0]) for x in c.coords]])) < 2 \
        or conormal_lift(c).is_line

"""Explicit families: monomial curves, hypersurface curves, and V_k."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .contact import SkewForm
from .exactmath import MultiPoly, normalize_vector, parse_poly
from .osculation import osculating_dual
from .projective import ParamVariety, ProjMap, apply_map, proj_equal


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class MonomialSpec:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if not 0 < self.a < self.b < self.c:
            raise CatalogError(f"need 0 < a < b < c, got ({self.a}, {self.b}, {self.c})")
        if gcd(gcd(self.a, self.b), self.c) != 1:
            raise CatalogError(f"exponents ({self.a}, {self.b}, {self.c}) are not coprime")

    @property
    def symmetric(self) -> bool:
        return self.c == self.a + self.b


def monomial_specs(max_c: int):
    for c in range(3, max_c + 1):
        for b in range(2, c):
            for a in range(1, b):
                if gcd(gcd(a, b), c) == 1:
                    yield MonomialSpec(a, b, c)


def monomial_curve(s: MonomialSpec) -> ParamVariety:
    t = MultiPoly.var("t")
    return ParamVariety(("t",), (MultiPoly.constant(1, ("t",)), t ** s.a, t ** s.b, t ** s.c),
                        f"monomial:{s.a},{s.b},{s.c}")


def monomial_dual_exponents(s: MonomialSpec) -> tuple[tuple[int, int, int, int], bool]:
    return (0, s.c - s.b, s.c - s.a, s.c), s.symmetric


def monomial_contact_form(s: MonomialSpec) -> SkewForm | None:
    if not s.symmetric:
        return None
    a, b, c = s.a, s.b, s.c
    m = ((0, 0, 0, a - b),
         (0, 0, c, 0),
         (0, -c, 0, 0),
         (b - a, 0, 0, 0))
    return SkewForm(2, m)


def exponents_of(x: ParamVariety) -> tuple[int, ...]:
    """Exponents of a curve whose coordinates are single monomials in t.

    Divides by the common monomial first; zero coordinates are rejected.
    """
    exps = []
    for c in x.coords:
        if len(c.terms) != 1:
            raise CatalogError(f"coordinate {c} is not a monomial")
        exps.append(next(iter(c.terms))[0])
    low = min(exps)
    return tuple(e - low for e in exps)


def monomial_dual_witness(s: MonomialSpec):
    """Self-duality witness for C_{a,b,c}.

    Returns (dual, exponent_curve, map) where ``map`` scales the dual and
    reverses coordinates so that the result is (1 : t^{c-b} : t^{c-a} : t^c);
    reversing again and substituting t = 1/s gives back the curve.
    """
    curve = monomial_curve(s)
    dual = osculating_dual(curve)
    coeffs = [next(iter(c.terms.values())) for c in dual.coords]
    scale = ProjMap.diagonal([1 / c for c in coeffs])
    witness = ProjMap.reversal(4) @ scale
    exponent_curve = apply_map(witness, dual)
    return dual, exponent_curve, witness


def certify_monomial_selfdual(s: MonomialSpec) -> bool:
    curve = monomial_curve(s)
    _, exponent_curve, _ = monomial_dual_witness(s)
    expected = (0, s.c - s.b, s.c - s.a, s.c)
    if exponents_of(exponent_curve) != expected:
        return False
    back = apply_map(ProjMap.reversal(4), exponent_curve).invert_parameter("t")
    return proj_equal(back, curve)


def _is_homogeneous(f: MultiPoly) -> int:
    degrees = {sum(e) for e in f.terms}
    if len(degrees) != 1:
        raise CatalogError(f"{f} is not homogeneous")
    return degrees.pop()


def hypersurface_family_curve(n: int, F: MultiPoly | str, variables=None) -> ParamVariety:
    """Conormal image of x1 + F(x2..xn) = 0 under the Bryant map.

    Coordinates (1, (d-2)/2 F, x2, -F_2/2, ..., xn, -F_n/2).
    """
    if n < 2:
        raise CatalogError("n must be at least 2")
    if variables is None:
        variables = tuple(f"x{k}" for k in range(2, n + 1))
    variables = tuple(variables)
    if len(variables) != n - 1:
        raise CatalogError(f"need {n - 1} variables, got {variables}")
    if isinstance(F, str):
        F = parse_poly(F, variables)
    F = F.with_variables(variables)
    d = _is_homogeneous(F)
    if d < 3:
        raise CatalogError(f"degree {d} < 3")
    coords = [MultiPoly.constant(1, variables), F * Fraction(d - 2, 2)]
    for v in variables:
        coords.append(MultiPoly.var(v, variables))
        coords.append(F.diff(v) * Fraction(-1, 2))
    return ParamVariety(variables, tuple(coords), f"hypersurface:{n}:{F}")


def v_family(k: int) -> ParamVariety:
    if k < 2:
        raise CatalogError("V_k needs k >= 2")
    ts = tuple(f"t{i}" for i in range(1, k + 1))
    t = [MultiPoly.var(name, ts) for name in ts]
    cubic = sum((ti ** 3 for ti in t), MultiPoly.constant(0, ts))
    coords = [MultiPoly.constant(1, ts)] + t + [ti ** 2 for ti in t] + [cubic]
    return ParamVariety(ts, tuple(coords), f"vfamily:{k}")


@dataclass
class ShearWitness:
    dual: ParamVariety
    normalized: ParamVariety
    correction: MultiPoly
    map: ProjMap


def v_family_witness(k: int) -> ShearWitness:
    """Map the osculating dual of V_k back onto V_k.

    Each dual coordinate is matched to the coordinate of V_k it is a constant
    multiple of; the remaining coordinate is c * (cubic) + P, and the shear
    subtracting P finishes the map.
    """
    v = v_family(k)
    dual = osculating_dual(v)
    targets = list(v.coords)
    size = len(targets)
    perm: dict[int, tuple[int, Fraction]] = {}
    leftover = []
    for j, h in enumerate(dual.coords):
        match = None
        for i, target in enumerate(targets[:-1]):
            if i in [p[0] for p in perm.values()]:
                continue
            ratio = _constant_ratio(h, target)
            if ratio is not None:
                match = (i, ratio)
                break
        if match is None:
            leftover.append(j)
        else:
            perm[j] = match
    if len(leftover) != 1:
        raise CatalogError("dual coordinates do not have the expected shape")
    last = leftover[0]
    h = dual.coords[last]
    cubic = targets[-1]
    top = {e: c for e, c in h.terms.items() if sum(e) == 3}
    lead = _constant_ratio(MultiPoly(h.variables, top), cubic)
    if lead is None:
        raise CatalogError(f"cubic part of {h} is not a multiple of {cubic}")
    correction = h * (1 / lead) - cubic
    # rows of the map: target slot i receives dual coordinate j / ratio
    m = [[Fraction(0)] * size for _ in range(size)]
    for j, (i, ratio) in perm.items():
        m[i][j] = 1 / ratio
    m[size - 1][last] = 1 / lead
    for j, (i, ratio) in perm.items():
        coeff = _coefficient_on(correction, targets[i])
        if coeff:
            m[size - 1][j] -= coeff / ratio
    for e, c in correction.terms.items():
        if not any(_constant_ratio(MultiPoly(correction.variables, {e: 1}), targets[i]) is not None
                   for i in range(size - 1)):
            raise CatalogError(f"correction {correction} is not in the span of t_i, t_i^2")
    shear = ProjMap(tuple(tuple(r) for r in m))
    normalized = ParamVariety(dual.params, tuple(c * (1 / lead) for c in dual.coords), dual.name)
    return ShearWitness(dual, normalized, correction, shear)


def _constant_ratio(h: MultiPoly, target: MultiPoly) -> Fraction | None:
    if not h.terms or not target.terms:
        return None
    h, target = h._align(target)
    if set(h.terms) != set(target.terms):
        return None
    ratios = {h.terms[e] / target.terms[e] for e in h.terms}
    return ratios.pop() if len(ratios) == 1 else None


def _coefficient_on(p: MultiPoly, monomial: MultiPoly) -> Fraction:
    p, monomial = p._align(monomial)
    (e,) = monomial.terms
    return p.terms.get(e, Fraction(0)) / monomial.terms[e]


def certify_v_family_selfdual(k: int) -> bool:
    w = v_family_witness(k)
    return proj_equal(apply_map(w.map, w.dual), v_family(k))


_CATALOG_RE = {
    "monomial": re.compile(r"monomial:(\d+),(\d+),(\d+)\Z"),
    "hypersurface": re.compile(r"hypersurface:(\d+):(.+)\Z"),
    "vfamily": re.compile(r"vfamily:(\d+)\Z"),
}


def from_name(name: str) -> ParamVariety:
    """Resolve ``monomial:a,b,c``, ``hypersurface:n:F`` or ``vfamily:k``."""
    name = name.strip()
    m = _CATALOG_RE["monomial"].match(name)
    if m:
        return monomial_curve(MonomialSpec(*map(int, m.groups())))
    m = _CATALOG_RE["hypersurface"].match(name)
    if m:
        n = int(m.group(1))
        return hypersurface_family_curve(n, m.group(2))
    m = _CATALOG_RE["vfamily"].match(name)
    if m:
        return v_family(int(m.group(1)))
    raise CatalogError(f"unknown catalog entry {name!r}")


def canonical_coords(x: ParamVariety):
    return normalize_vector(x.coords)

"""Skew forms, contact structures on P^{2n-1}, and Legendrian certificates."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactmath import MultiPoly, rational_kernel, rational_rank
from .projective import (
    DimensionMismatch,
    LinearSubspace,
    ParamVariety,
    ProjMap,
    ProjPoint,
    dot,
    hyperplane_containment,
)

MAX_CONTACT_N = 4


class DegenerateForm(ValueError):
    pass


def pfaffian(a):
    """Pfaffian by expansion along the first row; works over any commutative ring."""
    n = len(a)
    if n % 2:
        return 0 * a[0][0] if n else 1
    return _pf(a, tuple(range(n)))


def _pf(a, idx):
    if not idx:
        return 1
    if len(idx) == 2:
        return a[idx[0]][idx[1]]
    i = idx[0]
    total = 0
    for k, j in enumerate(idx[1:]):
        entry = a[i][j]
        if not entry:
            continue
        rest = tuple(x for x in idx[1:] if x != j)
        term = entry * _pf(a, rest)
        total = total + term if k % 2 == 0 else total - term
    return total


@dataclass(frozen=True)
class SkewForm:
    n: int
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(Fraction(x) for x in row) for row in self.matrix)
        size = 2 * self.n
        if self.n < 1 or len(m) != size or any(len(r) != size for r in m):
            raise ValueError(f"skew form for n={self.n} needs a {size}x{size} matrix")
        for i in range(size):
            for j in range(size):
                if m[i][j] != -m[j][i]:
                    raise ValueError(f"matrix is not antisymmetric at ({i}, {j})")
        object.__setattr__(self, "matrix", m)

    @property
    def size(self) -> int:
        return 2 * self.n

    def pfaffian(self) -> Fraction:
        return Fraction(pfaffian(self.matrix))

    def is_nondegenerate(self) -> bool:
        return self.pfaffian() != 0

    def pair(self, u: Sequence, w: Sequence):
        """B(u, w) = u^T B w; entries may be numbers or polynomials."""
        total = 0
        for i, ui in enumerate(u):
            if not ui:
                continue
            row = self.matrix[i]
            for j, wj in enumerate(w):
                if row[j] and wj:
                    total = total + ui * wj * row[j]
        return total

    def covector(self, v: Sequence) -> list:
        """The functional B(v, .) as a coordinate vector."""
        size = self.size
        return [sum((v[i] * self.matrix[i][j] for i in range(size) if self.matrix[i][j] and v[i]),
                    0) for j in range(size)]

    def to_dict(self) -> dict:
        return {"n": self.n, "matrix": [[str(x) for x in r] for r in self.matrix]}

    @classmethod
    def from_dict(cls, data) -> "SkewForm":
        return cls(int(data["n"]), tuple(tuple(Fraction(str(x)) for x in r) for r in data["matrix"]))

    @classmethod
    def from_json(cls, text: str) -> "SkewForm":
        return cls.from_dict(json.loads(text))


def standard_B(n: int) -> SkewForm:
    if n < 1:
        raise ValueError("n must be at least 1")
    size = 2 * n
    m = [[Fraction(0)] * size for _ in range(size)]
    for i in range(n):
        m[2 * i][2 * i + 1] = Fraction(1)
        m[2 * i + 1][2 * i] = Fraction(-1)
    return SkewForm(n, tuple(tuple(r) for r in m))


@dataclass(frozen=True)
class ChartOneForm:
    """A 1-form on an affine chart: sum of coeffs[i] * d(coordinates[i])."""

    chart: str
    coordinates: tuple[str, ...]
    coeffs: tuple[MultiPoly, ...]

    def __post_init__(self):
        if all(not c.terms for c in self.coeffs):
            raise ValueError("one-form has no nonzero coefficient")

    def as_dict(self) -> dict[str, MultiPoly]:
        return dict(zip(self.coordinates, self.coeffs))

    def __str__(self):
        parts = []
        for name, c in zip(self.coordinates, self.coeffs):
            if not c.terms:
                continue
            if c == 1:
                parts.append(f"d{name}")
            elif c == -1:
                parts.append(f"-d{name}")
            elif len(c.terms) == 1:
                parts.append(f"{c}*d{name}")
            else:
                parts.append(f"({c})*d{name}")
        return " + ".join(parts).replace("+ -", "- ")


def standard_forms(n: int) -> tuple[ChartOneForm, ChartOneForm]:
    """``omega`` on {z0 = 1} and ``eta`` on {x0 = y0 = 1}, xi_j = y_j / y_1."""
    if n < 2:
        raise ValueError("standard forms need n >= 2")
    zs = tuple(f"z{i}" for i in range(1, 2 * n))
    z = {name: MultiPoly.var(name, zs) for name in zs}
    one = MultiPoly.constant(1, zs)
    zero = MultiPoly.constant(0, zs)
    coeffs = {name: zero for name in zs}
    coeffs["z1"] = one
    for i in range(1, n):
        coeffs[f"z{2 * i + 1}"] = coeffs[f"z{2 * i + 1}"] + z[f"z{2 * i}"]
        coeffs[f"z{2 * i}"] = coeffs[f"z{2 * i}"] - z[f"z{2 * i + 1}"]
    omega = ChartOneForm("z0=1", zs, tuple(coeffs[name] for name in zs))

    xs = tuple(f"x{i}" for i in range(1, n + 1))
    xis = tuple(f"xi{j}" for j in range(2, n + 1))
    names = xs + xis
    eta_coeffs = [MultiPoly.constant(1, names)]
    eta_coeffs += [MultiPoly.var(f"xi{j}", names) for j in range(2, n + 1)]
    eta_coeffs += [MultiPoly.constant(0, names)] * len(xis)
    eta = ChartOneForm("x0=y0=1", names, tuple(eta_coeffs))
    return omega, eta


def polarity(b: SkewForm) -> ProjMap:
    """Point (v) -> hyperplane B(v, .) = p^perp."""
    if not b.is_nondegenerate():
        raise DegenerateForm("polarity needs a nondegenerate form")
    size = b.size
    return ProjMap(tuple(tuple(b.matrix[i][j] for i in range(size)) for j in range(size)))


def is_isotropic(s: LinearSubspace, b: SkewForm) -> bool:
    if s.ambient_dim + 1 != b.size:
        raise DimensionMismatch(f"subspace in P^{s.ambient_dim}, form on P^{b.size - 1}")
    return all(b.pair(u, w) == 0 for u in s.basis for w in s.basis)


@dataclass
class LegendrianResult:
    ok: bool
    legendrian: bool
    residuals: dict[str, MultiPoly] = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def nonzero_residuals(self) -> dict[str, MultiPoly]:
        return {k: v for k, v in self.residuals.items() if v.terms}


def _zero_poly(params):
    return MultiPoly.constant(0, params)


def legendrian_check(x: ParamVariety, b: SkewForm) -> LegendrianResult:
    """Isotropy identities B(v, dv/dt_i) = 0 and B(dv/dt_i, dv/dt_j) = 0.

    ``ok`` means the variety is integral; ``legendrian`` additionally requires
    n - 1 parameters.
    """
    if len(x.coords) != b.size:
        raise DimensionMismatch(f"variety in P^{x.ambient_dim}, form on P^{b.size - 1}")
    v = x.coords
    dv = {p: [c.diff(p) for c in v] for p in x.params}
    residuals = {}
    for p in x.params:
        residuals[f"B(v,d{p})"] = MultiPoly.coerce(b.pair(v, dv[p])) + _zero_poly(x.params)
    for p, q in itertools.combinations(x.params, 2):
        residuals[f"B(d{p},d{q})"] = MultiPoly.coerce(b.pair(dv[p], dv[q])) + _zero_poly(x.params)
    ok = all(not r.terms for r in residuals.values())
    return LegendrianResult(ok, ok and x.dim == b.n - 1, residuals)


def _skew_from_vector(vec, size):
    m = [[0] * size for _ in range(size)]
    for (i, j), val in zip(itertools.combinations(range(size), 2), vec):
        m[i][j] = val
        m[j][i] = -val
    return m


def _integer_points(dim: int):
    """Deterministic enumeration of Z^dim by growing max-norm shells."""
    r = 1
    while True:
        for pt in itertools.product(range(-r, r + 1), repeat=dim):
            if max(abs(c) for c in pt) == r:
                yield pt
        r += 1


@dataclass
class ContactFormSearch:
    form: SkewForm | None
    solution_dim: int
    solution_basis: list[tuple[Fraction, ...]]
    pfaffian: MultiPoly | None
    pairs: list[tuple[int, int]] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.form is not None


def contact_equations(x: ParamVariety) -> list[list[Fraction]]:
    """Linear equations on p_ij (i < j) from coefficient-wise isotropy."""
    size = len(x.coords)
    pairs = list(itertools.combinations(range(size), 2))
    v = x.coords
    dv = [[c.diff(p) for c in v] for p in x.params]
    pairings = [(v, d) for d in dv] + [(dv[a], dv[b]) for a, b in itertools.combinations(range(len(dv)), 2)]
    rows = []
    for u, w in pairings:
        # B(u, w) = sum_{i<j} p_ij (u_i w_j - u_j w_i)
        by_mono: dict = {}
        for k, (i, j) in enumerate(pairs):
            term = u[i] * w[j] - u[j] * w[i]
            for exps, c in term.terms.items():
                by_mono.setdefault(exps, [Fraction(0)] * len(pairs))[k] += c
        rows.extend(r for r in by_mono.values() if any(r))
    return rows


def find_contact_form(x: ParamVariety) -> ContactFormSearch:
    """Search for a nondegenerate skew form making ``x`` integral.

    The Pfaffian is computed symbolically on the solution space; a witness is
    the first point of a fixed integer enumeration where it does not vanish.
    """
    size = len(x.coords)
    if size % 2:
        raise DimensionMismatch("contact forms need an odd-dimensional projective space")
    n = size // 2
    if n > MAX_CONTACT_N:
        raise ValueError(f"find_contact_form is capped at n <= {MAX_CONTACT_N}")
    pairs = list(itertools.combinations(range(size), 2))
    rows = contact_equations(x)
    basis = rational_kernel(rows, len(pairs)) if rows else rational_kernel([], len(pairs))
    m = len(basis)
    if m == 0:
        return ContactFormSearch(None, 0, [], None, pairs)
    lam = tuple(f"l{i + 1}" for i in range(m))
    lvars = [MultiPoly.var(name, lam) for name in lam]
    generic = [sum((lvars[a] * basis[a][k] for a in range(m) if basis[a][k]), MultiPoly.constant(0, lam))
               for k in range(len(pairs))]
    pf = MultiPoly.coerce(pfaffian(_skew_from_vector(generic, size))) + MultiPoly.constant(0, lam)
    if not pf.terms:
        return ContactFormSearch(None, m, basis, pf, pairs)
    for pt in _integer_points(m):
        if pf.evaluate(dict(zip(lam, pt))) != 0:
            vec = [sum((Fraction(pt[a]) * basis[a][k] for a in range(m)), Fraction(0))
                   for k in range(len(pairs))]
            form = SkewForm(n, tuple(tuple(r) for r in _skew_from_vector(vec, size)))
            return ContactFormSearch(form, m, basis, pf, pairs)
    raise AssertionError("unreachable")


class ConeReductionError(ValueError):
    pass


@dataclass
class ConeReduction:
    vertex: ProjPoint
    complement: LinearSubspace
    reduced: ParamVariety
    restricted: SkewForm
    w: tuple[Fraction, ...]


def _solve(matrix, rhs):
    """Solve a square nonsingular rational system."""
    n = len(matrix)
    a = [list(map(Fraction, row)) + [Fraction(r)] for row, r in zip(matrix, rhs)]
    for c in range(n):
        piv = next(i for i in range(c, n) if a[i][c])
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for i in range(n):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [u - f * w for u, w in zip(a[i], a[c])]
    return [a[i][n] for i in range(n)]


def cone_reduction(x: ParamVariety, b: SkewForm, h: Sequence) -> ConeReduction:
    """Write a Legendrian variety lying in the hyperplane ``h`` as a cone.

    The vertex is the point v with h = B(v, .); w is the first basis vector
    with B(v, w) != 0 and E1 = <v, w>^perp.  The reduced variety is the
    projection from the vertex, in coordinates of the E1 basis.
    """
    h = tuple(Fraction(c) for c in h)
    size = b.size
    if len(h) != size or len(x.coords) != size:
        raise DimensionMismatch("hyperplane, form and variety dimensions differ")
    if not b.is_nondegenerate():
        raise DegenerateForm("cone reduction needs a nondegenerate form")
    if dot(h, x.coords).terms:
        raise ConeReductionError("variety is not contained in the hyperplane")
    if not legendrian_check(x, b).ok:
        raise ConeReductionError("variety is not integral for the form")
    # h_j = sum_i v_i B_ij  ->  B^T v = h
    bt = [[b.matrix[i][j] for i in range(size)] for j in range(size)]
    v = tuple(_solve(bt, h))
    j = next((j for j in range(size) if h[j]), None)
    if j is None:
        raise ConeReductionError("zero hyperplane")
    w = tuple(Fraction(int(k == j)) for k in range(size))
    conditions = [b.covector(v), b.covector(w)]
    e1 = rational_kernel(conditions, size)
    if len(e1) != size - 2:
        raise ConeReductionError("complement has the wrong dimension")
    bvw = b.pair(v, w)
    bwv = -bvw
    # projection: x - alpha v - beta w with beta = B(v, x)/B(v, w) = 0 on the hyperplane
    coords = x.coords
    alpha = MultiPoly.coerce(b.pair(w, coords)) / bwv
    proj = [c - alpha * v[k] for k, c in enumerate(coords)]
    # express in the E1 basis through its pivot columns
    pivot_cols = []
    for k in range(size):
        cand = pivot_cols + [k]
        if rational_rank([[vec[c] for c in cand] for vec in e1]) == len(cand):
            pivot_cols = cand
        if len(pivot_cols) == len(e1):
            break
    y = [MultiPoly.constant(0, x.params) for _ in e1]
    # sum_a y_a e1[a][c] = proj[c] on the pivot columns
    mat = [[e1[a][c] for a in range(len(e1))] for c in pivot_cols]
    for r_idx in range(len(e1)):
        unit = [Fraction(int(r == r_idx)) for r in range(len(e1))]
        col = _solve(mat, unit)
        for a in range(len(e1)):
            if col[a]:
                y[a] = y[a] + proj[pivot_cols[r_idx]] * col[a]
    reduced = ParamVariety(x.params, tuple(y), x.name).reduced()
    g = [[b.pair(e1[a], e1[c]) for c in range(len(e1))] for a in range(len(e1))]
    restricted = SkewForm(b.n - 1, tuple(tuple(r) for r in g))
    if not restricted.is_nondegenerate():
        raise ConeReductionError("restricted form is degenerate")
    return ConeReduction(ProjPoint(tuple(MultiPoly.constant(c) for c in v)).canonical(),
                         LinearSubspace(tuple(e1), size - 1), reduced, restricted, w)


def hyperplanes_of(x: ParamVariety) -> list[tuple[Fraction, ...]]:
    return hyperplane_containment(x) or []

"""Projective points, subspaces, linear maps and parametrized varieties.

A parametrized variety is one affine chart ``t -> (v_0(t) : ... : v_N(t))``;
every geometric claim about it is a polynomial identity in ``t``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exactmath import (
    MultiPoly,
    PolyMatrix,
    gcd_reduce,
    generic_rank,
    normalize_vector,
    parse_poly,
    rational_kernel,
    rational_rank,
)


class DimensionMismatch(ValueError):
    pass


def _poly_vector(coords) -> tuple[MultiPoly, ...]:
    out = [MultiPoly.coerce(c) for c in coords]
    names: tuple[str, ...] = ()
    for c in out:
        names = names + tuple(v for v in c.variables if v not in names)
    return tuple(c.with_variables(names) for c in out)


def cross_determinants(p: Sequence[MultiPoly], q: Sequence[MultiPoly]) -> list[MultiPoly]:
    """All ``p_i q_j - p_j q_i`` for ``i < j``."""
    out = []
    n = len(p)
    for i in range(n):
        for j in range(i + 1, n):
            out.append(p[i] * q[j] - p[j] * q[i])
    return out


def dot(h: Sequence, v: Sequence[MultiPoly]) -> MultiPoly:
    total = MultiPoly()
    for a, b in zip(h, v):
        if a:
            total = total + b * a
    return total


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[MultiPoly, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", _poly_vector(self.coords))
        if all(not c.terms for c in self.coords):
            raise ValueError("all homogeneous coordinates vanish")

    @property
    def ambient_dim(self) -> int:
        return len(self.coords) - 1

    def canonical(self) -> "ProjPoint":
        return ProjPoint(normalize_vector(self.coords))

    def __str__(self):
        return "(" + " : ".join(str(c) for c in self.coords) + ")"


def proj_equal(p, q) -> bool:
    a = p.coords if isinstance(p, (ProjPoint, ParamVariety)) else tuple(p)
    b = q.coords if isinstance(q, (ProjPoint, ParamVariety)) else tuple(q)
    if len(a) != len(b):
        raise DimensionMismatch(f"ambient dimensions differ: {len(a) - 1} vs {len(b) - 1}")
    return all(not d.terms for d in cross_determinants(_poly_vector(a), _poly_vector(b)))


@dataclass(frozen=True)
class LinearSubspace:
    """Deprojectivisation given by independent basis rows."""

    basis: tuple[tuple[Fraction, ...], ...]
    ambient_dim: int

    @property
    def dim(self) -> int:
        """Vector-space dimension (projective dimension + 1)."""
        return len(self.basis)

    @property
    def projective_dim(self) -> int:
        return len(self.basis) - 1


def span_of_rows(m, at: Mapping[str, Fraction] | Sequence | None = None) -> LinearSubspace:
    """Subspace spanned by the rows of ``m`` evaluated at ``at``.

    Keeps the first maximal independent subset of the evaluated rows.
    """
    pm = m if isinstance(m, PolyMatrix) else PolyMatrix.from_rows(m)
    values = _point_dict(pm.variables, at)
    rows = pm.evaluate(values)
    if all(not any(r) for r in rows):
        raise ValueError("all rows vanish at the evaluation point")
    basis: list[tuple[Fraction, ...]] = []
    for r in rows:
        if rational_rank(basis + [tuple(r)]) > len(basis):
            basis.append(tuple(r))
    return LinearSubspace(tuple(basis), pm.cols - 1)


def _point_dict(variables: Sequence[str], at) -> dict[str, Fraction]:
    if at is None:
        return {}
    if isinstance(at, Mapping):
        return {k: Fraction(v) for k, v in at.items()}
    at = list(at)
    if len(at) != len(variables):
        raise ValueError(f"expected {len(variables)} parameter values, got {len(at)}")
    return {v: Fraction(x) for v, x in zip(variables, at)}


@dataclass(frozen=True)
class ProjMap:
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        m = tuple(tuple(Fraction(x) for x in row) for row in self.matrix)
        if any(len(r) != len(m) for r in m):
            raise ValueError("projective map must be square")
        if rational_rank(m) < len(m):
            raise ValueError("projective map matrix is singular")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, size: int) -> "ProjMap":
        return cls(tuple(tuple(Fraction(int(i == j)) for j in range(size)) for i in range(size)))

    @classmethod
    def reversal(cls, size: int) -> "ProjMap":
        return cls(tuple(tuple(Fraction(int(i + j == size - 1)) for j in range(size)) for i in range(size)))

    @classmethod
    def diagonal(cls, entries: Sequence) -> "ProjMap":
        n = len(entries)
        return cls(tuple(tuple(Fraction(entries[i]) if i == j else Fraction(0) for j in range(n))
                         for i in range(n)))

    @property
    def size(self) -> int:
        return len(self.matrix)

    def __matmul__(self, other: "ProjMap") -> "ProjMap":
        n = self.size
        return ProjMap(tuple(
            tuple(sum((self.matrix[i][k] * other.matrix[k][j] for k in range(n)), Fraction(0))
                  for j in range(n))
            for i in range(n)))

    def apply_vector(self, v: Sequence[MultiPoly]) -> tuple[MultiPoly, ...]:
        return tuple(dot(row, v) for row in self.matrix)

    def __eq__(self, other):
        if not isinstance(other, ProjMap):
            return NotImplemented
        if other.size != self.size:
            return False
        a = [x for r in self.matrix for x in r]
        b = [x for r in other.matrix for x in r]
        return all(a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(i + 1, len(a)))

    def __hash__(self):
        return hash(self.size)

    def to_lists(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.matrix]


@dataclass(frozen=True)
class ParamVariety:
    params: tuple[str, ...]
    coords: tuple[MultiPoly, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        params = tuple(self.params)
        coords = []
        for c in self.coords:
            if isinstance(c, str):
                c = parse_poly(c)
            elif not isinstance(c, MultiPoly):
                c = MultiPoly.constant(Fraction(c))
            extra = set(c.used_variables()) - set(params)
            if extra:
                raise ValueError(f"coordinate {c} uses non-parameter variables {sorted(extra)}")
            coords.append(c.with_variables(params))
        if all(not c.terms for c in coords):
            raise ValueError("all coordinates vanish identically")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "coords", tuple(coords))

    @property
    def ambient_dim(self) -> int:
        return len(self.coords) - 1

    @property
    def dim(self) -> int:
        return len(self.params)

    def reduced(self) -> "ParamVariety":
        """Divide out common nonconstant factors, keep scalars."""
        return ParamVariety(self.params, gcd_reduce(self.coords), self.name)

    def canonical(self) -> "ParamVariety":
        return ParamVariety(self.params, normalize_vector(self.coords), self.name)

    def evaluate(self, at) -> tuple[Fraction, ...]:
        values = _point_dict(self.params, at)
        return tuple(c.evaluate(values) for c in self.coords)

    def jacobian_rank(self) -> int:
        """Generic rank of the affine-cone Jacobian minus one (immersion check)."""
        rows = [list(self.coords)] + [[c.diff(p) for c in self.coords] for p in self.params]
        return generic_rank(PolyMatrix.from_rows(rows)) - 1

    def is_immersion(self) -> bool:
        return self.jacobian_rank() == self.dim

    def substitute(self, mapping: Mapping[str, MultiPoly], params: Sequence[str]) -> "ParamVariety":
        return ParamVariety(tuple(params), tuple(c.subs(mapping) for c in self.coords), self.name)

    def invert_parameter(self, param: str, new: str | None = None) -> "ParamVariety":
        """Reparametrize by ``param = 1/new`` and clear the denominator."""
        new = new or param
        if self.dim != 1:
            raise ValueError("parameter inversion is for curves")
        d = max(c.degree(param) for c in self.coords)
        out = []
        for c in self.coords:
            terms = {}
            for k, coeff in c.coefficients(param).items():
                terms[(d - k,)] = coeff.constant_value()
            out.append(MultiPoly((new,), terms))
        return ParamVariety((new,), tuple(out), self.name).reduced()

    def to_dict(self) -> dict:
        return {
            "params": list(self.params),
            "coords": [str(c) for c in self.coords],
            "ambient_dim": self.ambient_dim,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "ParamVariety":
        params = tuple(data["params"])
        coords = tuple(parse_poly(str(c), None) for c in data["coords"])
        var = cls(params, coords, data.get("name", ""))
        if "ambient_dim" in data and int(data["ambient_dim"]) != var.ambient_dim:
            raise DimensionMismatch(
                f"ambient_dim {data['ambient_dim']} but {len(coords)} coordinates given")
        return var

    @classmethod
    def from_json(cls, text: str) -> "ParamVariety":
        return cls.from_dict(json.loads(text))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def __str__(self):
        return "(" + " : ".join(str(c) for c in self.coords) + ")"


def apply_map(m: ProjMap, x: ParamVariety) -> ParamVariety:
    if m.size != len(x.coords):
        raise DimensionMismatch(f"map of size {m.size} on variety in P^{x.ambient_dim}")
    return ParamVariety(x.params, gcd_reduce(m.apply_vector(x.coords)), x.name)


def coefficient_matrix(coords: Sequence[MultiPoly]) -> tuple[list[tuple], list[list[Fraction]]]:
    """Rows indexed by monomials, columns by coordinates."""
    monos = sorted({e for c in coords for e in c.terms}, key=lambda e: (sum(e), e), reverse=True)
    rows = [[c.terms.get(e, Fraction(0)) for c in coords] for e in monos]
    return monos, rows


def hyperplane_containment(x: ParamVariety) -> list[tuple[Fraction, ...]] | None:
    """Kernel basis of hyperplanes containing ``x``, or None."""
    _, rows = coefficient_matrix(x.coords)
    kernel = rational_kernel(rows, len(x.coords))
    return kernel or None


def read_map(data) -> ProjMap:
    """Square array of rational strings."""
    return ProjMap(tuple(tuple(Fraction(str(v)) for v in row) for row in data))

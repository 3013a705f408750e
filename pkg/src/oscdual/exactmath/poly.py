"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`MultiPoly` stores an ordered tuple of variable names and a map
from exponent vectors to nonzero :class:`fractions.Fraction` coefficients.
Arithmetic between polynomials over different variable lists promotes both
operands to the union of the lists (left operand's order first).
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd as igcd
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]

__all__ = [
    "MultiPoly",
    "NotDivisible",
    "PolyParseError",
    "Rational",
    "parse_poly",
    "poly_gcd",
    "poly_gcd_list",
    "differentiate",
    "resultant",
    "squarefree_part",
    "prem",
]

_VAR_RE = re.compile(r"[a-z][a-z0-9]*\Z")


class NotDivisible(ArithmeticError):
    """Raised by exact division when the divisor does not divide."""


class PolyParseError(ValueError):
    pass


def _var_key(name: str):
    m = re.match(r"([a-z]+)(\d*)\Z", name)
    if m is None:
        return (name, -1, name)
    return (m.group(1), int(m.group(2)) if m.group(2) else -1, name)


def sort_variables(names: Iterable[str]) -> tuple[str, ...]:
    """Natural order: ``t`` < ``t1`` < ``t2`` < ``t10`` < ``x0``."""
    return tuple(sorted(set(names), key=_var_key))


def _mono_key(exps):
    # graded lex
    return (sum(exps), exps)


class MultiPoly:
    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str] = (), terms: Mapping | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        if terms:
            for exps, c in terms.items():
                if c:
                    exps = tuple(exps)
                    if len(exps) != n:
                        raise ValueError(f"exponent vector {exps} does not match {self.variables}")
                    clean[exps] = c if isinstance(c, Fraction) else Fraction(c)
        self.terms = clean
        self._hash = None

    # construction helpers

    @classmethod
    def _raw(cls, variables, terms):
        p = cls.__new__(cls)
        p.variables = variables
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def constant(cls, c: Scalar, variables: Sequence[str] = ()) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str, variables: Sequence[str] | None = None) -> "MultiPoly":
        variables = (name,) if variables is None else tuple(variables)
        if name not in variables:
            variables = variables + (name,)
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exps: 1})

    @classmethod
    def coerce(cls, x, variables: Sequence[str] = ()) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        if isinstance(x, str):
            return parse_poly(x, variables or None)
        return cls.constant(Fraction(x), variables)

    # variable bookkeeping

    def with_variables(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-embed into ``variables``, which must contain every used variable."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        index = {v: i for i, v in enumerate(variables)}
        n = len(variables)
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * n
            for v, e in zip(self.variables, exps):
                if e:
                    if v not in index:
                        raise ValueError(f"variable {v!r} is used but missing from {variables}")
                    new[index[v]] = e
            terms[tuple(new)] = c
        return MultiPoly._raw(variables, terms)

    def used_variables(self) -> tuple[str, ...]:
        used = [False] * len(self.variables)
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return tuple(v for v, u in zip(self.variables, used) if u)

    def _align(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(Fraction(other), self.variables)
        if other.variables == self.variables:
            return self, other
        extra = tuple(v for v in other.variables if v not in self.variables)
        union = self.variables + extra
        return self.with_variables(union), other.with_variables(union)

    # basic queries

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()), Fraction(0))

    def degree(self, var: str | None = None) -> int:
        """Total degree, or degree in ``var``.  The zero polynomial has degree -1."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        if var not in self.variables:
            return 0
        i = self.variables.index(var)
        return max(e[i] for e in self.terms)

    def leading_exponent(self):
        return max(self.terms, key=_mono_key)

    def leading_coefficient(self) -> Fraction:
        return self.terms[self.leading_exponent()]

    def coefficients(self, var: str) -> dict[int, "MultiPoly"]:
        """Coefficients of ``self`` viewed as a polynomial in ``var``."""
        if var not in self.variables:
            return {0: self} if self.terms else {}
        i = self.variables.index(var)
        out: dict[int, dict] = {}
        for exps, c in self.terms.items():
            k = exps[i]
            out.setdefault(k, {})[exps[:i] + (0,) + exps[i + 1:]] = c
        return {k: MultiPoly._raw(self.variables, t) for k, t in out.items()}

    def coeff(self, var: str, k: int) -> "MultiPoly":
        return self.coefficients(var).get(k, MultiPoly((), {}).with_variables(self.variables))

    def univariate_coeffs(self, var: str) -> list[Fraction]:
        """Dense coefficient list ``[c0, c1, ...]`` of a polynomial in ``var`` only."""
        out = [Fraction(0)] * (self.degree(var) + 1)
        for k, c in self.coefficients(var).items():
            out[k] = c.constant_value()
        return out

    # arithmetic

    def __neg__(self):
        return MultiPoly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        if not isinstance(other, (MultiPoly, int, Fraction)):
            return NotImplemented
        a, b = self._align(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return MultiPoly._raw(a.variables, terms)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, (MultiPoly, int, Fraction)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MultiPoly._raw(self.variables, {})
            return MultiPoly._raw(self.variables, {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._align(other)
        terms: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(e, 0) + c1 * c2
                if s:
                    terms[e] = s
                else:
                    del terms[e]
        return MultiPoly._raw(a.variables, terms)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of polynomial by zero")
            inv = 1 / Fraction(other)
            return self * inv
        if isinstance(other, MultiPoly) and other.is_constant():
            return self / other.constant_value()
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result = MultiPoly.constant(1, self.variables)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def divexact(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient; raises :class:`NotDivisible` on a nonzero remainder."""
        if not isinstance(other, MultiPoly):
            return self / other
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        a, b = self._align(other)
        if b.is_constant():
            return a / b.constant_value()
        lb = b.leading_exponent()
        lcb = b.terms[lb]
        r = a
        quot: dict = {}
        while r.terms:
            lr = r.leading_exponent()
            diff = tuple(x - y for x, y in zip(lr, lb))
            if min(diff) < 0:
                raise NotDivisible(f"{b} does not divide {self}")
            c = r.terms[lr] / lcb
            quot[diff] = c
            r = r - MultiPoly._raw(a.variables, {diff: c}) * b
        return MultiPoly._raw(a.variables, quot)

    def divides(self, other: "MultiPoly") -> bool:
        try:
            other.divexact(self)
        except NotDivisible:
            return False
        return True

    # comparisons

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if not isinstance(other, MultiPoly):
            return NotImplemented
        if self.variables == other.variables:
            return self.terms == other.terms
        a, b = self._align(other)
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            items = []
            for exps, c in self.terms.items():
                mono = tuple(sorted((v, e) for v, e in zip(self.variables, exps) if e))
                items.append((mono, c))
            self._hash = hash(frozenset(items))
        return self._hash

    # calculus and substitution

    def diff(self, var: str) -> "MultiPoly":
        if var not in self.variables:
            raise KeyError(f"unknown variable {var!r}; polynomial has {self.variables}")
        i = self.variables.index(var)
        terms = {}
        for exps, c in self.terms.items():
            k = exps[i]
            if k:
                terms[exps[:i] + (k - 1,) + exps[i + 1:]] = c * k
        return MultiPoly._raw(self.variables, terms)

    def evaluate(self, values: Mapping[str, Scalar]):
        """Substitute numbers for some variables.

        Returns a Fraction when every used variable is assigned, else a MultiPoly
        over the same variable list.
        """
        vals = {v: Fraction(x) for v, x in values.items()}
        idx = [(i, vals[v]) for i, v in enumerate(self.variables) if v in vals]
        terms: dict = {}
        for exps, c in self.terms.items():
            e = list(exps)
            for i, x in idx:
                if e[i]:
                    c = c * x ** e[i]
                    e[i] = 0
            if c:
                key = tuple(e)
                s = terms.get(key, 0) + c
                if s:
                    terms[key] = s
                else:
                    del terms[key]
        out = MultiPoly._raw(self.variables, terms)
        if all(v in vals for v in out.used_variables()):
            return out.constant_value() if out.terms else Fraction(0)
        return out

    def subs(self, mapping: Mapping[str, "MultiPoly | Scalar"]) -> "MultiPoly":
        """Compose: replace variables by polynomials."""
        images = {v: MultiPoly.coerce(p) for v, p in mapping.items()}
        keep = tuple(v for v in self.variables if v not in images)
        result = MultiPoly((), {})
        power_cache: dict = {}
        for exps, c in self.terms.items():
            term = MultiPoly.constant(c, keep)
            rest = [0] * len(keep)
            for v, e in zip(self.variables, exps):
                if not e:
                    continue
                if v in images:
                    key = (v, e)
                    if key not in power_cache:
                        power_cache[key] = images[v] ** e
                    term = term * power_cache[key]
                else:
                    rest[keep.index(v)] = e
            term = term * MultiPoly._raw(keep, {tuple(rest): Fraction(1)})
            result = result + term
        return result

    def homogenize(self, var: str, degree: int | None = None) -> "MultiPoly":
        d = self.degree() if degree is None else degree
        if var in self.variables:
            raise ValueError(f"{var!r} already in use")
        variables = self.variables + (var,)
        terms = {e + (d - sum(e),): c for e, c in self.terms.items()}
        if any(e[-1] < 0 for e in terms):
            raise ValueError("degree below total degree")
        return MultiPoly._raw(variables, terms)

    # normalization

    def content(self) -> Fraction:
        """Positive rational content: gcd of numerators over lcm of denominators."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = igcd(num, c.numerator)
            den = den * c.denominator // igcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "MultiPoly":
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        if not self.terms:
            return self
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        return self / c

    # text

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps in sorted(self.terms, key=_mono_key, reverse=True):
            c = self.terms[exps]
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exps) if e
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"MultiPoly({str(self)!r}, variables={self.variables})"


# parsing

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([a-z][a-z0-9]*)|(\^)|(\*)|(/)|(\+)|(-))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise PolyParseError(f"unexpected character at {pos} in {text!r}")
        kind = m.lastindex
        out.append((kind, m.group(kind)))
        pos = m.end()
    return out


def parse_poly(text: str, variables: Sequence[str] | None = None) -> MultiPoly:
    """Parse ``"t1^3 + t2^3 - 1/2*t1"``-style text.

    Variables default to the naturally sorted names that occur in the text.
    """
    if not isinstance(text, str):
        raise PolyParseError(f"expected a string, got {type(text).__name__}")
    tokens = _tokenize(text)
    if not tokens:
        raise PolyParseError("empty polynomial")
    raw_terms: list[tuple[Fraction, dict]] = []
    i = 0
    sign = 1
    expect_term = True
    if tokens[0][0] in (6, 7):
        sign = -1 if tokens[0][0] == 7 else 1
        i = 1
    while True:
        coeff = Fraction(sign)
        mono: dict[str, int] = {}
        seen_factor = False
        while True:
            if i >= len(tokens):
                raise PolyParseError(f"dangling operator in {text!r}")
            kind, val = tokens[i]
            if kind == 1:
                num = int(val)
                i += 1
                if i < len(tokens) and tokens[i][0] == 5:
                    if i + 1 >= len(tokens) or tokens[i + 1][0] != 1:
                        raise PolyParseError(f"bad fraction in {text!r}")
                    den = int(tokens[i + 1][1])
                    if den == 0:
                        raise PolyParseError("zero denominator")
                    coeff *= Fraction(num, den)
                    i += 2
                else:
                    coeff *= num
            elif kind == 2:
                if not _VAR_RE.match(val):
                    raise PolyParseError(f"bad variable name {val!r}")
                i += 1
                exp = 1
                if i < len(tokens) and tokens[i][0] == 3:
                    if i + 1 >= len(tokens) or tokens[i + 1][0] != 1:
                        raise PolyParseError(f"bad exponent in {text!r}")
                    exp = int(tokens[i + 1][1])
                    i += 2
                mono[val] = mono.get(val, 0) + exp
            else:
                raise PolyParseError(f"unexpected {val!r} in {text!r}")
            seen_factor = True
            if i < len(tokens) and tokens[i][0] == 4:
                i += 1
                continue
            break
        assert seen_factor
        raw_terms.append((coeff, mono))
        expect_term = False
        if i >= len(tokens):
            break
        kind, val = tokens[i]
        if kind not in (6, 7):
            raise PolyParseError(f"unexpected {val!r} in {text!r}")
        sign = -1 if kind == 7 else 1
        i += 1
        expect_term = True
    if expect_term:
        raise PolyParseError(f"dangling operator in {text!r}")
    names = sort_variables(v for _, m in raw_terms for v in m)
    if variables is not None:
        variables = tuple(variables)
        missing = [v for v in names if v not in variables]
        if missing:
            raise PolyParseError(f"variables {missing} not in {variables}")
    else:
        variables = names
    result = MultiPoly((), {}).with_variables(variables)
    for coeff, mono in raw_terms:
        exps = tuple(mono.get(v, 0) for v in variables)
        result = result + MultiPoly._raw(variables, {exps: coeff} if coeff else {})
    return result


# operations

def differentiate(p: MultiPoly, var: str) -> MultiPoly:
    return p.diff(var)


def prem(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """Pseudo-remainder of ``p`` by ``q`` as polynomials in ``var``."""
    p, q = p._align(q)
    if var not in p.variables:
        p = p.with_variables(p.variables + (var,))
        q = q.with_variables(p.variables)
    dq = q.degree(var)
    if dq < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    lc = q.coefficients(var)[dq]
    x = MultiPoly.var(var, p.variables)
    r = p
    dr = r.degree(var)
    e = dr - dq + 1
    while r.terms and dr >= dq:
        lr = r.coefficients(var)[dr]
        r = r * lc - lr * q * x ** (dr - dq)
        e -= 1
        dr = r.degree(var)
    return r * lc ** max(e, 0)


def _primitive_in(p: MultiPoly, var: str) -> tuple[MultiPoly, MultiPoly]:
    """Split ``p`` into (content in var, primitive part in var)."""
    coeffs = list(p.coefficients(var).values())
    c = poly_gcd_list(coeffs)
    return c, p.divexact(c)


def _normalize_gcd(g: MultiPoly) -> MultiPoly:
    return g.primitive()


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """Greatest common divisor over Q, normalized by :meth:`MultiPoly.primitive`.

    Recursive primitive polynomial remainder sequence on the first used variable.
    """
    p, q = p._align(q)
    if not p.terms:
        return _normalize_gcd(q) if q.terms else q
    if not q.terms:
        return _normalize_gcd(p)
    if p.is_constant() or q.is_constant():
        return MultiPoly.constant(1, p.variables)
    used = set(p.used_variables()) | set(q.used_variables())
    var = next(v for v in p.variables if v in used)
    cp, pp = _primitive_in(p, var)
    cq, qq = _primitive_in(q, var)
    c = poly_gcd(cp, cq)
    if pp.degree(var) < qq.degree(var):
        pp, qq = qq, pp
    if qq.degree(var) == 0:
        return _normalize_gcd(c)
    while True:
        r = prem(pp, qq, var)
        if not r.terms:
            g = qq
            break
        if r.degree(var) == 0:
            g = MultiPoly.constant(1, p.variables)
            break
        pp, qq = qq, _primitive_in(r, var)[1]
    g = _primitive_in(g, var)[1]
    return _normalize_gcd(c * g)


def poly_gcd_list(polys: Iterable[MultiPoly]) -> MultiPoly:
    polys = [p for p in polys]
    nonzero = [p for p in polys if p.terms]
    if not nonzero:
        return polys[0] if polys else MultiPoly((), {})
    # cheap polynomials first keeps the recursion small
    nonzero.sort(key=lambda p: (p.degree(), len(p.terms)))
    g = nonzero[0].primitive()
    for p in nonzero[1:]:
        if g.is_constant():
            break
        g = poly_gcd(g, p)
    if g.is_constant():
        return MultiPoly.constant(1, reduce(lambda a, b: a._align(b)[0], nonzero).variables)
    return g


def squarefree_part(p: MultiPoly, var: str) -> MultiPoly:
    if not p.terms:
        raise ValueError("squarefree part of the zero polynomial")
    if var not in p.variables or p.degree(var) == 0:
        return MultiPoly.constant(1, p.variables)
    g = poly_gcd(p, p.diff(var))
    return p.divexact(g).primitive()


def resultant(p: MultiPoly, q: MultiPoly, var: str) -> MultiPoly:
    """Sylvester resultant of ``p`` and ``q`` eliminating ``var``."""
    from .linalg import det

    p, q = p._align(q)
    if not p.terms and not q.terms:
        raise ValueError("resultant of two zero polynomials")
    if not p.terms or not q.terms:
        return MultiPoly((), {}).with_variables(p.variables)
    m, n = p.degree(var), q.degree(var)
    if m == 0:
        return p ** n
    if n == 0:
        return q ** m
    pc = p.coefficients(var)
    qc = q.coefficients(var)
    zero = MultiPoly((), {}).with_variables(p.variables)
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for k in range(m + 1):
            row[i + k] = pc.get(m - k, zero)
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k in range(n + 1):
            row[i + k] = qc.get(n - k, zero)
        rows.append(row)
    return det(rows)

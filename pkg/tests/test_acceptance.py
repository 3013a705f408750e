"""Acceptance criteria, one test each.

Every check is an exact polynomial identity or integer equality; the only
tolerance is the runtime budget stated with each criterion.  Each test
prints a single PASS/FAIL line listing the failed checks.
"""

import random
import time
from fractions import Fraction

from oscdual.bryant import (
    beta_after_theta,
    conormal_lift,
    expected_degrees,
    genericity_A,
    genericity_B,
    parametric_curve_degree,
    plane_curve_class,
    theta_after_beta,
    theta_pushforward,
    verify_pullback,
)
from oscdual.catalog import (
    MonomialSpec,
    certify_monomial_selfdual,
    certify_v_family_selfdual,
    exponents_of,
    from_name,
    hypersurface_family_curve,
    monomial_contact_form,
    monomial_curve,
    monomial_dual_witness,
    monomial_specs,
    v_family,
    v_family_witness,
)
from oscdual.contact import SkewForm, cone_reduction, find_contact_form, legendrian_check, polarity, standard_B
from oscdual.exactmath import MultiPoly, parse_poly
from oscdual.osculation import (
    OsculationError,
    annihilation_residuals,
    generic_osc_dim,
    osc_dim,
    osculating_dual,
    second_fundamental_form,
    selfdual_certificate,
)
from oscdual.projective import ParamVariety, hyperplane_containment, proj_equal


def _verdict(number, title, checks, elapsed, limit):
    failed = [name for name, ok in checks.items() if not ok]
    timed = elapsed < limit
    status = "PASS" if not failed and timed else "FAIL"
    detail = f"{len(checks) - len(failed)}/{len(checks)} checks, {elapsed:.2f} s (limit {limit} s)"
    if failed:
        detail += "; failed: " + ", ".join(failed)
    print(f"\n[{status}] criterion {number}: {title}: {detail}")
    assert not failed, failed
    assert timed, f"took {elapsed:.2f} s, limit {limit} s"


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


def test_criterion_1_bryant_map():
    checks = {}
    worst = 0.0
    for n in (2, 3, 4):
        def one():
            r = verify_pullback(n)
            tb = all(c.is_zero() for c in theta_after_beta(n))
            bt = beta_after_theta(n) == []
            return r.ok and all(v.is_zero() for v in r.residuals.values()), tb, bt
        (pull, tb, bt), elapsed = _timed(one)
        worst = max(worst, elapsed)
        checks[f"pullback n={n}"] = pull
        checks[f"theta(beta(z)) ~ z, n={n}"] = tb
        checks[f"beta(theta(x,y)) ~ (x,y), n={n}"] = bt
        checks[f"n={n} under 1 s"] = elapsed < 1.0
    _verdict(1, "beta^* eta = omega and round trips", checks, worst, 1.0)


def _same_up_to_scale(a: SkewForm, b: SkewForm) -> bool:
    x = [v for r in a.matrix for v in r]
    y = [v for r in b.matrix for v in r]
    return all(x[i] * y[j] == x[j] * y[i] for i in range(len(x)) for j in range(len(x)))


def test_criterion_2_monomial_duality():
    def run():
        checks = {}
        for s in monomial_specs(8):
            tag = f"({s.a},{s.b},{s.c})"
            dual, exponent_curve, _ = monomial_dual_witness(s)
            checks[f"{tag} dual exponents"] = exponents_of(exponent_curve) == (0, s.c - s.b, s.c - s.a, s.c)
            checks[f"{tag} witness"] = certify_monomial_selfdual(s)
            formula = monomial_contact_form(s)
            found = find_contact_form(monomial_curve(s))
            agree = found.found == (formula is not None) == (s.c == s.a + s.b)
            if agree and formula is not None:
                agree = _same_up_to_scale(found.form, formula)
            checks[f"{tag} contact form"] = agree
        return checks
    checks, elapsed = _timed(run)
    _verdict(2, "monomial curves with c <= 8", checks, elapsed, 5.0)


def test_criterion_3_twisted_cubic():
    def run():
        x = monomial_curve(MonomialSpec(1, 2, 3))
        b = SkewForm(2, ((0, 0, 0, -1), (0, 0, 3, 0), (0, -3, 0, 0), (1, 0, 0, 0)))
        cert = selfdual_certificate(x, b)
        plane = [parse_poly(s) for s in ("-t^3", "3*t^2", "-3*t", "1")]
        return {
            "legendrian": legendrian_check(x, b).legendrian,
            "certificate": cert.selfdual and cert.residuals == [],
            "osculating plane": proj_equal(osculating_dual(x), plane),
            "B v(t)": proj_equal(polarity(b).apply_vector(x.coords), plane),
        }
    checks, elapsed = _timed(run)
    _verdict(3, "twisted cubic certificate", checks, elapsed, 1.0)


def test_criterion_4_conic_construction():
    def run():
        conic = ParamVariety(("t",), ("1 + t^2", "1 - t^2", "2*t"))
        c = theta_pushforward(conormal_lift(conic))
        e20, e31 = expected_degrees(2, 0), expected_degrees(3, 1)
        return {
            "genericity A": genericity_A(conic).passed,
            "genericity B": genericity_B(conic).passed,
            "pushforward Legendrian": legendrian_check(c, standard_B(2)).legendrian,
            "not in a hyperplane": hyperplane_containment(c) is None,
            "degree 4": parametric_curve_degree(c) == 4,
            "deg X + deg X*": parametric_curve_degree(c) == 2 + plane_curve_class(conic),
            "(2,0) -> 4": e20.legendrian_degree == 4,
            "(3,1) -> 9 = d^2": e31.legendrian_degree == 9 == 3 ** 2,
        }
    checks, elapsed = _timed(run)
    _verdict(4, "conic pushforward and degree formulas", checks, elapsed, 2.0)


def test_criterion_5_genericity_sensitivity():
    def run():
        parabola = ParamVariety(("t",), ("1", "t", "t^2"))
        c = theta_pushforward(conormal_lift(parabola))
        return {
            "fails genericity A": not genericity_A(parabola).passed,
            "degree drops to 3": parametric_curve_degree(c) == 3,
            "3 != expected 4": parametric_curve_degree(c) != expected_degrees(2, 0).legendrian_degree,
        }
    checks, elapsed = _timed(run)
    _verdict(5, "parabola violates the hypotheses", checks, elapsed, 1.0)


def test_criterion_6_hypersurface_family():
    def run():
        checks = {}
        for d in (3, 4):
            x = hypersurface_family_curve(3, f"x2^{d} + x3^{d}")
            b = standard_B(3)
            checks[f"d={d} Legendrian"] = legendrian_check(x, b).legendrian
            checks[f"d={d} not in a hyperplane"] = hyperplane_containment(x) is None
            checks[f"d={d} second fundamental form dim 2"] = second_fundamental_form(x, (2, 3)).dim == 2
            checks[f"d={d} certificate"] = selfdual_certificate(x, b).selfdual
        return checks
    checks, elapsed = _timed(run)
    _verdict(6, "hypersurface family, n = 3", checks, elapsed, 10.0)


def _correction_in_span(correction: MultiPoly, k: int) -> bool:
    allowed = set()
    for i in range(k):
        allowed.add(tuple(int(j == i) for j in range(k)))
        allowed.add(tuple(2 * int(j == i) for j in range(k)))
    return set(correction.terms) <= allowed


def test_criterion_7_v_family():
    def run():
        checks = {}
        for k in (2, 3):
            v = v_family(k)
            checks[f"k={k} generic dim Osc^2 = 2k"] = generic_osc_dim(v, 2) == 2 * k
            w = v_family_witness(k)
            checks[f"k={k} dual = cubic + P with P in span(t_i, t_i^2)"] = _correction_in_span(w.correction, k)
            checks[f"k={k} shear witness"] = certify_v_family_selfdual(k)
            search = find_contact_form(v)
            checks[f"k={k} find_contact_form none"] = not search.found
            checks[f"k={k} symbolic Pfaffian zero"] = search.pfaffian is not None and search.pfaffian.is_zero()
        return checks
    checks, elapsed = _timed(run)
    _verdict(7, "V_k family, k = 2, 3", checks, elapsed, 30.0)


def _catalog_entries():
    names = [f"monomial:{s.a},{s.b},{s.c}" for s in monomial_specs(8)]
    names += ["vfamily:2", "vfamily:3", "hypersurface:2:x2^3", "hypersurface:3:x2^3 + x3^3",
              "hypersurface:3:x2^4 + x3^4", "hypersurface:3:x2^2*x3"]
    return names


def _random_poly(rng, degree):
    terms = {(e,): Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for e in range(degree + 1)
             if rng.random() < 0.7}
    return MultiPoly(("t",), terms)


def test_criterion_8_property_suites():
    def run():
        rng = random.Random(20261018)
        checks = {}
        # (a) Legendrian implies dim Osc^2 <= 2n - 2 at five sample points
        points = [Fraction(1, 2), Fraction(2), Fraction(-3), Fraction(5, 3), Fraction(7)]
        ok_a = True
        for name in _catalog_entries():
            x = from_name(name)
            n = len(x.coords) // 2
            if name.startswith("hypersurface"):
                form = standard_B(n)
            else:
                form = find_contact_form(x).form
            if form is None or not legendrian_check(x, form).legendrian:
                continue
            for i, p in enumerate(points):
                at = tuple(p + j for j in range(x.dim)) if x.dim > 1 else (p,)
                try:
                    ok_a &= osc_dim(x, 2, at) <= 2 * n - 2
                except OsculationError:
                    continue
        checks["(a) Legendrian => dim Osc^2 <= 2n-2"] = ok_a
        # (b) the osculating dual annihilates every jet row
        done, ok_b = 0, True
        while done < 25:
            coords = [_random_poly(rng, rng.randint(3, 6)) for _ in range(4)]
            if all(not c.terms for c in coords):
                continue
            x = ParamVariety(("t",), tuple(coords))
            try:
                d = osculating_dual(x)
            except OsculationError:
                continue
            ok_b &= all(r.is_zero() for r in annihilation_residuals(d.coords, x, 2))
            done += 1
        checks["(b) dual annihilates jets, 25 curves"] = ok_b
        # (c) pushforwards are contact regardless of genericity
        done, ok_c = 0, True
        while done < 25:
            coords = [_random_poly(rng, rng.randint(1, 4)) for _ in range(3)]
            try:
                x = ParamVariety(("t",), tuple(coords))
                c = theta_pushforward(conormal_lift(x))
            except ValueError:
                continue
            ok_c &= legendrian_check(c, standard_B(2)).ok
            done += 1
        checks["(c) pushforwards satisfy B(v,v') = 0, 25 curves"] = ok_c
        # (d) a planar Legendrian curve is a line, and reduces to a point
        line = ParamVariety(("t",), ("1", "0", "t", "0"))
        b = standard_B(2)
        ok_d = True
        for h in hyperplane_containment(line):
            r = cone_reduction(line, b, h)
            ok_d &= all(c.is_constant() for c in r.reduced.coords) and r.restricted.is_nondegenerate()
        ok_d &= legendrian_check(line, b).legendrian
        checks["(d) cone reduction of the Legendrian line"] = ok_d
        return checks
    checks, elapsed = _timed(run)
    _verdict(8, "property suites", checks, elapsed, 60.0)

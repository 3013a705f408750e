from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from oscdual.bryant import (
    CenterError,
    IncidencePoint,
    beta_after_theta,
    beta_point,
    center_is_exact,
    center_vanishes,
    conormal_lift,
    expected_degrees,
    genericity_A,
    genericity_B,
    parametric_curve_degree,
    plane_curve_class,
    section_root_count,
    theta_after_beta,
    theta_point,
    theta_pushforward,
    verify_pullback,
)
from oscdual.contact import legendrian_check, standard_B
from oscdual.exactmath import MultiPoly, parse_poly
from oscdual.projective import ParamVariety, ProjPoint, hyperplane_containment, proj_equal
from strategies import polys

CONIC = ParamVariety(("t",), ("1 + t^2", "1 - t^2", "2*t"))
PARABOLA = ParamVariety(("t",), ("1", "t", "t^2"))
CUBIC_PLANE = ParamVariety(("t",), ("1", "-t^3", "t"))
SWAPPED_CONIC = ParamVariety(("t",), ("1 + t^2", "2*t", "1 - t^2"))
BITANGENT_QUARTIC = ParamVariety(("t",), ("t^4 - 2*t^2 + 2", "t", "1"))


def pt(*xs):
    return ProjPoint([parse_poly(str(x)) for x in xs])


def strs(v):
    return [str(c) for c in v]


def test_theta_point_examples():
    z = theta_point(IncidencePoint(pt(1, 1, 1), pt(1, 1, -2)).check())
    assert proj_equal(z, pt(1, 0, 1, 1))
    assert proj_equal(theta_point(IncidencePoint(pt(1, 0, 0), pt(0, 1, 0))), pt(1, 0, 0, 0))
    with pytest.raises(CenterError):
        theta_point(IncidencePoint(pt(0, 1, 0), pt(1, 0, 0)))


def test_beta_point_examples():
    p = beta_point(pt(1, 0, 1, 1))
    assert proj_equal(p.x, pt(1, 1, 1)) and proj_equal(p.y, pt(1, 1, -2))
    q = beta_point(pt(1, 0, 0, 0))
    assert proj_equal(q.x, pt(1, 0, 0)) and proj_equal(q.y, pt(0, 1, 0))
    assert p.pairing().is_zero() and q.pairing().is_zero()
    with pytest.raises(ValueError):
        beta_point(pt(1, 0, 0))


def test_incidence_check():
    with pytest.raises(ValueError):
        IncidencePoint(pt(1, 0, 0), pt(1, 0, 0)).check()


z_points = st.lists(st.integers(-5, 5), min_size=6, max_size=6).filter(lambda z: z[0] != 0)


@given(z_points)
def test_round_trip_points(z):
    p = pt(*z)
    b = beta_point(p)
    assert b.pairing().is_zero()
    assert proj_equal(theta_point(b), p)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_pullback_and_round_trips(n):
    r = verify_pullback(n)
    assert r.ok and all(v.is_zero() for v in r.residuals.values())
    assert all(c.is_zero() for c in theta_after_beta(n))
    assert beta_after_theta(n) == []


def test_pullback_n2_explicit():
    r = verify_pullback(2)
    assert {k: str(v) for k, v in r.pulled_back.items()} == {"z1": "1", "z2": "-z3", "z3": "z2"}


def test_pullback_range():
    with pytest.raises(ValueError):
        verify_pullback(5)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_center_locus(n):
    assert center_vanishes(n)
    assert center_is_exact(n)


def test_conormal_lift_examples():
    assert strs(conormal_lift(CONIC).ell) == ["2*t^2 + 2", "2*t^2 - 2", "-4*t"]
    assert strs(conormal_lift(PARABOLA).ell) == ["t^2", "-2*t", "1"]
    assert strs(conormal_lift(CUBIC_PLANE).ell) == ["2*t^3", "-1", "-3*t^2"]
    line = conormal_lift(ParamVariety(("t",), ("1", "t", "0")))
    assert line.is_line
    for lift in (conormal_lift(CONIC), conormal_lift(PARABOLA)):
        assert all(r.is_zero() for r in lift.incidence_residuals())


def test_theta_pushforward_examples():
    c = theta_pushforward(conormal_lift(CONIC))
    assert proj_equal(c, [parse_poly(s) for s in ("t^4 - 1", "-t^4 - 1", "2*t^3 - 2*t", "t^3 + t")])
    p = theta_pushforward(conormal_lift(PARABOLA))
    assert proj_equal(p, [parse_poly(s) for s in ("4*t", "3*t^2", "4*t^3", "1")])
    k = theta_pushforward(conormal_lift(CUBIC_PLANE))
    assert proj_equal(k, [parse_poly(s) for s in ("1", "1/2*t^3", "t", "-3/2*t^2")])


def test_pushforward_rejects_center():
    # the line x0 = 0 has lift (x, y) with x0 = 0 and y = (1, 0, 0)
    with pytest.raises(CenterError):
        theta_pushforward(conormal_lift(ParamVariety(("t",), ("0", "1", "t"))))


def hyps(report):
    return [(h.index, h.passed) for h in report.hypotheses]


def test_genericity_A_conic():
    r = genericity_A(CONIC)
    assert r.passed
    assert [h.witness for h in r.hypotheses] == ["", "Res(x0, l1) = 16", "W = 8", "Res(x0, x1) = 4"]


def test_genericity_A_parabola():
    r = genericity_A(PARABOLA)
    assert not r.passed
    assert 1 in r.failures() and 4 in r.failures()


def test_genericity_B():
    assert genericity_B(CONIC).passed
    # the swapped conic has distinct tangents through (0:1:0) at t = 0 and t = oo
    assert genericity_B(SWAPPED_CONIC).passed
    r = genericity_B(BITANGENT_QUARTIC)
    assert hyps(r) == [(1, True), (2, True), (3, False)]
    assert "u + 1" in r.hypotheses[2].witness


def test_genericity_B_bitangent_matches_evaluation():
    # the tangent at t = +-1 is the same line x0 - x2 = 0 through (0:1:0)
    ell = conormal_lift(BITANGENT_QUARTIC).ell
    at = [tuple(c.evaluate({"t": s}) for c in ell) for s in (1, -1)]
    assert at[0][1] == at[1][1] == 0
    assert at[0][0] * at[1][2] == at[0][2] * at[1][0]


def test_genericity_report_serializes():
    d = genericity_B(BITANGENT_QUARTIC).to_dict()
    assert d["lemma"] == "B" and d["passed"] is False
    assert d["hypotheses"][2]["text"] == "no bitangent of X passes through (0:1:0)"


def test_degree_examples():
    assert parametric_curve_degree(ParamVariety(("t",), ("1", "t", "t^2", "t^3"))) == 3
    quartic = ParamVariety(("t",), ("t^4 - 1", "-t^4 - 1", "2*t^3 - 2*t", "t^3 + t"))
    assert parametric_curve_degree(quartic) == 4
    assert parametric_curve_degree(ParamVariety(("t",), ("4*t", "3*t^2", "4*t^3", "1"))) == 3
    assert plane_curve_class(CONIC) == 2


@pytest.mark.parametrize("h", [(1, 1, 2, 3), (1, 2, 3, 5), (0, 1, 0, 0), (1, 0, 0, 0)])
def test_section_root_count_matches_sympy(h):
    x = ParamVariety(("t",), ("4*t", "3*t^2", "4*t^3", "1"))
    t = sympy.Symbol("t")
    f = sympy.Poly(h[0] * 4 * t + h[1] * 3 * t ** 2 + h[2] * 4 * t ** 3 + h[3], t)
    distinct = sympy.sqf_part(f).degree()
    at_infinity = 1 if f.degree() < 3 else 0
    assert section_root_count(x, h) == distinct + at_infinity


def test_expected_degrees():
    assert tuple(vars(expected_degrees(2, 0)).values()) == (0, 2, 4)
    e = expected_degrees(3, 1)
    assert (e.nodes, e.dual_degree, e.legendrian_degree) == (0, 6, 9) and e.legendrian_degree == 3 ** 2
    e = expected_degrees(4, 0)
    assert (e.nodes, e.dual_degree, e.legendrian_degree) == (3, 6, 10)
    with pytest.raises(ValueError):
        expected_degrees(3, 2)
    with pytest.raises(ValueError):
        expected_degrees(1, 0)


def test_generic_conic_pushforward_contract():
    c = theta_pushforward(conormal_lift(CONIC))
    assert legendrian_check(c, standard_B(2)).legendrian
    assert hyperplane_containment(c) is None
    assert parametric_curve_degree(c) == 2 + plane_curve_class(CONIC)


plane_curves = st.lists(polys(("t",), 4, 3), min_size=3, max_size=3)


@settings(max_examples=30, deadline=None)
@given(plane_curves)
def test_pushforward_always_contact(coords):
    try:
        x = ParamVariety(("t",), tuple(coords))
        lift = conormal_lift(x)
        c = theta_pushforward(lift)
    except (ValueError, CenterError):
        return
    assert legendrian_check(c, standard_B(2)).ok

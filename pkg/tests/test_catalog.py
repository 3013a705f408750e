import pytest

from oscdual.catalog import (
    CatalogError,
    MonomialSpec,
    certify_monomial_selfdual,
    certify_v_family_selfdual,
    exponents_of,
    from_name,
    hypersurface_family_curve,
    monomial_contact_form,
    monomial_curve,
    monomial_dual_exponents,
    monomial_dual_witness,
    monomial_specs,
    v_family,
    v_family_witness,
)
from oscdual.contact import legendrian_check, standard_B
from oscdual.osculation import generic_osc_dim, osculating_dual
from oscdual.projective import apply_map, hyperplane_containment, proj_equal

ALL_SPECS = list(monomial_specs(8))


def strs(v):
    return [str(c) for c in v]


def test_monomial_specs():
    assert strs(monomial_curve(MonomialSpec(1, 2, 3)).coords) == ["1", "t", "t^2", "t^3"]
    assert strs(monomial_curve(MonomialSpec(1, 2, 4)).coords) == ["1", "t", "t^2", "t^4"]
    for bad in [(2, 2, 3), (0, 1, 2), (2, 4, 6), (3, 2, 5)]:
        with pytest.raises(CatalogError):
            MonomialSpec(*bad)
    assert len(ALL_SPECS) == len({(s.a, s.b, s.c) for s in ALL_SPECS})
    assert all(s.c <= 8 for s in ALL_SPECS)


def test_monomial_dual_exponent_formula():
    assert monomial_dual_exponents(MonomialSpec(1, 2, 3)) == ((0, 1, 2, 3), True)
    assert monomial_dual_exponents(MonomialSpec(1, 2, 4)) == ((0, 2, 3, 4), False)
    assert monomial_dual_exponents(MonomialSpec(2, 3, 5)) == ((0, 2, 3, 5), True)


def test_monomial_contact_form_examples():
    b = monomial_contact_form(MonomialSpec(1, 2, 3))
    assert b.matrix[0][3] == -1 and b.matrix[1][2] == 3
    assert legendrian_check(monomial_curve(MonomialSpec(1, 2, 3)), b).legendrian
    assert monomial_contact_form(MonomialSpec(1, 2, 4)) is None
    b = monomial_contact_form(MonomialSpec(2, 3, 5))
    assert (b.matrix[0][3], b.matrix[1][2]) == (-1, 5)
    assert 5 * b.matrix[0][3] + (3 - 2) * b.matrix[1][2] == 0


@pytest.mark.parametrize("s", ALL_SPECS, ids=lambda s: f"{s.a}-{s.b}-{s.c}")
def test_monomial_duality_witness(s):
    dual, exponent_curve, witness = monomial_dual_witness(s)
    assert exponents_of(exponent_curve) == (0, s.c - s.b, s.c - s.a, s.c)
    assert proj_equal(apply_map(witness, dual), exponent_curve)
    assert certify_monomial_selfdual(s)


def test_hypersurface_family_examples():
    c = hypersurface_family_curve(2, "t^3", ("t",))
    assert strs(c.coords) == ["1", "1/2*t^3", "t", "-3/2*t^2"]
    assert legendrian_check(c, standard_B(2)).legendrian
    s = hypersurface_family_curve(3, "x2^3 + x3^3")
    assert len(s.coords) == 6
    hypersurface_family_curve(3, "x2^2*x3")
    with pytest.raises(CatalogError):
        hypersurface_family_curve(3, "x2^3 + x3^2")
    with pytest.raises(CatalogError):
        hypersurface_family_curve(3, "x2^2 + x3^2")


@pytest.mark.parametrize("n, F", [
    (2, "x2^3"), (2, "x2^5"), (3, "x2^3 + x3^3"), (3, "x2^2*x3"), (3, "x2^4 + x3^4"),
    (3, "x2^3 - 2*x2*x3^2"), (4, "x2^3 + x3^3 + x4^3"), (4, "x2*x3*x4"),
])
def test_hypersurface_family_is_legendrian(n, F):
    assert legendrian_check(hypersurface_family_curve(n, F), standard_B(n)).legendrian


def test_v_family_examples():
    assert strs(v_family(2).coords) == ["1", "t1", "t2", "t1^2", "t2^2", "t1^3 + t2^3"]
    assert len(v_family(3).coords) == 8
    with pytest.raises(CatalogError):
        v_family(1)


@pytest.mark.parametrize("k", [2, 3])
def test_v_family_duality(k):
    v = v_family(k)
    assert generic_osc_dim(v, 2) == 2 * k
    w = v_family_witness(k)
    assert w.correction.is_zero()
    assert proj_equal(apply_map(w.map, w.dual), v)
    assert certify_v_family_selfdual(k)
    assert hyperplane_containment(v) is None


def test_v_family_dual_shape():
    d = osculating_dual(v_family(2))
    assert strs(d.coords) == ["4*t1^3 + 4*t2^3", "-12*t1^2", "-12*t2^2", "12*t1", "12*t2", "-4"]


def test_from_name():
    assert from_name("monomial:1,2,3") == monomial_curve(MonomialSpec(1, 2, 3))
    assert from_name("vfamily:2") == v_family(2)
    assert len(from_name("hypersurface:3:x2^3 + x3^3").coords) == 6
    for bad in ["monomial:1,2", "torus:1", "vfamily:x", "monomial:2,4,6"]:
        with pytest.raises(CatalogError):
            from_name(bad)


@pytest.mark.parametrize("k", [2, 3])
def test_v_family_is_legendrian_for_explicit_form(k):
    """V_k is integral for p_{0,2k+1} = -1, p_{i,k+i} = 3; sympy confirms the form is nondegenerate."""
    import sympy
    from oscdual.contact import SkewForm, find_contact_form

    size = 2 * k + 2
    m = [[0] * size for _ in range(size)]
    m[0][size - 1], m[size - 1][0] = -1, 1
    for i in range(1, k + 1):
        m[i][k + i], m[k + i][i] = 3, -3
    b = SkewForm(k + 1, tuple(tuple(r) for r in m))
    assert legendrian_check(v_family(k), b).legendrian
    assert sympy.Matrix(m).det() == 9 ** k
    assert find_contact_form(v_family(k)).found

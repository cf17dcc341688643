import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from fibercomp.fibered_knots import (
    Cable,
    ConnectedSum,
    Fig8,
    Mirror,
    Reverse,
    TorusKnot,
    Unknot,
    UnsupportedExpression,
    alexander,
    alexander_homological,
    alexander_structural,
    check_divisibility,
    genus,
    is_homotopy_ribbon,
    monodromy,
    parse_knot,
    predecessors,
)
from fibercomp.fdtc import fdtc
from fibercomp.surface_kernel import ParseError

t = sympy.Symbol("t")


def coeffs(expr):
    c = [int(x) for x in reversed(sympy.Poly(sympy.expand(expr), t).all_coeffs())]
    while c and c[0] == 0:
        c.pop(0)
    return tuple(-x for x in c) if c[0] < 0 else tuple(c)


def cyclotomic_torus(p, q):
    """Product of the cyclotomic factors of (t^pq - 1)(t - 1)/((t^p - 1)(t^q - 1))."""
    q = abs(q)
    out = sympy.Integer(1)
    for d in sympy.divisors(p * q):
        if p % d and q % d:
            out *= sympy.cyclotomic_poly(d, t)
    return out


torus_params = st.sampled_from([(2, 3), (2, 5), (2, 7), (3, 4), (3, 5), (2, -3), (3, -4), (4, 5)])


def knots(depth=2):
    base = st.one_of(st.just(Fig8()), torus_params.map(lambda pq: TorusKnot(*pq)))
    if depth == 0:
        return base
    sub = knots(depth - 1)
    return st.one_of(
        base,
        st.builds(lambda p, s, k: Cable(p, s, k), st.sampled_from([2, 3]), st.sampled_from([1, -1]), sub),
        st.builds(lambda a, b: ConnectedSum((a, b)), sub, sub),
        sub.map(Mirror),
        sub.map(Reverse),
    )


def test_parse_examples():
    assert parse_knot("cable(2,1, fig8)") == Cable(2, 1, Fig8())
    assert parse_knot("sum(torus(2,3), mirror(torus(2,3)))") == ConnectedSum(
        (TorusKnot(2, 3), Mirror(TorusKnot(2, 3)))
    )
    assert parse_knot("unknot") == Unknot()
    for s in ["fig8", "cable(3,-1,torus(2,5))", "reverse(mirror(fig8))", "sum(fig8,fig8,torus(3,4))"]:
        assert str(parse_knot(s)) == s


@pytest.mark.parametrize(
    "text,token,pos",
    [
        ("cable(2,1,fig9)", "fig9", 10),
        ("fig8 x", "x", 5),
        ("torus(2,3))", ")", 10),
        ("sum(fig8,", "", 9),
        ("torus(2,4)", "torus", 0),
    ],
)
def test_parse_errors(text, token, pos):
    with pytest.raises(ParseError) as e:
        parse_knot(text)
    assert e.value.token == token and e.value.position == pos


def test_cable_with_large_slope_is_unsupported():
    with pytest.raises(UnsupportedExpression):
        monodromy("cable(2,3,fig8)")


def test_alexander_examples():
    assert alexander("torus(2,3)") == (1, -1, 1)
    assert alexander("fig8") == coeffs(sympy.Matrix([[2, 1], [1, 1]]).charpoly(t).as_expr())
    assert alexander("cable(2,1,fig8)") == (1, 0, -3, 0, 1)
    assert alexander("unknot") == (1,)


@pytest.mark.parametrize("p,q", [(2, 3), (2, 5), (3, 4), (3, 5), (2, 9), (4, 7), (5, 6), (3, -7)])
def test_torus_alexander_cyclotomic(p, q):
    assert alexander(f"torus({p},{q})") == coeffs(cyclotomic_torus(p, q))


@settings(max_examples=120, deadline=None)
@given(knots())
def test_alexander_routes_agree(k):
    assert alexander_structural(k) == alexander_homological(k)


@settings(max_examples=120, deadline=None)
@given(knots())
def test_genus_matches_fiber(k):
    assert monodromy(k).surface.components == ((genus(k), 1),)


@settings(max_examples=120, deadline=None)
@given(knots())
def test_alexander_is_a_knot_polynomial(k):
    a = alexander(k)
    assert a == a[::-1]
    assert abs(sum(a)) == 1
    assert len(a) - 1 == 2 * genus(k)  # fibered: the degree is twice the genus


def test_genus_examples():
    assert genus("torus(2,3)") == 1
    assert genus("cable(2,1,fig8)") == 2
    assert genus("unknot") == 0
    assert genus("torus(3,4)") == 3


def test_root_fdtc_of_mirror_and_reverse():
    assert fdtc(monodromy("torus(2,3)"), "K.d") == sympy.Rational(1, 6)
    assert fdtc(monodromy("mirror(torus(2,3))"), "K.d") == -sympy.Rational(1, 6)
    assert fdtc(monodromy("reverse(torus(2,3))"), "K.d") == sympy.Rational(1, 6)


def test_divisibility_examples():
    assert check_divisibility("fig8", "fig8")
    assert check_divisibility("unknot", "cable(2,1,fig8)")
    # t^2 - 3t + 1 does not divide t^4 - 3t^2 + 1
    assert not check_divisibility("fig8", "cable(2,1,fig8)")
    assert check_divisibility("fig8", "sum(fig8,torus(2,3))")


def test_cable_predecessors_have_no_unknot():
    preds, comp = predecessors("cable(2,1,fig8)")
    assert comp == "exhaustive"
    assert all(p.knot != Unknot() for p in preds)
    assert [str(p.knot) for p in preds] == ["cable(2,1,fig8)"]
    assert is_homotopy_ribbon("cable(2,1,fig8)")[0] is False


def test_trefoil_predecessors():
    preds, comp = predecessors("torus(2,3)")
    assert comp == "exhaustive"
    assert [str(p.knot) for p in preds] == ["torus(2,3)"]


def test_double_fig8_predecessors():
    k = parse_knot("sum(fig8,fig8)")
    preds, comp = predecessors(k)
    names = {str(p.knot) for p in preds}
    assert "unknot" in names and "sum(fig8,fig8)" in names
    for p in preds:
        if p.knot is not None:
            assert check_divisibility(p.knot, k)
    ans, comp, route = is_homotopy_ribbon(k)
    assert ans and comp == "exhaustive" and route[-1] == "F2_1_1"


def test_unknot_is_ribbon():
    assert is_homotopy_ribbon("unknot")[0] is True

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import text_of, twist_words, twist_words_ab
from fibercomp.surface_kernel import (
    MappingClass,
    ParseError,
    act_on_curve,
    disjoint_union,
    geometric_intersection,
    parse_mapping_class,
    parse_surface,
    slope_curve,
)

T1 = parse_surface("S{(1,1)}")
T2 = parse_surface("S{(1,1),(1,1)}")

slopes = st.tuples(st.integers(-6, 6), st.integers(-6, 6)).filter(lambda v: v != (0, 0))


def test_parse_both_syntaxes():
    a = parse_surface("surface S { component(genus=1, boundary=1) }")
    assert a == T1
    assert T1.surface().components == ((1, 1),)
    assert parse_surface("S{(2,0),(0,3)}").surface().components == ((2, 0), (0, 3))


def test_parse_errors_locate_token():
    with pytest.raises(ParseError) as e:
        parse_mapping_class(T1, "Ta Tq")
    assert e.value.token == "Tq" and e.value.position == 3
    with pytest.raises(ParseError) as e:
        parse_surface("S{(1,1) x}")
    assert e.value.token == "x"


def test_empty_word_is_identity():
    f = parse_mapping_class(T1, "")
    assert f.is_identity(rel_boundary=True)
    assert f == MappingClass.identity(T1)


def test_boundary_twist_is_trivial_only_freely():
    f = parse_mapping_class(T1, "Td")
    assert f.is_identity(rel_boundary=False)
    assert not f.is_identity(rel_boundary=True)
    assert f.fdtc_at("C0.d0") == 1


def test_two_component_labels():
    f = parse_mapping_class(T2, "Ta_1 Tb_2^-1")
    assert f.elems[0].L != f.elems[1].L
    assert parse_mapping_class(T2, f.to_text()).equals(f)


@settings(max_examples=120, deadline=None)
@given(twist_words, twist_words, twist_words)
def test_group_laws(u, v, w):
    f, g, h = (parse_mapping_class(T1, text_of(x)) for x in (u, v, w))
    assert f.compose(g).compose(h).equals(f.compose(g.compose(h)))
    assert f.compose(f.inverse()).is_identity(rel_boundary=True)
    assert f.power(3).equals(f.compose(f).compose(f))


@settings(max_examples=120, deadline=None)
@given(twist_words)
def test_text_round_trip(u):
    f = parse_mapping_class(T1, text_of(u))
    assert parse_mapping_class(T1, f.to_text()).equals(f)


@settings(max_examples=120, deadline=None)
@given(twist_words_ab, twist_words_ab, slopes)
def test_action_functorial(u, v, s):
    f, g = parse_mapping_class(T1, text_of(u)), parse_mapping_class(T1, text_of(v))
    c = slope_curve(T1, "C0", s)
    assert act_on_curve(f.compose(g), c) == act_on_curve(f, act_on_curve(g, c))
    assert act_on_curve(MappingClass.identity(T1), c) == c


@settings(max_examples=120, deadline=None)
@given(twist_words_ab, slopes, slopes)
def test_intersection_symmetric_and_invariant(u, s1, s2):
    f = parse_mapping_class(T1, text_of(u))
    c1, c2 = slope_curve(T1, "C0", s1), slope_curve(T1, "C0", s2)
    i12 = geometric_intersection(c1, c2)
    assert i12 == geometric_intersection(c2, c1)
    assert i12 == geometric_intersection(act_on_curve(f, c1), act_on_curve(f, c2))


@settings(max_examples=120, deadline=None)
@given(slopes, slopes)
def test_intersection_matches_determinant(s1, s2):
    from math import gcd

    p1, q1 = s1[0] // gcd(*s1), s1[1] // gcd(*s1)
    p2, q2 = s2[0] // gcd(*s2), s2[1] // gcd(*s2)
    c1, c2 = slope_curve(T1, "C0", s1), slope_curve(T1, "C0", s2)
    assert geometric_intersection(c1, c2) == abs(p1 * q2 - p2 * q1)


def test_disjoint_union_indices():
    f = parse_mapping_class(T1, "Ta")
    u, left, right = disjoint_union(f, f)
    assert left == [0] and right == [1]
    assert u.surface.components == ((1, 1), (1, 1))

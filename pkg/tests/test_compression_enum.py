import pytest
from hypothesis import given, settings

from conftest import text_of, twist_words
from fibercomp.algebraic import AlgebraicNumber
from fibercomp.compression_enum import (
    FORMS,
    all_compressed_classes,
    b1_minus_b2,
    enum_form_1_1,
    enum_form_1_2,
    enum_form_1_3,
    enum_form_ibundle,
    extends_over,
    is_disk_identity,
    minimal_compressions,
    monotone,
)
from fibercomp.fdtc import chain_sum
from fibercomp.fibered_knots import monodromy
from fibercomp.nt_classify import canonical_key, decompose, max_dilatation
from fibercomp.surface_kernel import parse_mapping_class, parse_surface, renamed

T1 = parse_surface("S{(1,1)}")

CORPUS = [
    "fig8",
    "torus(2,3)",
    "torus(2,5)",
    "torus(3,4)",
    "cable(2,1,fig8)",
    "sum(fig8,fig8)",
    "sum(torus(2,3),mirror(torus(2,3)))",
    "sum(torus(2,3),torus(2,3))",
    "mirror(torus(2,5))",
    "sum(fig8,torus(2,3))",
]


def comps(g):
    return sorted(g.surface.components)


@pytest.fixture(scope="module")
def cable_closure():
    return all_compressed_classes(monodromy("cable(2,1,fig8)"))


def intermediate(closure):
    return next(g for g in closure.classes if comps(g) == [(0, 1), (2, 0)])


def test_cable_unique_minimal(cable_closure):
    f = monodromy("cable(2,1,fig8)")
    rs, complete = minimal_compressions(f)
    assert complete and len(rs) == 1
    (r,) = rs
    assert r.body.form == "F1_1" and r.body.curves == [["K.d"]]
    assert extends_over(r, f)


def test_cable_reduction_orbit_rejected():
    f = monodromy("cable(2,1,fig8)")
    d = decompose(f)
    found = [r.body.curves for r in enum_form_1_1(f, d)]
    assert all("K.d" in c[0] for c in found)
    assert enum_form_1_2(f, d) == ([], True)
    assert enum_form_1_3(f, d) == ([], True)
    assert enum_form_ibundle(f, d) == ([], True)


def test_cable_intermediate(cable_closure):
    phi1 = intermediate(cable_closure)
    d = decompose(phi1)
    (delta,) = d.chain_orbits(("delta",))
    assert chain_sum(phi1, d.chains[delta[0]]) == -4
    rs, complete = minimal_compressions(phi1)
    assert complete and len(rs) == 1
    assert rs[0].body.form == "F1_1"
    assert comps(rs[0].interior_map) == [(0, 1), (1, 0), (1, 0)]
    assert enum_form_ibundle(phi1, d) == ([], True)


def test_cable_closure(cable_closure):
    assert len(cable_closure) == 3
    assert cable_closure.completeness == "exhaustive"
    assert sorted(comps(g) for g in cable_closure.classes) == [
        [(0, 1), (1, 0), (1, 0)],
        [(0, 1), (2, 0)],
        [(2, 1)],
    ]
    assert not any(is_disk_identity(g) for g in cable_closure.classes)
    terminal = cable_closure.classes[-1]
    assert cable_closure.route(terminal) == ["F1_1", "F1_1"]
    assert minimal_compressions(terminal) == ([], True)


def test_unknot_has_no_compression():
    f = monodromy("unknot")
    assert minimal_compressions(f) == ([], True)
    cl = all_compressed_classes(f)
    assert len(cl) == 1 and is_disk_identity(cl.classes[0])


def test_fig8_closure_size():
    cl = all_compressed_classes(monodromy("fig8"))
    assert len(cl) == 2
    assert comps(cl.classes[1]) == [(0, 1), (1, 0)]


def test_torus_knot_quotient_has_no_curve():
    f = monodromy("torus(2,3)")
    assert enum_form_1_2(f) == ([], True)


def test_identity_on_holed_torus_has_one_orbifold_body():
    f = parse_mapping_class(T1, "")
    rs, complete = enum_form_1_2(f)
    assert complete and len(rs) == 1
    assert rs[0].body.curves[0]["kind"] == "nonseparating"
    assert comps(rs[0].interior_map) == [(0, 1)]


def test_fig8_has_no_inner_compression():
    f = monodromy("fig8")
    assert enum_form_1_3(f) == ([], True)
    rs, _ = minimal_compressions(f)
    assert [r.body.form for r in rs] == ["F1_1"]


def test_double_folds_to_nothing():
    # after the boundary is capped, the two summands form a double along the sum curve
    cl = all_compressed_classes(monodromy("sum(fig8,fig8)"))
    double = intermediate(cl)
    rs, _ = enum_form_ibundle(double)
    assert [r.body.form for r in rs] == ["F2_1_1"]
    assert comps(rs[0].interior_map) == [(0, 1)]
    assert extends_over(rs[0], double)


@pytest.mark.parametrize(
    "k,ribbon",
    [
        ("sum(fig8,fig8)", True),
        ("sum(torus(2,3),mirror(torus(2,3)))", True),
        ("sum(torus(2,3),torus(2,3))", False),
        ("cable(2,1,fig8)", False),
    ],
)
def test_disk_reachability(k, ribbon):
    cl = all_compressed_classes(monodromy(k))
    hits = [g for g in cl.classes if is_disk_identity(g)]
    assert bool(hits) == ribbon
    if hits:
        assert "F2_1_1" in cl.route(hits[0])


@pytest.fixture(scope="module", params=CORPUS)
def corpus_closure(request):
    f = monodromy(request.param)
    return f, all_compressed_classes(f)


def test_closure_finite_and_closed(corpus_closure):
    f, cl = corpus_closure
    assert cl.completeness == "exhaustive"
    assert 1 <= len(cl) <= 8
    keys = set(cl.keys)
    assert len(keys) == len(cl.keys)
    for g in cl.classes:
        rs, complete = minimal_compressions(g)
        assert complete
        assert {r.key for r in rs} <= keys


def test_closure_monotone(corpus_closure):
    f, cl = corpus_closure
    for g, key in zip(cl.classes, cl.keys):
        for r in cl.results[key]:
            h = r.interior_map
            assert max_dilatation(h) <= max_dilatation(g)
            assert b1_minus_b2(h) < b1_minus_b2(g)
            assert g.domain.betti1() >= h.domain.betti1()
            assert monotone(g, h)
            assert (0, 0) not in h.surface.components
            assert r.body.exterior == g.surface
            assert r.body.interior == h.surface
            assert extends_over(r, g)


def test_forms_are_exclusive(corpus_closure):
    f, cl = corpus_closure
    for key in cl.keys:
        seen = {}
        for r in cl.results[key]:
            assert r.body.form in FORMS
            assert seen.setdefault(r.key, r.body.form) == r.body.form


def test_key_of_interior(corpus_closure):
    f, cl = corpus_closure
    for key in cl.keys:
        for r in cl.results[key]:
            assert r.key == canonical_key(r.interior_map)


def test_renaming_does_not_change_closure():
    f = monodromy("sum(fig8,torus(2,3))")
    a = all_compressed_classes(f)
    b = all_compressed_classes(renamed(f, "Z"))
    assert sorted(a.keys) == sorted(b.keys)


def test_budget_is_reported():
    cl = all_compressed_classes(monodromy("sum(fig8,fig8)"), max_classes=2)
    assert cl.completeness == "bounded" and len(cl) == 2


@pytest.mark.parametrize(
    "surface,word",
    [("S{(2,0)}", ""), ("S{(1,1)}", "Ta Tb"), ("S{(0,3)}", ""), ("S{(2,1)}", ""), ("S{(1,0)}", "Ta Tb^-1")],
)
def test_parsed_surfaces_close(surface, word):
    f = parse_mapping_class(parse_surface(surface), word)
    cl = all_compressed_classes(f)
    assert cl.completeness == "exhaustive"
    for g, key in zip(cl.classes, cl.keys):
        for r in cl.results[key]:
            assert monotone(g, r.interior_map)


def test_pa_on_closed_torus_is_incompressible_by_fold():
    f = parse_mapping_class(parse_surface("S{(1,0)}"), "Ta Tb^-1")
    rs, complete = minimal_compressions(f)
    assert complete and rs == []
    assert max_dilatation(f) == AlgebraicNumber.largest_real_root((1, -3, 1))


@settings(max_examples=120, deadline=None)
@given(twist_words)
def test_holed_torus_compressions_monotone(u):
    f = parse_mapping_class(T1, text_of(u))
    rs, _ = minimal_compressions(f)
    assert rs
    for r in rs:
        assert monotone(f, r.interior_map)
        assert extends_over(r, f)
        assert max_dilatation(r.interior_map) <= max_dilatation(f)

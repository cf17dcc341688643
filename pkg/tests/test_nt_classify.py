import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import text_of, twist_words, twist_words_ab
from fibercomp.algebraic import AlgebraicNumber
from fibercomp.fibered_knots import monodromy
from fibercomp.nt_classify import (
    canonical_key,
    canonical_reduction,
    classify,
    decompose,
    max_dilatation,
)
from fibercomp.surface_kernel import act_on_curve, disjoint_union, parse_mapping_class, parse_surface, renamed
from fibercomp.torus import mat_trace

T1 = parse_surface("S{(1,1)}")
FIG8_LAMBDA = AlgebraicNumber.largest_real_root((1, -3, 1))

CORPUS = [
    "fig8",
    "torus(2,3)",
    "torus(2,5)",
    "torus(3,4)",
    "cable(2,1,fig8)",
    "sum(fig8,fig8)",
    "sum(torus(2,3),mirror(torus(2,3)))",
    "sum(fig8,torus(2,3))",
    "mirror(torus(2,5))",
]


def on_t1(word):
    return parse_mapping_class(T1, text_of(word))


def brute_period(f, bound=24):
    for n in range(1, bound + 1):
        if f.power(n).is_identity(rel_boundary=False):
            return n
    return None


@pytest.mark.parametrize("p,q", [(2, 3), (2, 5), (3, 4), (2, -3), (3, 5)])
def test_torus_knot_periodic(p, q):
    f = monodromy(f"torus({p},{q})")
    t = classify(f)
    assert t.tag == "periodic" and t.period == p * abs(q)
    assert brute_period(f, p * abs(q)) == p * abs(q)


def test_fig8_is_pa():
    t = classify(monodromy("fig8"))
    assert t.tag == "pA" and t.dilatation == FIG8_LAMBDA
    assert 2.61 < float(t.dilatation) < 2.62
    assert t.to_json()["type"] == "pseudo-anosov"


def test_single_twist_reduces_along_its_curve():
    t = classify(parse_mapping_class(T1, "Ta"))
    assert t.tag == "reducible"
    assert t.reduction.labels() == ["C0:1/0"]


def test_cable_decomposition():
    f = monodromy("cable(2,1,fig8)")
    d = decompose(f)
    tags = sorted((p.tag, p.genus, p.n_boundary) for p in d.pieces)
    assert tags == [("pA", 1, 2), ("periodic", 0, 3)]
    pa = next(p for p in d.pieces if p.tag == "pA")
    assert len(pa.cycles) == 1 and len(pa.cycles[0]) == 2  # the two tori are swapped
    assert len(d.chain_orbits(("delta",))) == 1
    assert len(d.reduction) == 2


def test_cable_dilatation_is_per_step_growth():
    # the two tori are swapped, so one step of the map is a square root of the return
    lam = max_dilatation(monodromy("cable(2,1,fig8)"))
    assert lam**2 == FIG8_LAMBDA
    assert lam == AlgebraicNumber.largest_real_root((1, -1, -1))


def test_sum_pieces():
    d = decompose(monodromy("sum(torus(2,3),fig8)"))
    tags = sorted((p.tag, p.period, p.genus, p.n_boundary) for p in d.pieces if p.tag == "periodic")
    assert tags == [("periodic", 1, 0, 3), ("periodic", 6, 1, 1)]
    assert [p.tag for p in d.pieces].count("pA") == 1


def test_periodic_dilatation_is_one():
    assert max_dilatation(monodromy("torus(3,4)")) == AlgebraicNumber.rational(1)
    assert max_dilatation(parse_mapping_class(T1, "")) == AlgebraicNumber.rational(1)


def test_decomposition_json_shape():
    out = decompose(monodromy("cable(2,1,fig8)")).to_json()
    assert set(out) == {"reduction", "pieces"}
    for p in out["pieces"]:
        assert p["tag"] in ("periodic", "pA") and p["orbit"]
        assert ("period" in p) == (p["tag"] == "periodic")
        assert ("dilatation_minpoly" in p) == (p["tag"] == "pA")


@pytest.mark.parametrize("k", CORPUS)
def test_reduction_invariant(k):
    f = monodromy(k)
    red = canonical_reduction(f)
    assert act_on_curve(f, red) == red


@pytest.mark.parametrize("k", CORPUS)
def test_pa_pieces_match_return_trace(k):
    f = monodromy(k)
    for p in decompose(f).pieces:
        if p.tag != "pA":
            continue
        n = len(p.cycles[0])
        i0 = p.cycles[0][0]
        tr = abs(mat_trace(f.power(n).elems[i0].L))
        assert tr > 2
        assert p.dilatation**n == AlgebraicNumber.largest_real_root((1, -tr, 1))


@pytest.mark.parametrize("k", CORPUS)
def test_key_ignores_names(k):
    f = monodromy(k)
    assert canonical_key(renamed(f, "Z")) == canonical_key(f)


def test_key_separates_corpus():
    keys = {canonical_key(monodromy(k)) for k in CORPUS}
    assert len(keys) == len(CORPUS)


def test_key_of_union_is_order_free():
    f, g = monodromy("fig8"), monodromy("torus(2,3)")
    assert canonical_key(disjoint_union(f, g)[0]) == canonical_key(disjoint_union(g, f)[0])


@settings(max_examples=120, deadline=None)
@given(twist_words, twist_words)
def test_classification_is_conjugation_invariant(u, w):
    f, h = on_t1(u), on_t1(w)
    g = h.compose(f).compose(h.inverse())
    a, b = classify(f), classify(g)
    assert a.tag == b.tag
    assert a.period == b.period
    assert a.dilatation == b.dilatation
    assert canonical_key(f) == canonical_key(g)


@settings(max_examples=120, deadline=None)
@given(twist_words_ab, st.integers(2, 3))
def test_dilatation_of_powers(u, n):
    f = on_t1(u)
    assume(classify(f).tag == "pA")
    assert max_dilatation(f.power(n)) == max_dilatation(f) ** n


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(["Ta Tb", "Ta Tb Ta"]), st.integers(1, 6), st.integers(-2, 2), twist_words)
def test_periodic_period_is_minimal(base, k, d, w):
    h = on_t1(w)
    r = parse_mapping_class(T1, base).power(k).compose(parse_mapping_class(T1, "Td").power(d))
    f = h.compose(r).compose(h.inverse())
    t = classify(f)
    assert t.tag == "periodic"
    assert brute_period(f) == t.period

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import text_of, twist_words
from fibercomp.fdtc import chain_sum, fdtc, fdtc_report, ibundle_sum_check
from fibercomp.fibered_knots import monodromy
from fibercomp.nt_classify import decompose
from fibercomp.surface_kernel import parse_mapping_class, parse_surface

T1 = parse_surface("S{(1,1)}")


def test_torus_knot_values():
    for p, q in ((2, 3), (2, 5), (3, 4), (2, 7)):
        assert fdtc(monodromy(f"torus({p},{q})"), "K.d") == Fraction(1, p * q)
        assert fdtc(monodromy(f"mirror(torus({p},{q}))"), "K.d") == Fraction(-1, p * q)


def test_cable_values():
    f = monodromy("cable(2,1,fig8)")
    rep = fdtc_report(f)
    assert rep.per_boundary["K.d"] == Fraction(1, 2)
    assert rep.per_boundary["K/0.d"] == 0
    assert fdtc(monodromy("fig8"), "K.d") == 0


def test_intermediate_sum_rejects_fold():
    from fibercomp.compression_enum import all_compressed_classes

    cl = all_compressed_classes(monodromy("cable(2,1,fig8)"))
    phi1 = cl.classes[1]
    d = decompose(phi1)
    (c,) = d.reduction
    assert chain_sum(phi1, d.chains[c]) == -4
    assert not ibundle_sum_check(d, d.chains[c])


@settings(max_examples=120, deadline=None)
@given(twist_words, st.integers(1, 6))
def test_homogeneity_on_words(w, n):
    f = parse_mapping_class(T1, text_of(w))
    assert fdtc(f.power(n), "C0.d0") == n * fdtc(f, "C0.d0")


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(["torus(2,3)", "torus(3,5)", "torus(2,9)", "cable(2,1,fig8)", "cable(3,-1,torus(2,3))"]), st.integers(1, 8))
def test_homogeneity_on_models(k, n):
    f = monodromy(k)
    assert fdtc(f.power(n), "K.d") == n * fdtc(f, "K.d")

from math import gcd

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import lift_of, twist_words_ab
from fibercomp.fibered_knots import monodromy
from fibercomp.periodic_orbifold import (
    _block_quotient,
    curves_up_to_liftable_symmetry,
    minimality_filter_1_2,
    orbifold_signature,
    quotient_orbifold,
    riemann_hurwitz_by_cycles,
    surgery,
)
from fibercomp.surface_kernel import BlockSurface, Block, MappingClass, PeriodicElement, PeriodicModel
from fibercomp.torus import TorusLift, mat_inv, mat_mul

coprime = st.tuples(st.integers(2, 12), st.integers(3, 30)).filter(lambda t: gcd(*t) == 1 and t[0] < t[1])


def test_trefoil_quotient():
    o = quotient_orbifold(monodromy("torus(2,3)"))
    assert o.N == 6 and o.genus == 0
    assert sorted((c.order, c.h) for c in o.cones) == [(2, 3), (3, 4)]
    assert [b.h for b in o.boundaries] == [5]
    assert curves_up_to_liftable_symmetry(o) == []


@settings(max_examples=120, deadline=None)
@given(coprime, st.booleans())
def test_riemann_hurwitz_torus_knots(pq, neg):
    p, q = pq
    o = quotient_orbifold(monodromy(f"torus({p},{-q if neg else q})"))
    o.check()
    chi = 1 - (p - 1) * (q - 1)
    assert o.cover_euler == chi
    assert riemann_hurwitz_by_cycles(o) == chi
    assert o.N * o.euler() == chi


def _periodic_lift(word, k):
    """Conjugate of a finite order lift, with the boundary twisted by the winding."""
    base = [TorusLift.twist_a().compose(TorusLift.twist_b()), TorusLift.twist_a().compose(TorusLift.twist_b()).compose(TorusLift.twist_a())][k % 2]
    c = lift_of(word)
    return c.compose(base.power(1 + k // 2)).compose(c.inverse())


@settings(max_examples=120, deadline=None)
@given(twist_words_ab, st.integers(0, 9), st.booleans())
def test_riemann_hurwitz_torus_blocks(word, k, closed):
    lift = _periodic_lift(word, k)
    assume(lift.L != (1, 0, 0, 1))
    blk = Block("X", () if closed else ("X.d",))
    f = MappingClass(BlockSurface((blk,)), (0,), (lift,))
    o, n = _block_quotient(f, 0)
    o.check()
    chi = 0 if closed else -1
    assert riemann_hurwitz_by_cycles(o) == chi == o.cover_euler


def _doubled_piece(p, q):
    """Quotient of the closed piece left after capping the boundary of T(p,q) # mirror T(p,q)."""
    from fibercomp.compression_enum import compress_chains
    from fibercomp.nt_classify import decompose
    from fibercomp.periodic_orbifold import piece_orbifold

    f = monodromy(f"sum(torus({p},{q}),mirror(torus({p},{q})))")
    d = decompose(f)
    orbit = next(o for o in d.chain_orbits() if d.chain_kind[o[0]] == "boundary")
    g = compress_chains(f, d, orbit)
    e = decompose(g)
    piece = max(e.pieces, key=lambda pc: pc.genus)
    return piece_orbifold(g, piece.blocks)


@settings(max_examples=120, deadline=None)
@given(st.sampled_from([(2, 3), (2, 5), (3, 4), (2, 7), (3, 5)]), st.data())
def test_surgery_euler_count(pq, data):
    o = _doubled_piece(*pq)
    curves = curves_up_to_liftable_symmetry(o)
    assert curves
    c = data.draw(st.sampled_from(curves))
    comps = surgery(o, c, "s")
    after = sum(comp.copies * comp.model.euler_characteristic() for comp in comps)
    lifts = gcd(c.h, o.N) if c.h % o.N else o.N
    spheres2 = o.cover_euler + 2 * lifts - after
    assert spheres2 >= 0 and spheres2 % 2 == 0
    for comp in comps:
        comp.model.validate()


def test_doubled_trefoil_has_fold_curve():
    o = _doubled_piece(2, 3)
    assert o.N == 6 and o.cover_euler == -2
    hs = sorted(c.h for c in curves_up_to_liftable_symmetry(o))
    assert 0 in hs and all(minimality_filter_1_2(o, c) for c in curves_up_to_liftable_symmetry(o) if c.h == 0)


def test_block_cycle_quotient_matches_single_block():
    m = PeriodicModel.identity(0, 3)
    blocks = tuple(Block(f"B{i}", (f"B{i}.x", f"B{i}.y", f"B{i}.z"), m) for i in range(3))
    elems = (PeriodicElement(0, (0, 0, 0)),) * 2 + (PeriodicElement(0, (0, 0, 0)),)
    f = MappingClass(BlockSurface(blocks), (1, 2, 0), elems)
    o, n = _block_quotient(f, 0)
    assert n == 3 and riemann_hurwitz_by_cycles(o) == 3 * -1


def test_mirror_signature_negates_monodromy():
    a = orbifold_signature(quotient_orbifold(monodromy("torus(2,3)")))
    b = orbifold_signature(quotient_orbifold(monodromy("mirror(torus(2,3))")))
    assert a != b
    assert sorted((o, (-h) % 6) for o, h in a[2]) == sorted(b[2])


def test_conjugation_of_periodic_lift_keeps_signature():
    base = TorusLift.twist_a().compose(TorusLift.twist_b())
    c = lift_of([("a", 2), ("b", -1)])
    g = c.compose(base).compose(c.inverse())
    sig = []
    for lift in (base, g):
        f = MappingClass(BlockSurface((Block("X", ("X.d",)),)), (0,), (lift,))
        sig.append(orbifold_signature(_block_quotient(f, 0)[0]))
    assert sig[0] == sig[1]
    assert mat_mul(c.L, mat_mul(base.L, mat_inv(c.L))) == g.L


def test_positive_genus_quotient_is_refused():
    f = monodromy("torus(2,3)")
    o = quotient_orbifold(f)
    from dataclasses import replace

    with pytest.raises(NotImplementedError):
        curves_up_to_liftable_symmetry(replace(o, genus=1))

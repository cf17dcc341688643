"""Quotient orbifolds of periodic pieces and curves on them.

A periodic piece is a union of blocks on which the mapping class acts with
finite order ``N``. Its quotient is a 2-orbifold with cone points and
boundary circles, together with ``h: H1 -> Z/N`` recording the monodromy of
the cyclic cover. Every peripheral loop (around a cone point or a boundary
circle, oriented as going around the puncture) has an ``h`` value, and on a
genus-0 quotient these sum to zero.

Cone points remember which block they came from (``source``); the
compression enumerator uses this to recognise folds between mirror blocks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import gcd
from typing import Iterable, Literal

from .surface_kernel import (
    Block,
    BlockSurface,
    MappingClass,
    PeriodicElement,
    PeriodicModel,
    boundary_h_from_fdtc,
)
from .torus import I2, NEG_I, TorusLift, mat_pow

__all__ = [
    "Cone",
    "OrbBoundary",
    "Orbifold2D",
    "OrbifoldCurve",
    "NotPeriodic",
    "torus_model",
    "piece_orbifold",
    "quotient_orbifold",
    "curves_up_to_liftable_symmetry",
    "minimality_filter_1_2",
    "surgery",
    "model_from_orbifold",
    "orbifold_signature",
    "periodic_conjugator",
    "riemann_hurwitz_by_cycles",
]


class NotPeriodic(ValueError):
    pass


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class Cone:
    order: int
    h: int
    source: str = ""


@dataclass(frozen=True)
class OrbBoundary:
    h: int
    labels: tuple[str, ...]  # preimage circles; the map sends labels[i] to labels[i+1]
    fdtc: Fraction  # coefficient of the first return power at each circle


@dataclass(frozen=True)
class Orbifold2D:
    genus: int
    boundaries: tuple[OrbBoundary, ...]
    cones: tuple[Cone, ...]
    N: int
    cover_euler: int = 0
    cover_components: int = 1

    def euler(self) -> Fraction:
        chi = Fraction(2 - 2 * self.genus - len(self.boundaries))
        for c in self.cones:
            chi -= 1 - Fraction(1, c.order)
        return chi

    def check(self) -> None:
        n = self.N
        for c in self.cones:
            if n % c.order or n // gcd(c.h, n) != c.order:
                raise ValueError(f"cone {c} inconsistent with N={n}")
        if self.genus == 0 and (sum(c.h for c in self.cones) + sum(b.h for b in self.boundaries)) % n:
            raise ValueError("peripheral monodromies do not sum to zero")
        for b in self.boundaries:
            if gcd(b.h, n) != len(b.labels):
                raise ValueError("boundary preimage count disagrees with h")
        if n * self.euler() != self.cover_euler:
            raise ValueError("Riemann-Hurwitz fails")


def riemann_hurwitz_by_cycles(o: Orbifold2D) -> int:
    """Euler characteristic of the cover counted by preimages.

    Each cone point with monodromy ``h`` has ``gcd(h, N)`` preimages (the cycles
    of translation by ``h`` on Z/N); the punctured underlying surface lifts
    with degree ``N``.
    """
    n = o.N
    punctured = 2 - 2 * o.genus - len(o.boundaries) - len(o.cones)
    return n * punctured + sum(gcd(c.h, n) for c in o.cones)


# ---------------------------------------------------------------------------
# models for torus classes of finite order

_ONE_HOLED_CONES = {1: (), 2: (2, 2, 2), 3: (3, 3), 4: (2, 4), 6: (2, 3)}


def _matrix_order(p) -> int:
    for k in (1, 2, 3, 4, 6):
        if mat_pow(p, k) == I2:
            return k
    raise NotPeriodic(f"matrix {p} has infinite order")


def _solve_cones(orders: tuple[int, ...], n: int, rest: int) -> tuple[tuple[int, int], ...]:
    """Cone monodromies of the given orders summing with ``rest`` to zero; must be unique up to order."""
    choices = [[h for h in range(1, n) if n // gcd(h, n) == m] for m in orders]
    sols = set()
    for hs in product(*choices):
        if (sum(hs) + rest) % n == 0:
            sols.add(tuple(sorted(zip(orders, hs))))
    if len(sols) != 1:
        raise ValueError(f"cone data for orders {orders} not determined ({len(sols)} solutions)")
    return next(iter(sols))


def torus_model(lift: TorusLift, closed: bool, name: str = "") -> PeriodicModel:
    """Periodic model of a finite-order torus class (closed or one-holed)."""
    if lift.reversing:
        raise NotPeriodic("orientation reversing")
    n = _matrix_order(lift.P)
    if n == 1:
        if closed:
            return PeriodicModel(name or "id-T2", 1, 0, 1, (), (), 1, ())
        return replace_name(PeriodicModel.identity(1, 1), name or "id-T11")
    c = lift.fdtc()
    hb = boundary_h_from_fdtc(c, 1, n)
    cones = _solve_cones(_ONE_HOLED_CONES[n], n, hb)
    if closed:
        cones = tuple(sorted(cones + ((n, hb),)))
        return PeriodicModel(name or f"T2/{n}", 1, 0, n, (), (), 0, cones)
    return PeriodicModel(name or f"T11/{n}", 1, 1, n, (0,), (c,), 0, cones)


def replace_name(model: PeriodicModel, name: str) -> PeriodicModel:
    from dataclasses import replace

    return replace(model, name=name)


# ---------------------------------------------------------------------------
# quotient of a periodic piece


def _return_element(f: MappingClass, i: int):
    """Composite of transfers around the block cycle through ``i``; the return map on block ``i``."""
    k = f.block_order(i)
    g = f.power(k)
    return g.elems[i], k


def _block_quotient(f: MappingClass, i: int) -> tuple[Orbifold2D, int]:
    """Quotient of the block cycle through ``i`` by ``f``; returns (orbifold, N of f on the cycle)."""
    b = f.domain.blocks[i]
    ret, kblock = _return_element(f, i)
    if b.is_torus:
        model = torus_model(ret, closed=not b.boundaries, name=b.name)
        r = 1
    else:
        if ret.rev:
            raise NotPeriodic("orientation reversing return map")
        model = b.model
        r = ret.k % model.period
    nb = model.period
    u = gcd(r, nb) if r else nb  # the return generates <rho^u>
    nq = nb // u  # order of the return map
    rr = (r // u) if r else 0
    inv = pow(rr, -1, nq) if nq > 1 else 0
    npiece = kblock * nq
    cones: list[Cone] = []
    for m, h in model.cones:
        q = nb // _lcm(nb // m, u)
        if q <= 1:
            continue
        count = u * q // m
        hq = ((m // q) * h // u) * inv % nq
        for _ in range(count):
            cones.append(Cone(q, (hq * kblock) % npiece, b.name))
    bds: list[OrbBoundary] = []
    gpow = f.power(kblock)
    for orb in model.boundary_orbits() if not b.is_torus else ([[0]] if b.boundaries else []):
        kk = len(orb)
        # labels in rho-order, then split into orbits of rho^r
        labs = [b.boundaries[j] for j in orb]
        step = r % kk if kk else 0
        seen: set[int] = set()
        for start in range(kk):
            if start in seen:
                continue
            idxs = [start]
            nxt = (start + step) % kk
            while nxt != start:
                idxs.append(nxt)
                nxt = (nxt + step) % kk
            seen.update(idxs)
            ret_pow = len(idxs)
            circle = labs[start]
            fd = gpow.power(ret_pow).fdtc_at(circle)
            h = boundary_h_from_fdtc(fd, ret_pow, nq) if nq > 1 else 0
            # labels in the order f visits them: block cycle then return
            chain = []
            for lab_idx in idxs:
                lab = labs[lab_idx]
                cur = lab
                chain_block = []
                lm = f.label_map()
                for _ in range(kblock):
                    chain_block.append(cur)
                    cur = lm[cur]
                chain.extend(chain_block)
            bds.append(OrbBoundary((h * kblock) % npiece, tuple(chain), fd))
    chi_block = b.euler_characteristic()
    chi_cover = chi_block * kblock
    # underlying genus from Riemann-Hurwitz for the quotient by <return>
    chi_orb_q = Fraction(chi_block, nq)
    base = chi_orb_q + len(bds) + sum(1 - Fraction(1, c.order) for c in cones)
    g2 = 2 - base
    if g2.denominator != 1 or int(g2) % 2:
        raise ValueError("inconsistent quotient genus")
    o = Orbifold2D(int(g2) // 2, tuple(bds), tuple(cones), npiece, chi_cover)
    return o, npiece


def _is_collar(f: MappingClass, i: int) -> bool:
    b = f.domain.blocks[i]
    return b.is_annulus() and b.model is not None and b.model.period == 1


def piece_orbifold(f: MappingClass, blocks: Iterable[int]) -> Orbifold2D:
    """Quotient orbifold of the periodic piece made of ``blocks`` (a union of block cycles)."""
    blocks = sorted(set(blocks))
    dom = f.domain
    core = [i for i in blocks if not _is_collar(f, i)]
    if not core:
        core = blocks
    collars = [i for i in blocks if i not in core]
    # boundary label -> partner across seams, skipping identity collars
    def across(lab: str) -> str | None:
        p = dom.partner(lab)
        while p is not None:
            j, idx = dom.owner(p)
            if j in collars:
                other = dom.blocks[j].boundaries[1 - idx]
                p = dom.partner(other)
                if p is None:
                    return None
                continue
            return p
        return None

    reps, seen = [], set()
    for i in core:
        if i in seen:
            continue
        cyc = [i]
        j = f.perm[i]
        while j != i:
            cyc.append(j)
            j = f.perm[j]
        seen.update(cyc)
        reps.append(i)
    parts = [_block_quotient(f, i)[0] for i in reps]
    ns = {p.N for p in parts}
    n = 1
    for x in ns:
        n = _lcm(n, x)
    if len(ns) > 1:
        raise NotPeriodic(f"blocks of the piece have different periods {sorted(ns)}")
    # glue quotient boundaries whose circles are seamed to each other
    all_b = [(pi, bi, bd) for pi, p in enumerate(parts) for bi, bd in enumerate(p.boundaries)]
    circle_owner = {lab: (pi, bi) for pi, bi, bd in all_b for lab in bd.labels}
    glued: set[tuple[int, int]] = set()
    parent = list(range(len(parts)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    extra_genus = 0
    for pi, bi, bd in all_b:
        if (pi, bi) in glued:
            continue
        p = across(bd.labels[0])
        if p is None or p not in circle_owner:
            continue
        qi, qb = circle_owner[p]
        other = parts[qi].boundaries[qb]
        if (bd.h + other.h) % n:
            raise ValueError("monodromies disagree across a seam")
        glued.add((pi, bi))
        glued.add((qi, qb))
        a, c = find(pi), find(qi)
        if a == c:
            extra_genus += 1
        else:
            parent[a] = c
    if len({find(x) for x in range(len(parts))}) != 1:
        raise ValueError("piece is not connected")
    chi_under = sum(2 - 2 * p.genus - len(p.boundaries) for p in parts)
    bds = tuple(bd for pi, bi, bd in all_b if (pi, bi) not in glued)
    genus = (2 - chi_under - len(bds)) // 2
    cones = tuple(c for p in parts for c in p.cones)
    cover = sum(p.cover_euler for p in parts)
    o = Orbifold2D(genus, bds, cones, n, cover)
    o.check()
    return o


def quotient_orbifold(f: MappingClass) -> Orbifold2D:
    """Quotient orbifold of a periodic class on a connected surface."""
    return piece_orbifold(f, range(len(f.domain.blocks)))


def orbifold_signature(o: Orbifold2D) -> tuple:
    """Conjugacy invariant of the periodic map (complete for genus-0 quotients)."""
    return (
        o.N,
        o.genus,
        tuple(sorted((c.order, c.h) for c in o.cones)),
        tuple(sorted((b.h, b.fdtc, len(b.labels)) for b in o.boundaries)),
    )


# ---------------------------------------------------------------------------
# curves


@dataclass(frozen=True)
class OrbifoldCurve:
    kind: Literal["separating", "nonseparating"]
    side: frozenset  # indices of items ("c", i) / ("b", i) on side A
    genus_a: int
    h: int

    def side_items(self, o: Orbifold2D, which: int = 0) -> list[tuple[str, int]]:
        items = _items(o)
        return sorted(self.side) if which == 0 else [x for x in items if x not in self.side]


def _items(o: Orbifold2D) -> list[tuple[str, int]]:
    return [("c", i) for i in range(len(o.cones))] + [("b", i) for i in range(len(o.boundaries))]


def _h_of(o: Orbifold2D, items) -> int:
    tot = 0
    for kind, i in items:
        tot += o.cones[i].h if kind == "c" else o.boundaries[i].h
    return tot % o.N


def _side_ok(genus: int, items) -> bool:
    cones = sum(1 for k, _ in items if k == "c")
    bds = sum(1 for k, _ in items if k == "b")
    if genus > 0:
        return True
    if bds == 0 and cones <= 1:
        return False  # bounds a disk with at most one cone point
    if bds == 1 and cones == 0:
        return False  # boundary parallel
    return True


def _side_key(o: Orbifold2D, genus: int, items) -> tuple:
    cones = tuple(sorted((o.cones[i].order, o.cones[i].h) for k, i in items if k == "c"))
    bds = tuple(sorted(i for k, i in items if k == "b"))
    return (genus, cones, bds)


def curves_up_to_liftable_symmetry(o: Orbifold2D) -> list[OrbifoldCurve]:
    """Essential simple closed curves of ``o``, one per orbit of the liftable symmetries.

    Homeomorphisms that lift must preserve ``h``; they may permute cone points
    with equal (order, h) but fix the boundary circles. On a genus-0 quotient
    two curves are equivalent exactly when they split the items the same way,
    so an orbit is determined by the unordered pair of side types.
    """
    items = _items(o)
    out: list[OrbifoldCurve] = []
    keys: set = set()
    if o.genus > 0 and o.N > 1:
        raise NotImplementedError("curve types on positive-genus quotients with N > 1")
    if o.genus > 0:
        out.append(OrbifoldCurve("nonseparating", frozenset(), 0, 0))
    for r in range(0, len(items) + 1):
        for side in combinations(items, r):
            rest = [x for x in items if x not in side]
            for ga in range(0, o.genus + 1):
                gb = o.genus - ga
                if not (_side_ok(ga, side) and _side_ok(gb, rest)):
                    continue
                key = frozenset([_side_key(o, ga, side), _side_key(o, gb, rest)])
                if key in keys:
                    continue
                keys.add(key)
                out.append(OrbifoldCurve("separating", frozenset(side), ga, _h_of(o, side)))
    return out


def minimality_filter_1_2(o: Orbifold2D, curve: OrbifoldCurve) -> bool:
    """Minimal iff ``h != 0``, or ``h == 0`` and every cone point lies in a disk side with exactly two cone points."""
    if curve.h % o.N:
        return True
    if not o.cones:
        return True
    if curve.kind == "nonseparating":
        return False
    sides = [(curve.genus_a, list(curve.side)), (o.genus - curve.genus_a, curve.side_items(o, 1))]
    for genus, items in sides:
        ncones = sum(1 for k, _ in items if k == "c")
        if ncones == 0:
            continue
        is_disk = genus == 0 and not any(k == "b" for k, _ in items)
        if not (is_disk and ncones == 2):
            return False
    return True


# ---------------------------------------------------------------------------
# surgery and rebuilding blocks


@dataclass
class LiftedComponent:
    """One orbit of components upstairs after compressing along the lift of a curve."""

    model: PeriodicModel
    copies: int
    boundary_labels: list[list[str]]  # per copy, labels in model boundary order


def _component_from(o: Orbifold2D, genus: int, cones: list[Cone], bds: list[OrbBoundary], name: str):
    n = o.N
    hs = [c.h for c in cones] + [b.h for b in bds]
    g = n
    for h in hs:
        g = gcd(g, h)
    copies = g if hs else n
    nc = n // copies
    chi_orb = Fraction(2 - 2 * genus - len(bds)) - sum(1 - Fraction(1, c.order) for c in cones)
    chi_up = nc * chi_orb
    if chi_up.denominator != 1:
        raise ValueError("non-integral Euler characteristic after surgery")
    per_copy: list[list[str]] = [[] for _ in range(copies)]
    perm: list[int] = []
    fd: list[Fraction] = []
    # within a copy, rho_c = f**copies sends labels[i] to labels[i + copies]
    for bd in bds:
        k = len(bd.labels)
        per = k // copies
        base = len(per_copy[0])
        for c in range(copies):
            for t in range(per):
                per_copy[c].append(bd.labels[c + t * copies])
        for t in range(per):
            perm.append(base + (t + 1) % per)
            fd.append(bd.fdtc)
    nb = len(per_copy[0])
    g_up = (2 - int(chi_up) - nb)
    if g_up % 2:
        raise ValueError("odd genus count after surgery")
    model = PeriodicModel(
        name=name,
        genus=g_up // 2,
        n_boundary=nb,
        period=nc,
        boundary_perm=tuple(perm),
        boundary_fdtc=tuple(fd),
        quotient_genus=genus,
        cones=tuple(sorted((c.order, (c.h // copies) % nc) for c in cones if c.order > 1)),
    )
    model.validate()
    return LiftedComponent(model, copies, per_copy)


def model_from_orbifold(o: Orbifold2D, name: str) -> LiftedComponent:
    return _component_from(o, o.genus, list(o.cones), list(o.boundaries), name)


def surgery(o: Orbifold2D, curve: OrbifoldCurve, name: str) -> list[LiftedComponent]:
    """Compress the full lift of ``curve``; returns the surviving component orbits (spheres dropped)."""
    n = o.N
    pieces = []
    if curve.kind == "nonseparating":
        hc = curve.h % n
        caps = [Cone(n // gcd(hc, n), hc, "cap"), Cone(n // gcd(-hc, n), (-hc) % n, "cap")]
        cones = list(o.cones) + [c for c in caps if c.order > 1]
        pieces.append((o.genus - 1, cones, list(o.boundaries)))
    else:
        side_a = list(curve.side)
        side_b = curve.side_items(o, 1)
        for genus, items in ((curve.genus_a, side_a), (o.genus - curve.genus_a, side_b)):
            hs = _h_of(o, items)
            cap = (-hs) % n
            cones = [o.cones[i] for k, i in items if k == "c"]
            if n // gcd(cap, n) > 1:
                cones.append(Cone(n // gcd(cap, n), cap, "cap"))
            bds = [o.boundaries[i] for k, i in items if k == "b"]
            pieces.append((genus, cones, bds))
    out = []
    for idx, (genus, cones, bds) in enumerate(pieces):
        comp = _component_from(o, genus, cones, bds, f"{name}.{idx}")
        m = comp.model
        if m.genus == 0 and m.n_boundary == 0:
            continue  # spheres are capped off
        out.append(comp)
    return out


def lifted_blocks(comp: LiftedComponent, prefix: str) -> tuple[list[Block], list[PeriodicElement]]:
    """Blocks for the copies of a lifted component and the transfer elements of the map."""
    blocks, elems = [], []
    nb = comp.model.n_boundary
    for c in range(comp.copies):
        blocks.append(Block(f"{prefix}#{c}", tuple(comp.boundary_labels[c]), comp.model))
    for c in range(comp.copies):
        k = 1 if c == comp.copies - 1 else 0
        elems.append(PeriodicElement(k, (0,) * nb))
    return blocks, elems


# ---------------------------------------------------------------------------
# conjugators between periodic classes


def periodic_conjugator(
    f: MappingClass,
    g: MappingClass,
    orientation: Literal["preserve", "reverse"] = "preserve",
    boundary_map: dict | None = None,
):
    """A verified conjugator from ``f`` to ``g``, or ``None``.

    The witness is returned as an involution ``iota`` of the disjoint union
    ``S_f + S_g`` exchanging the two sides, so ``iota (f + g) iota^-1 = f + g``
    encodes ``h f h^-1 = g``. Matching uses the orbifold signatures; with
    ``orientation='reverse'`` the monodromies of ``g`` are negated first.
    """
    from .surface_kernel import disjoint_union

    try:
        of, og = quotient_orbifold(f), quotient_orbifold(g)
    except (NotPeriodic, ValueError):
        return None
    sf = orbifold_signature(of)
    if orientation == "reverse":
        og = _mirror_orbifold(og)
    if sf != orbifold_signature(og):
        return None
    if len(f.domain.blocks) != len(g.domain.blocks):
        return None
    # block-wise witness: blocks correspond in order, mirrored models for reverse
    pairs = list(zip(f.domain.blocks, g.domain.blocks))
    for bf, bg in pairs:
        if bf.is_torus != bg.is_torus:
            return None
        if not bf.is_torus:
            want = bf.model.mirror() if orientation == "reverse" else bf.model
            if want != bg.model:
                return None
    u, left, right = disjoint_union(f, g)
    iota = _swap_involution(u.domain, left, right, orientation == "reverse")
    if iota is None:
        return None
    if not iota.compose(u).equals(u.compose(iota), rel_boundary=False):
        return None
    if not iota.compose(iota).is_identity(rel_boundary=False):
        return None
    return iota


def _mirror_orbifold(o: Orbifold2D) -> Orbifold2D:
    n = o.N
    return Orbifold2D(
        o.genus,
        tuple(OrbBoundary((-b.h) % n, b.labels, -b.fdtc) for b in o.boundaries),
        tuple(Cone(c.order, (-c.h) % n, c.source) for c in o.cones),
        n,
        o.cover_euler,
    )


def _swap_involution(domain: BlockSurface, left: list[int], right: list[int], reverse: bool):
    n = len(domain.blocks)
    perm = list(range(n))
    elems: list = [None] * n
    for a, b in zip(left, right):
        perm[a], perm[b] = b, a
        for x in (a, b):
            blk = domain.blocks[x]
            if blk.is_torus:
                elems[x] = TorusLift.reflection() if reverse else TorusLift.identity()
            else:
                elems[x] = PeriodicElement(0, (0,) * len(blk.boundaries), reverse)
    try:
        return MappingClass(domain, tuple(perm), tuple(elems))
    except ValueError:
        return None

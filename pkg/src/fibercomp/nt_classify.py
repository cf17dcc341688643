"""Nielsen-Thurston classification on block surfaces.

Every block cycle has a first-return map that is read off directly: a torus
lift is Anosov (trace > 2 in absolute value), parabolic (a twist along the
fixed slope) or of finite order; a periodic block is periodic. A seam chain
is a reduction curve when a pseudo-Anosov block touches it, or when both
sides are periodic but the two-sided twist sum of the return power is not
zero. Pieces are the unions of blocks left after cutting along reduction
curves.

The dilatation of a piece whose components are permuted in a cycle of
length ``k`` is the ``k``-th root of the dilatation of the return map; this
is the growth rate of the map on the piece.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

import networkx as nx

from .agol_cycles import conjugacy_key
from .algebraic import AlgebraicNumber
from .fdtc import chain_sum
from .periodic_orbifold import NotPeriodic, orbifold_signature, piece_orbifold
from .surface_kernel import BlockSurface, MappingClass, MultiCurve
from .torus import I2, NEG_I, mat_det, mat_pow, mat_trace, mat_vec, primitive

__all__ = [
    "NTType",
    "Piece",
    "NTDecomposition",
    "classify",
    "canonical_reduction",
    "decompose",
    "max_dilatation",
    "restrict",
    "canonical_key",
    "block_cycles",
]


@dataclass(frozen=True)
class NTType:
    tag: Literal["periodic", "pA", "reducible"]
    period: int | None = None
    dilatation: AlgebraicNumber | None = None
    reduction: MultiCurve | None = None

    def to_json(self) -> dict:
        out: dict = {"type": {"pA": "pseudo-anosov"}.get(self.tag, self.tag)}
        if self.period is not None:
            out["period"] = self.period
        if self.dilatation is not None:
            out["dilatation"] = self.dilatation.to_json()
        if self.reduction is not None:
            out["reduction"] = self.reduction.labels()
        return out


@dataclass
class Piece:
    blocks: tuple[int, ...]
    tag: Literal["periodic", "pA"]
    period: int | None
    dilatation: AlgebraicNumber
    cycles: list[list[int]]
    chains: list[int] = field(default_factory=list)  # indices into NTDecomposition.chains
    genus: int = 0
    n_boundary: int = 0
    cut_slope: tuple | None = None

    @property
    def planar(self) -> bool:
        return self.genus == 0


@dataclass
class NTDecomposition:
    f: MappingClass
    chains: list[list[str]]
    chain_kind: list[str]  # "delta" | "boundary" | "inner"
    pieces: list[Piece]
    slope_reductions: list[tuple[str, tuple[int, int]]]

    @property
    def reduction(self) -> list[int]:
        return [i for i, k in enumerate(self.chain_kind) if k == "delta"]

    def chain_orbits(self, kinds=("delta", "boundary")) -> list[list[int]]:
        lm = self.f.label_map()
        index = {lab: i for i, ch in enumerate(self.chains) for lab in ch}
        seen: set[int] = set()
        out = []
        for i, k in enumerate(self.chain_kind):
            if k not in kinds or i in seen:
                continue
            orb, j = [], i
            while j not in orb:
                orb.append(j)
                j = index[lm[self.chains[j][0]]]
            seen.update(orb)
            out.append(orb)
        return out

    def piece_of_block(self, i: int) -> int:
        for n, p in enumerate(self.pieces):
            if i in p.blocks:
                return n
        raise KeyError(i)

    def chain_ends(self, c: int) -> list[tuple[int, str]]:
        """(block, label) at the non-annulus ends of a chain."""
        dom = self.f.domain
        out = []
        for lab in self.chains[c]:
            i, _ = dom.owner(lab)
            if not dom.blocks[i].is_annulus():
                out.append((i, lab))
        return out

    def adjacent_pieces(self, chain) -> list[Piece]:
        if not isinstance(chain, int):
            chain = self.chains.index(sorted(chain))
        return [self.pieces[self.piece_of_block(i)] for i, _ in self.chain_ends(chain)]

    def reduction_curve(self) -> MultiCurve:
        comps = []
        for c in self.reduction:
            seams = [lab for lab in self.chains[c] if self.f.domain.partner(lab)]
            comps.append(("seam", min(seams)))
        for blk, slope in self.slope_reductions:
            comps.append(("slope", blk, slope))
        return MultiCurve.of(self.f.domain, comps)

    def to_json(self) -> dict:
        names = [b.name for b in self.f.domain.blocks]
        pieces = []
        for p in self.pieces:
            d: dict = {"tag": p.tag, "orbit": [[names[i] for i in cyc] for cyc in p.cycles]}
            if p.tag == "periodic":
                d["period"] = p.period
            else:
                d["dilatation_minpoly"] = list(p.dilatation.minpoly)
                d["dilatation"] = p.dilatation.to_json()
            if p.cut_slope is not None:
                d["cut_slope"] = list(p.cut_slope)
            pieces.append(d)
        return {"reduction": self.reduction_curve().labels(), "pieces": pieces}


def block_cycles(f: MappingClass) -> list[list[int]]:
    seen: set[int] = set()
    out = []
    for i in range(len(f.perm)):
        if i in seen:
            continue
        cyc, j = [i], f.perm[i]
        while j != i:
            cyc.append(j)
            j = f.perm[j]
        seen.update(cyc)
        out.append(cyc)
    return out


def _torus_kind(L) -> str:
    if mat_det(L) != 1:
        raise ValueError("orientation reversing return map")
    t = abs(mat_trace(L))
    if t > 2:
        return "pA"
    if t == 2 and L not in (I2, NEG_I):
        return "parabolic"
    return "periodic"


def _fixed_slope(L) -> tuple[int, int]:
    a, b, c, d = L
    s = 1 if a + d > 0 else -1
    x, y = a - s, b
    if (x, y) == (0, 0):
        x, y = c, d - s
    # (x, y) is a row of L - sI, the fixed line is its kernel
    return primitive((y, -x)) if (x, y) != (0, 0) else primitive((1, 0))


def _block_info(f: MappingClass):
    """Per block: (kind, return element, cycle length)."""
    info: dict[int, tuple[str, object, int]] = {}
    for cyc in block_cycles(f):
        k = len(cyc)
        g = f.power(k)
        for i in cyc:
            b, e = f.domain.blocks[i], g.elems[i]
            if f.reversing and k % 2:
                kind = "reversing"
            elif b.is_torus:
                kind = _torus_kind(e.L)
            else:
                kind = "periodic"
            info[i] = (kind, e, k)
    return info


def decompose(f: MappingClass) -> NTDecomposition:
    if f.reversing:
        raise ValueError("classification is for orientation preserving maps")
    dom = f.domain
    info = _block_info(f)
    free = set(dom.free_boundaries())
    chains, kinds = [], []
    for chain in f.twist_chains():
        owners = [dom.owner(x)[0] for x in chain]
        if any(dom.blocks[i].is_disk() for i in owners):
            continue
        ends = [i for i in owners if not dom.blocks[i].is_annulus()]
        if any(x in free for x in chain):
            kind = "boundary"
        elif not ends:
            kind = "inner"  # closed ring of annuli
        elif any(info[i][0] == "pA" for i in ends):
            kind = "delta"
        elif chain_sum(f, chain) != 0:
            kind = "delta"
        else:
            kind = "inner"
        chains.append(chain)
        kinds.append(kind)
    # pieces: blocks joined across non-reduction chains; annuli inside reduction chains are dropped
    parent = list(range(len(dom.blocks)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    in_delta: set[int] = set()
    for chain, kind in zip(chains, kinds):
        owners = [dom.owner(x)[0] for x in chain]
        if kind == "delta":
            in_delta.update(i for i in owners if dom.blocks[i].is_annulus())
            continue
        for a in owners[1:]:
            ra, rb = find(owners[0]), find(a)
            if ra != rb:
                parent[ra] = rb
    for cyc in block_cycles(f):
        for a in cyc[1:]:
            if a in in_delta:
                continue
            ra, rb = find(cyc[0]), find(a)
            if ra != rb:
                parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for i in range(len(dom.blocks)):
        if i in in_delta:
            continue
        groups.setdefault(find(i), []).append(i)
    pieces: list[Piece] = []
    slope_red: list[tuple[str, tuple[int, int]]] = []
    cyc_of = {i: cyc for cyc in block_cycles(f) for i in cyc}
    for blocks in sorted(groups.values()):
        cycles = []
        for i in blocks:
            if cyc_of[i] not in cycles:
                cycles.append(cyc_of[i])
        kinds_here = {info[i][0] for i in blocks}
        chi = sum(dom.blocks[i].euler_characteristic() for i in blocks)
        labels = {lab for i in blocks for lab in dom.blocks[i].boundaries}
        inner = sum(1 for x, y in dom.seams if x in labels and y in labels)
        nb = len(labels) - 2 * inner
        ncomp = len(_components(dom, blocks))
        genus = (2 * ncomp - chi - nb) // (2 * ncomp)
        if "pA" in kinds_here:
            (i0,) = [i for i in blocks if info[i][0] == "pA"][:1]
            _, ret, k = info[i0]
            lam = AlgebraicNumber.largest_real_root([1, -abs(mat_trace(ret.L)), 1]).root(k)
            pieces.append(Piece(tuple(blocks), "pA", None, lam, cycles, genus=genus, n_boundary=nb))
            continue
        one = AlgebraicNumber.rational(1)
        if "parabolic" in kinds_here:
            i0 = [i for i in blocks if info[i][0] == "parabolic"][0]
            _, ret, k = info[i0]
            slope = _fixed_slope(ret.L)
            for i in cyc_of[i0]:
                slope_red.append((dom.blocks[i].name, _transport_slope(f, i0, i, slope)))
            period = k * (1 if mat_trace(ret.L) > 0 else 2)
            pieces.append(Piece(tuple(blocks), "periodic", period, one, cycles, genus=genus, n_boundary=nb, cut_slope=slope))
            continue
        try:
            period = piece_orbifold(f, blocks).N
        except (NotPeriodic, ValueError):
            period = None
        pieces.append(Piece(tuple(blocks), "periodic", period, one, cycles, genus=genus, n_boundary=nb))
    d = NTDecomposition(f, chains, kinds, pieces, sorted(slope_red))
    for ci, _ in enumerate(chains):
        for i, _lab in d.chain_ends(ci):
            if i in in_delta:
                continue
            p = d.pieces[d.piece_of_block(i)]
            if ci not in p.chains:
                p.chains.append(ci)
    return d


def _transport_slope(f: MappingClass, i0: int, i: int, slope):
    cur, s = i0, slope
    while cur != i:
        s = primitive(mat_vec(f.elems[cur].L, s))
        cur = f.perm[cur]
    return s


def _components(dom: BlockSurface, blocks) -> list[set[int]]:
    blocks = set(blocks)
    parent = {i: i for i in blocks}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for x, y in dom.seams:
        a, b = dom.owner(x)[0], dom.owner(y)[0]
        if a in blocks and b in blocks:
            parent[find(a)] = find(b)
    comps: dict[int, set[int]] = {}
    for i in blocks:
        comps.setdefault(find(i), set()).add(i)
    return list(comps.values())


def canonical_reduction(f: MappingClass) -> MultiCurve:
    return decompose(f).reduction_curve()


def classify(f: MappingClass) -> NTType:
    if len({frozenset(c) for c in _orbits_of_components(f)}) > 1:
        raise ValueError("surface components are not permuted transitively; classify per orbit")
    d = decompose(f)
    red = d.reduction_curve()
    if red.components or len(d.pieces) != 1:
        return NTType("reducible", reduction=red)
    p = d.pieces[0]
    if p.tag == "pA":
        return NTType("pA", dilatation=p.dilatation)
    return NTType("periodic", period=p.period)


def _orbits_of_components(f: MappingClass) -> list[set[int]]:
    comps = f.domain.component_blocks()
    index = {i: n for n, c in enumerate(comps) for i in c}
    seen: set[int] = set()
    out = []
    for n in range(len(comps)):
        if n in seen:
            continue
        orb, j = set(), n
        while j not in orb:
            orb.add(j)
            j = index[f.perm[comps[j][0]]]
        seen |= orb
        out.append(orb)
    return out


def max_dilatation(f: MappingClass) -> AlgebraicNumber:
    best = AlgebraicNumber.rational(1)
    for p in decompose(f).pieces:
        if p.tag == "pA" and p.dilatation > best:
            best = p.dilatation
    return best


def restrict(f: MappingClass, blocks) -> MappingClass:
    """Restriction of ``f`` to an invariant union of blocks."""
    blocks = sorted(blocks)
    pos = {b: n for n, b in enumerate(blocks)}
    dom = f.domain
    labels = {lab for i in blocks for lab in dom.blocks[i].boundaries}
    seams = tuple(s for s in dom.seams if s[0] in labels and s[1] in labels)
    sub = BlockSurface(tuple(dom.blocks[i] for i in blocks), seams)
    return MappingClass(sub, tuple(pos[f.perm[i]] for i in blocks), tuple(f.elems[i] for i in blocks))


# ---------------------------------------------------------------------------
# canonical keys up to isotopy and conjugation


def _piece_label(f: MappingClass, d: NTDecomposition, p: Piece) -> str:
    dom = f.domain
    if p.tag == "pA":
        i0 = next(i for i in p.blocks if dom.blocks[i].is_torus)
        k = len(p.cycles[0])
        ret = f.power(k).elems[i0]
        fd = ret.fdtc() if dom.blocks[i0].boundaries else None
        return repr(("pA", k, len(p.cycles), conjugacy_key(ret.L), fd))
    if p.cut_slope is not None:
        i0 = p.cycles[0][0]
        k = len(p.cycles[0])
        ret = f.power(k).elems[i0]
        return repr(("twist", k, conjugacy_key(ret.L), ret.fdtc() if dom.blocks[i0].boundaries else None))
    try:
        sig = orbifold_signature(piece_orbifold(f, p.blocks))
    except (NotPeriodic, ValueError):
        sig = ("raw", tuple(sorted(dom.blocks[i].name for i in p.blocks)))
    return repr(("periodic", p.genus, p.n_boundary, sig))


def canonical_key(f: MappingClass) -> str:
    """Hash of the decorated piece graph; equal for conjugate classes.

    Nodes are pieces (decorated by their conjugacy invariants) and reduction or
    boundary curves (decorated by the two-sided twist sum). The hash is the
    Weisfeiler-Lehman hash of that graph together with the sorted node labels.
    """
    if not f.domain.blocks:
        return "empty"
    d = decompose(f)
    g = nx.Graph()
    for n, p in enumerate(d.pieces):
        g.add_node(("p", n), label=_piece_label(f, d, p))
    for c, (chain, kind) in enumerate(zip(d.chains, d.chain_kind)):
        if kind == "inner":
            continue
        if kind == "delta":
            lab = repr(("delta", str(chain_sum(f, chain))))
        else:
            lab = "boundary"
        g.add_node(("c", c), label=lab)
        for i, _ in d.chain_ends(c):
            g.add_edge(("c", c), ("p", d.piece_of_block(i)))
    # the map permutes reduction curves; record orbit lengths on the curve nodes
    for orb in d.chain_orbits():
        for c in orb:
            if ("c", c) in g:
                g.nodes[("c", c)]["label"] += f"/{len(orb)}"
    wl = nx.weisfeiler_lehman_graph_hash(g, node_attr="label", iterations=4)
    labels = sorted(data["label"] for _, data in g.nodes(data=True))
    return hashlib.sha256((wl + "|" + "|".join(labels)).encode()).hexdigest()[:24]

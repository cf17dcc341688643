"""Knot expressions, their monodromies as block maps, genus and Alexander polynomials.

Constructions:

* ``fig8``: the one-holed torus with ``Ta Tb^-1``.
* ``torus(p,q)``: a single periodic block of period ``p|q|`` whose quotient is
  a disk with cone points of orders ``p`` and ``|q|``; coefficient ``1/(pq)``
  at the boundary. Its homology action is the one on the complete bipartite
  graph ``K(p,|q|)`` onto which the fiber retracts.
* ``cable(p,q,C)`` with ``|q| = 1``: a planar pattern block with ``p`` inner
  circles cycled by ``rho``, glued to ``p`` copies of the companion fiber;
  copy ``j`` goes to copy ``j+1`` identically and the last copy returns by the
  companion monodromy.
* ``sum(K1,...,Kn)``: the identity on the keychain disk with ``n`` holes,
  glued to the summand fibers.
* ``mirror(K)``: the reflected map. ``reverse(K)`` returns ``K``; every knot
  built here is invertible.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Union

import sympy

from .periodic_orbifold import _solve_cones
from .surface_kernel import (
    Block,
    BlockSurface,
    MappingClass,
    ParseError,
    PeriodicElement,
    PeriodicModel,
    boundary_h_from_fdtc,
)
from .torus import TorusLift

__all__ = [
    "KnotExpr",
    "Unknot",
    "Fig8",
    "TorusKnot",
    "Cable",
    "ConnectedSum",
    "Mirror",
    "Reverse",
    "UnsupportedExpression",
    "parse_knot",
    "monodromy",
    "genus",
    "alexander",
    "alexander_structural",
    "alexander_homological",
    "torus_knot_model",
    "cable_pattern_model",
    "check_divisibility",
    "predecessors",
    "is_homotopy_ribbon",
    "AlexanderPoly",
]


class UnsupportedExpression(ValueError):
    pass


# ---------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class Unknot:
    def __str__(self):
        return "unknot"


@dataclass(frozen=True)
class Fig8:
    def __str__(self):
        return "fig8"


@dataclass(frozen=True)
class TorusKnot:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 2 or abs(self.q) < 2 or gcd(self.p, abs(self.q)) != 1:
            raise ValueError(f"torus({self.p},{self.q}) needs p>1, |q|>1, gcd(p,|q|)=1")

    def __str__(self):
        return f"torus({self.p},{self.q})"


@dataclass(frozen=True)
class Cable:
    p: int
    q: int
    companion: "KnotExpr"

    def __post_init__(self):
        if self.p < 2 or gcd(self.p, abs(self.q)) != 1:
            raise ValueError(f"cable({self.p},{self.q},...) needs p>1 and gcd(p,q)=1")

    def __str__(self):
        return f"cable({self.p},{self.q},{self.companion})"


@dataclass(frozen=True)
class ConnectedSum:
    summands: tuple

    def __str__(self):
        return "sum(" + ",".join(str(s) for s in self.summands) + ")"


@dataclass(frozen=True)
class Mirror:
    knot: "KnotExpr"

    def __str__(self):
        return f"mirror({self.knot})"


@dataclass(frozen=True)
class Reverse:
    knot: "KnotExpr"

    def __str__(self):
        return f"reverse({self.knot})"


KnotExpr = Union[Unknot, Fig8, TorusKnot, Cable, ConnectedSum, Mirror, Reverse]

_TOK = re.compile(r"\s*(?:(?P<num>-?\d+)|(?P<name>[A-Za-z_]\w*)|(?P<sym>[(),]))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOK.match(text, pos)
        if not m:
            raise ParseError("unexpected character in knot expression", text[pos:].strip()[:1], pos)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    return out


def parse_knot(text: str) -> KnotExpr:
    """Parse ``cable(2,1, fig8)``, ``sum(torus(2,3), mirror(torus(2,3)))`` and similar."""
    toks = _tokens(text)
    i = 0

    def peek():
        return toks[i] if i < len(toks) else ("end", "", len(text))

    def take(kind=None, value=None):
        nonlocal i
        t = peek()
        if (kind and t[0] != kind) or (value and t[1] != value):
            want = value or kind
            raise ParseError(f"expected {want}", t[1], t[2])
        i += 1
        return t

    def integer():
        return int(take("num")[1])

    def expr():
        t = take("name")
        name = t[1].lower()
        if name in ("fig8", "figure8", "figureeight", "4_1"):
            return Fig8()
        if name == "unknot":
            return Unknot()
        if name == "trefoil":
            return TorusKnot(2, 3)
        if name not in ("torus", "cable", "sum", "mirror", "reverse"):
            raise ParseError("unknown knot constructor", t[1], t[2])
        take("sym", "(")
        try:
            if name == "torus":
                p = integer()
                take("sym", ",")
                q = integer()
                out = TorusKnot(p, q)
            elif name == "cable":
                p = integer()
                take("sym", ",")
                q = integer()
                take("sym", ",")
                out = Cable(p, q, expr())
            elif name == "sum":
                parts = [expr()]
                while peek()[1] == ",":
                    take("sym", ",")
                    parts.append(expr())
                out = ConnectedSum(tuple(parts))
            elif name == "mirror":
                out = Mirror(expr())
            else:
                out = Reverse(expr())
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(str(exc), t[1], t[2]) from None
        take("sym", ")")
        return out

    if not toks:
        raise ParseError("empty knot expression", "", 0)
    e = expr()
    if i != len(toks):
        t = toks[i]
        raise ParseError("trailing text after knot expression", t[1], t[2])
    return e


# ---------------------------------------------------------------------------
# models


def _graph_homology(p: int, q: int, inverse: bool):
    """Action of the period-``pq`` map on H1 of the complete bipartite graph K(p,q).

    Basis: fundamental cycles of the spanning tree made of the edges at ``a_0``
    and at ``b_0``. A cycle's coordinate on the basis cycle of a non-tree edge
    is its coefficient on that edge, so images are read off directly.
    """
    step = -1 if inverse else 1
    non_tree = [(i, j) for i in range(1, p) for j in range(1, q)]
    rank = len(non_tree)
    cols = []
    for i, j in non_tree:
        # a_i -> b_j -> a_0 -> b_0 -> a_i as signed edge coefficients
        img: dict = {}
        for (a, b), c in {(i, j): 1, (0, j): -1, (0, 0): 1, (i, 0): -1}.items():
            e = ((a + step) % p, (b + step) % q)
            img[e] = img.get(e, 0) + c
        cols.append([Fraction(img.get(e, 0)) for e in non_tree])
    mat = tuple(tuple(cols[c][r] for c in range(rank)) for r in range(rank))
    return mat, (tuple(Fraction(0) for _ in range(rank)),)


def torus_knot_model(p: int, q: int) -> PeriodicModel:
    n = p * abs(q)
    c = Fraction(1, p * q)
    hb = boundary_h_from_fdtc(c, 1, n)
    cones = _solve_cones((p, abs(q)), n, hb)
    model = PeriodicModel(
        name=f"T({p},{q})",
        genus=(p - 1) * (abs(q) - 1) // 2,
        n_boundary=1,
        period=n,
        boundary_perm=(0,),
        boundary_fdtc=(c,),
        quotient_genus=0,
        cones=cones,
        homology=_graph_homology(p, abs(q), q < 0),
    )
    model.validate()
    return model


def cable_pattern_model(p: int, q: int) -> PeriodicModel:
    """Pattern piece of the ``(p, q)`` cable, ``|q| = 1``: inner circles ``0..p-1``, outer circle ``p``."""
    if abs(q) != 1:
        raise UnsupportedExpression("cable patterns are built for |q| = 1 only")
    outer = Fraction(q, p)
    hb = boundary_h_from_fdtc(outer, 1, p)
    rank = p
    mat = tuple(tuple(Fraction(int(r == (c + 1) % p)) for c in range(rank)) for r in range(rank))
    classes = [tuple(Fraction(int(r == j)) for r in range(rank)) for j in range(p)]
    classes.append(tuple(Fraction(-1) for _ in range(rank)))
    model = PeriodicModel(
        name=f"C({p},{q})",
        genus=0,
        n_boundary=p + 1,
        period=p,
        boundary_perm=tuple((j + 1) % p for j in range(p)) + (p,),
        boundary_fdtc=tuple(Fraction(-p * q) for _ in range(p)) + (outer,),
        quotient_genus=0,
        cones=((p, (-hb) % p),),
        homology=(mat, tuple(classes)),
    )
    model.validate()
    return model


def _keychain_model(n: int) -> PeriodicModel:
    from dataclasses import replace

    return replace(PeriodicModel.identity(0, n + 1), name=f"D2_{n}")


@dataclass
class _Build:
    blocks: list[Block] = field(default_factory=list)
    seams: list[tuple[str, str]] = field(default_factory=list)
    target: dict[str, str] = field(default_factory=dict)
    elem: dict[str, object] = field(default_factory=dict)

    def add(self, block: Block, target: str, elem) -> None:
        self.blocks.append(block)
        self.target[block.name] = target
        self.elem[block.name] = elem


def _ident(block: Block):
    return TorusLift.identity() if block.is_torus else PeriodicElement(0, (0,) * len(block.boundaries))


def _build(k: KnotExpr, name: str) -> tuple[_Build, str]:
    """Blocks of the fiber of ``k`` (names prefixed by ``name``) and its boundary label."""
    b = _Build()
    if isinstance(k, Reverse):
        return _build(k.knot, name)
    if isinstance(k, Unknot):
        blk = Block(name, (f"{name}.d",), PeriodicModel.identity(0, 1))
        b.add(blk, name, _ident(blk))
        return b, f"{name}.d"
    if isinstance(k, Fig8):
        blk = Block(name, (f"{name}.d",))
        b.add(blk, name, TorusLift.twist_a().compose(TorusLift.twist_b().inverse()))
        return b, f"{name}.d"
    if isinstance(k, TorusKnot):
        model = torus_knot_model(k.p, k.q)
        blk = Block(name, (f"{name}.d",), model)
        b.add(blk, name, PeriodicElement(1, (0,)))
        return b, f"{name}.d"
    if isinstance(k, Mirror):
        inner, root = _build(k.knot, name)
        for blk in inner.blocks:
            e = inner.elem[blk.name]
            if blk.is_torus:
                mb, me = blk, e.conjugate_by_reflection()
            else:
                mb = Block(blk.name, blk.boundaries, blk.model.mirror())
                me = PeriodicElement(e.k, tuple(-t for t in e.twists))
            b.add(mb, inner.target[blk.name], me)
        b.seams = list(inner.seams)
        return b, root
    if isinstance(k, Cable):
        model = cable_pattern_model(k.p, k.q)
        labels = tuple(f"{name}.in{j}" for j in range(k.p)) + (f"{name}.d",)
        pat = Block(name, labels, model)
        b.add(pat, name, PeriodicElement(1, (0,) * (k.p + 1)))
        copies = []
        for j in range(k.p):
            cb, croot = _build(k.companion, f"{name}/{j}")
            copies.append(cb)
            b.seams.append((labels[j], croot))
            b.seams.extend(cb.seams)
        for j, cb in enumerate(copies):
            for blk in cb.blocks:
                local = blk.name[len(f"{name}/{j}"):]
                if j < k.p - 1:
                    b.add(blk, f"{name}/{j + 1}{local}", _ident(blk))
                else:
                    tgt_local = cb.target[blk.name][len(f"{name}/{j}"):]
                    b.add(blk, f"{name}/0{tgt_local}", cb.elem[blk.name])
        return b, f"{name}.d"
    if isinstance(k, ConnectedSum):
        n = len(k.summands)
        if n == 1:
            return _build(k.summands[0], name)
        model = _keychain_model(n)
        labels = tuple(f"{name}.in{j}" for j in range(n)) + (f"{name}.d",)
        key = Block(name, labels, model)
        b.add(key, name, _ident(key))
        for j, s in enumerate(k.summands):
            sb, sroot = _build(s, f"{name}+{j}")
            b.seams.append((labels[j], sroot))
            b.seams.extend(sb.seams)
            for blk in sb.blocks:
                b.add(blk, sb.target[blk.name], sb.elem[blk.name])
        return b, f"{name}.d"
    raise UnsupportedExpression(f"no monodromy model for {k!r}")


def monodromy(k: KnotExpr | str) -> MappingClass:
    if isinstance(k, str):
        k = parse_knot(k)
    b, _root = _build(k, "K")
    dom = BlockSurface(tuple(b.blocks), tuple(b.seams))
    names = [blk.name for blk in b.blocks]
    perm = tuple(names.index(b.target[n]) for n in names)
    return MappingClass(dom, perm, tuple(b.elem[n] for n in names))


def root_label(k: KnotExpr | str) -> str:
    return "K.d"


# ---------------------------------------------------------------------------
# genus and Alexander polynomials

AlexanderPoly = tuple  # integer coefficients from the constant term up, normalized

_t = sympy.Symbol("t")


def _normalize_poly(expr) -> AlexanderPoly:
    poly = sympy.Poly(sympy.expand(expr), _t)
    coeffs = [int(c) for c in reversed(poly.all_coeffs())]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if not coeffs:
        return (0,)
    if coeffs[0] < 0:
        coeffs = [-c for c in coeffs]
    return tuple(coeffs)


def _poly_expr(a: AlexanderPoly):
    return sum(c * _t**i for i, c in enumerate(a))


def genus(k: KnotExpr | str) -> int:
    if isinstance(k, str):
        k = parse_knot(k)
    if isinstance(k, Unknot):
        return 0
    if isinstance(k, Fig8):
        return 1
    if isinstance(k, TorusKnot):
        return (k.p - 1) * (abs(k.q) - 1) // 2
    if isinstance(k, Cable):
        return k.p * genus(k.companion) + (k.p - 1) * (abs(k.q) - 1) // 2
    if isinstance(k, ConnectedSum):
        return sum(genus(s) for s in k.summands)
    if isinstance(k, (Mirror, Reverse)):
        return genus(k.knot)
    raise UnsupportedExpression(repr(k))


def _torus_alex(p: int, q: int):
    q = abs(q)
    return sympy.cancel((_t ** (p * q) - 1) * (_t - 1) / ((_t**p - 1) * (_t**q - 1)))


def _structural(k: KnotExpr):
    if isinstance(k, Unknot):
        return sympy.Integer(1)
    if isinstance(k, Fig8):
        return _t**2 - 3 * _t + 1
    if isinstance(k, TorusKnot):
        return _torus_alex(k.p, k.q)
    if isinstance(k, Cable):
        pattern = _torus_alex(k.p, k.q) if abs(k.q) > 1 else sympy.Integer(1)
        return pattern * _structural(k.companion).subs(_t, _t**k.p)
    if isinstance(k, ConnectedSum):
        out = sympy.Integer(1)
        for s in k.summands:
            out *= _structural(s)
        return out
    if isinstance(k, (Mirror, Reverse)):
        return _structural(k.knot)
    raise UnsupportedExpression(repr(k))


def alexander_structural(k: KnotExpr | str) -> AlexanderPoly:
    if isinstance(k, str):
        k = parse_knot(k)
    return _normalize_poly(_structural(k))


def _block_h1(block: Block):
    if block.is_torus:
        one, zero = Fraction(1), Fraction(0)
        return ((one, zero), (zero, one)), [(zero, zero)] * len(block.boundaries)
    if block.model.homology is None:
        raise UnsupportedExpression(f"block {block.name} carries no homology data")
    mat, classes = block.model.homology
    return mat, list(classes)


def _elem_h1(block: Block, e) -> sympy.Matrix:
    if block.is_torus:
        a, b, c, d = e.L
        return sympy.Matrix([[a, b], [c, d]])
    mat, _ = _block_h1(block)
    m = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in mat])
    if m.shape[0] == 0:
        return m
    return m ** (e.k % block.model.period) if block.model.period > 1 else sympy.eye(m.shape[0])


def homology_charpoly(f: MappingClass):
    """Characteristic polynomial of ``f`` on H1 of the glued surface (dual graph must be a tree)."""
    dom = f.domain
    offs, dims = [], []
    total = 0
    for blk in dom.blocks:
        mat, _ = _block_h1(blk)
        offs.append(total)
        dims.append(len(mat))
        total += len(mat)
    if len(dom.seams) != len(dom.blocks) - len(dom.component_blocks()):
        raise UnsupportedExpression("block graph has cycles")
    big = sympy.zeros(total, total)
    for i, blk in enumerate(dom.blocks):
        j = f.perm[i]
        sub = _elem_h1(blk, f.elems[i])
        big[offs[j]:offs[j] + dims[j], offs[i]:offs[i] + dims[i]] = sub
    # span of the seam circles
    vecs = []
    for x, y in dom.seams:
        v = sympy.zeros(total, 1)
        for lab in (x, y):
            i, idx = dom.owner(lab)
            _, classes = _block_h1(dom.blocks[i])
            for r, val in enumerate(classes[idx]):
                v[offs[i] + r] += sympy.Rational(val.numerator, val.denominator)
        vecs.append(v)
    lam = sympy.Symbol("lam")
    full = big.charpoly(lam).as_expr()
    basis = []
    if vecs:
        w = sympy.Matrix.hstack(*vecs)
        cols = w.columnspace()
        basis = cols
    if basis:
        w = sympy.Matrix.hstack(*basis)
        image = big * w
        sol = (w.T * w).inv() * w.T * image
        if w * sol != image:
            raise AssertionError("seam span is not invariant")
        seam_poly = sol.charpoly(lam).as_expr()
    else:
        seam_poly = sympy.Integer(1)
    q, r = sympy.div(sympy.Poly(full, lam), sympy.Poly(seam_poly, lam))
    if not r.is_zero:
        raise AssertionError("seam polynomial does not divide")
    return q.as_expr().subs(lam, _t)


def alexander_homological(k: KnotExpr | str) -> AlexanderPoly:
    return _normalize_poly(homology_charpoly(monodromy(k)))


def alexander(k: KnotExpr | str) -> AlexanderPoly:
    """Alexander polynomial; the satellite formula and the homology route must agree."""
    a = alexander_structural(k)
    b = alexander_homological(k)
    if a != b:
        raise AssertionError(f"Alexander polynomial routes disagree: {a} vs {b}")
    return a


def check_divisibility(j: KnotExpr | str, k: KnotExpr | str) -> bool:
    a, b = alexander_structural(j), alexander_structural(k)
    _, r = sympy.div(sympy.Poly(_poly_expr(b), _t), sympy.Poly(_poly_expr(a), _t))
    return r.is_zero


# ---------------------------------------------------------------------------
# predecessors


def _subexpressions(k: KnotExpr) -> list[KnotExpr]:
    out = [k]
    if isinstance(k, Cable):
        out += _subexpressions(k.companion)
    elif isinstance(k, ConnectedSum):
        for s in k.summands:
            out += _subexpressions(s)
    elif isinstance(k, (Mirror, Reverse)):
        out += _subexpressions(k.knot)
    return out


def recognition_table(k: KnotExpr, extra=()) -> dict[str, KnotExpr]:
    from .nt_classify import canonical_key

    cands: list[KnotExpr] = [Unknot()]
    for s in _subexpressions(k) + list(extra):
        cands += [s, Mirror(s)]
    table: dict[str, KnotExpr] = {}
    for c in cands:
        try:
            key = canonical_key(monodromy(c))
        except UnsupportedExpression:
            continue
        table.setdefault(key, c)
    return table


@dataclass
class Predecessor:
    monodromy: MappingClass
    knot: KnotExpr | None


def predecessors(k: KnotExpr | str, length_bound: int = 32, max_classes: int = 64):
    """Connected one-boundary classes among the compressed classes of the monodromy of ``k``.

    Returns ``(list of Predecessor, completeness)``.
    """
    from .compression_enum import all_compressed_classes
    from .nt_classify import canonical_key

    if isinstance(k, str):
        k = parse_knot(k)
    closure = all_compressed_classes(monodromy(k), length_bound, max_classes=max_classes)
    table = recognition_table(k)
    out = []
    for g in closure.classes:
        surf = g.surface
        if len(surf.components) != 1 or surf.components[0][1] != 1:
            continue
        out.append(Predecessor(g, table.get(canonical_key(g))))
    return out, closure.completeness


def is_homotopy_ribbon(k: KnotExpr | str, length_bound: int = 32, max_classes: int = 64):
    """``(answer, completeness, witness form)``: whether the identity of the disk is a compressed class."""
    from .compression_enum import all_compressed_classes, is_disk_identity

    if isinstance(k, str):
        k = parse_knot(k)
    closure = all_compressed_classes(monodromy(k), length_bound, max_classes=max_classes)
    for g in closure.classes:
        if is_disk_identity(g):
            return True, closure.completeness, closure.route(g)
    return False, closure.completeness, None

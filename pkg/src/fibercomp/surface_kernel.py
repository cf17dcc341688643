"""Surfaces, curves and mapping classes as glued blocks.

A ``BlockSurface`` is a finite set of blocks glued along boundary circles
(seams). A block is either a torus (closed, or with one boundary circle) whose
mapping classes are ``TorusLift`` elements, or a periodic block described by a
``PeriodicModel``: a surface with a finite-order map ``rho`` and the data of its
quotient orbifold. A ``MappingClass`` permutes blocks and carries one transfer
element per block. Seams are sent to seams, so every mapping class built this
way is reducible along the seams (or along nothing, when both sides glue up).

Equality is exact: torus parts compare integer matrices and lift windings,
periodic parts compare powers of ``rho`` modulo the period, and boundary
twisting is compared through per-side fractional Dehn twist coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

from .torus import (
    I2,
    Mat,
    TorusLift,
    Triangulation,
    mat_vec,
    primitive,
    slope_intersection,
    sl2_word,
)

__all__ = [
    "ParseError",
    "Surface",
    "PeriodicModel",
    "PeriodicElement",
    "Block",
    "BlockSurface",
    "MappingClass",
    "MultiCurve",
    "compose",
    "invert",
    "act_on_curve",
    "is_identity",
    "geometric_intersection",
    "parse_surface",
    "parse_mapping_class",
    "boundary_h_from_fdtc",
    "slope_curve",
    "torus_matrix",
    "disjoint_union",
    "renamed",
    "word_presentation",
]


class ParseError(ValueError):
    """Malformed input text. ``token`` and ``position`` locate the problem."""

    def __init__(self, message: str, token: str = "", position: int = -1):
        super().__init__(f"{message} (token {token!r} at position {position})")
        self.token = token
        self.position = position


@dataclass(frozen=True)
class Surface:
    components: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        for g, b in self.components:
            if g < 0 or b < 0:
                raise ValueError("negative genus or boundary count")

    def euler_characteristic(self, i: int) -> int:
        g, b = self.components[i]
        return 2 - 2 * g - b


# ---------------------------------------------------------------------------
# periodic blocks


def _modinv(a: int, m: int) -> int:
    return pow(a % m, -1, m) if m > 1 else 0


def boundary_h_from_fdtc(fdtc: Fraction, orbit_len: int, period: int) -> int:
    """Monodromy value ``h`` of the peripheral loop around a quotient boundary.

    The boundary circle covers its image ``m = period/orbit_len`` times and
    ``rho**orbit_len`` rotates it by ``fdtc`` mod 1. Convention: the lift of
    the peripheral loop moves a point by ``rho**h`` with
    ``frac(fdtc) = -(h/orbit_len)^-1 / m``.
    """
    m = period // orbit_len
    frac = Fraction(fdtc) - (Fraction(fdtc).numerator // Fraction(fdtc).denominator)
    if m == 1:
        if frac != 0:
            raise ValueError("boundary rotation incompatible with period")
        return 0
    a = frac * m
    if a.denominator != 1 or gcd(int(a), m) != 1:
        raise ValueError(f"boundary rotation {fdtc} incompatible with period {period}")
    u = (-_modinv(int(a), m)) % m
    return orbit_len * u


@dataclass(frozen=True)
class PeriodicModel:
    """A periodic map ``rho`` of order ``period`` on a connected surface.

    ``boundary_perm[j]`` is the image of boundary ``j`` under ``rho`` and
    ``boundary_fdtc[j]`` the coefficient of the first return power at ``j``.
    The quotient orbifold has genus ``quotient_genus``, one boundary circle per
    orbit of boundaries, and cone points ``(order, h)`` where ``h`` in Z/period
    is the monodromy of a small loop around the cone point. ``homology``
    optionally holds the rational matrix of ``rho`` on H1 and the classes of
    the boundary circles.
    """

    name: str
    genus: int
    n_boundary: int
    period: int
    boundary_perm: tuple[int, ...]
    boundary_fdtc: tuple[Fraction, ...]
    quotient_genus: int
    cones: tuple[tuple[int, int], ...]
    homology: tuple | None = field(default=None, compare=False, hash=False)

    # -- constructors ---------------------------------------------------
    @staticmethod
    def identity(genus: int, n_boundary: int) -> "PeriodicModel":
        rank = 2 * genus + max(n_boundary - 1, 0)
        mat = tuple(tuple(Fraction(int(i == j)) for j in range(rank)) for i in range(rank))
        classes = []
        for j in range(n_boundary):
            v = [Fraction(0)] * rank
            if j < n_boundary - 1:
                v[2 * genus + j] = Fraction(1)
            else:
                for i in range(n_boundary - 1):
                    v[2 * genus + i] = Fraction(-1)
            classes.append(tuple(v))
        return PeriodicModel(
            name=f"id({genus},{n_boundary})",
            genus=genus,
            n_boundary=n_boundary,
            period=1,
            boundary_perm=tuple(range(n_boundary)),
            boundary_fdtc=tuple(Fraction(0) for _ in range(n_boundary)),
            quotient_genus=genus,
            cones=(),
            homology=(mat, tuple(classes)),
        )

    # -- derived data ---------------------------------------------------
    def boundary_orbits(self) -> list[list[int]]:
        seen: set[int] = set()
        out = []
        for j in range(self.n_boundary):
            if j in seen:
                continue
            orb = [j]
            k = self.boundary_perm[j]
            while k != j:
                orb.append(k)
                k = self.boundary_perm[k]
            seen.update(orb)
            out.append(orb)
        return out

    def orbit_length(self, j: int) -> int:
        n, k = 1, self.boundary_perm[j]
        while k != j:
            k = self.boundary_perm[k]
            n += 1
        return n

    def perm_power(self, j: int, k: int) -> int:
        k %= self.period
        for _ in range(k):
            j = self.boundary_perm[j]
        return j

    def boundary_h(self) -> list[int]:
        return [
            boundary_h_from_fdtc(self.boundary_fdtc[orb[0]], len(orb), self.period)
            for orb in self.boundary_orbits()
        ]

    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.n_boundary

    def orbifold_euler(self) -> Fraction:
        chi = Fraction(2 - 2 * self.quotient_genus - len(self.boundary_orbits()))
        for order, _ in self.cones:
            chi -= 1 - Fraction(1, order)
        return chi

    def is_mirror_symmetric(self) -> bool:
        return self._mirror_data() == self._data()

    def _data(self):
        return (
            self.genus,
            self.n_boundary,
            self.period,
            self.boundary_perm,
            self.boundary_fdtc,
            self.quotient_genus,
            tuple(sorted(self.cones)),
        )

    def _mirror_data(self):
        n = self.period
        cones = tuple(sorted((m, (-h) % n) for m, h in self.cones))
        return (
            self.genus,
            self.n_boundary,
            self.period,
            self.boundary_perm,
            tuple(-x for x in self.boundary_fdtc),
            self.quotient_genus,
            cones,
        )

    def mirror(self) -> "PeriodicModel":
        if self.is_mirror_symmetric():
            return self
        name = self.name[:-1] if self.name.endswith("~") else self.name + "~"
        n = self.period
        return replace(
            self,
            name=name,
            boundary_fdtc=tuple(-x for x in self.boundary_fdtc),
            cones=tuple((m, (-h) % n) for m, h in self.cones),
        )

    def validate(self) -> None:
        n = self.period
        if sorted(self.boundary_perm) != list(range(self.n_boundary)):
            raise ValueError("boundary permutation is not a permutation")
        hs = self.boundary_h()
        for orb, h in zip(self.boundary_orbits(), hs):
            if n % len(orb):
                raise ValueError("orbit length does not divide the period")
            if len({self.boundary_fdtc[j] for j in orb}) != 1:
                raise ValueError("return coefficients differ along an orbit")
        for m, h in self.cones:
            if m < 2 or n % m or (h * m) % n or gcd(h, n) != n // m:
                raise ValueError(f"cone ({m},{h}) inconsistent with period {n}")
        total = sum(h for _, h in self.cones) + sum(hs)
        if self.quotient_genus == 0 and total % n:
            raise ValueError("cone and boundary monodromies do not sum to zero")
        if Fraction(self.euler_characteristic()) != n * self.orbifold_euler():
            raise ValueError("Riemann-Hurwitz fails for this model")

    def return_fdtc(self, j: int, k: int, twist: int = 0) -> Fraction:
        """Coefficient at boundary ``j`` of ``rho**k`` followed by twists, when it fixes ``j``."""
        kj = self.orbit_length(j)
        if k % kj:
            raise ValueError("power does not fix this boundary")
        return Fraction(k, kj) * self.boundary_fdtc[j] + twist


@dataclass(frozen=True)
class PeriodicElement:
    """``mu**rev o rho**k o prod T_j**twists[j]`` between two copies of a model.

    ``mu`` is the canonical orientation reversing identification of a model
    with its mirror, preserving boundary indices.
    """

    k: int
    twists: tuple[int, ...]
    rev: bool = False

    @property
    def reversing(self) -> bool:
        return self.rev

    def compose(self, other: "PeriodicElement", src: PeriodicModel) -> "PeriodicElement":
        """``self o other`` where ``other`` starts on model ``src``."""
        eps = -1 if other.rev else 1
        v = list(other.twists)
        for j, t in enumerate(self.twists):
            if t:
                # rho^-m T_j rho^m = T_{rho^-m(j)}
                jj = src.perm_power(j, -other.k)
                v[jj] += eps * t
        return PeriodicElement(self.k + other.k, tuple(v), self.rev != other.rev).normalized(src)

    def inverse(self, src: PeriodicModel) -> "PeriodicElement":
        eps = -1 if self.rev else 1
        tgt = src.mirror() if self.rev else src
        v = [0] * len(self.twists)
        for j, t in enumerate(self.twists):
            if t:
                v[src.perm_power(j, self.k)] += -eps * t
        return PeriodicElement(-self.k, tuple(v), self.rev).normalized(tgt)

    def normalized(self, src: PeriodicModel) -> "PeriodicElement":
        n = src.period
        q, k = divmod(self.k, n)
        if q == 0:
            return self
        v = list(self.twists)
        for j in range(len(v)):
            extra = Fraction(n, src.orbit_length(j)) * src.boundary_fdtc[j] * q
            if extra.denominator != 1:
                raise ValueError("inconsistent periodic model")
            v[j] += int(extra)
        return PeriodicElement(k, tuple(v), self.rev)

    def freely_trivial(self, src: PeriodicModel) -> bool:
        return not self.rev and self.k % src.period == 0

    def boundary_map(self, j: int, src: PeriodicModel) -> int:
        return src.perm_power(j, self.k)


Element = Union[TorusLift, PeriodicElement]


@dataclass(frozen=True)
class Block:
    name: str
    boundaries: tuple[str, ...]
    model: PeriodicModel | None = None  # None means a torus block

    @property
    def is_torus(self) -> bool:
        return self.model is None

    @property
    def genus(self) -> int:
        return 1 if self.model is None else self.model.genus

    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - len(self.boundaries)

    def is_annulus(self) -> bool:
        return self.genus == 0 and len(self.boundaries) == 2

    def is_disk(self) -> bool:
        return self.genus == 0 and len(self.boundaries) == 1

    def is_sphere(self) -> bool:
        return self.genus == 0 and not self.boundaries


@dataclass(frozen=True)
class BlockSurface:
    blocks: tuple[Block, ...]
    seams: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        labels = [lab for b in self.blocks for lab in b.boundaries]
        if len(labels) != len(set(labels)):
            raise ValueError("boundary labels must be unique")
        used = [lab for s in self.seams for lab in s]
        if len(used) != len(set(used)) or not set(used) <= set(labels):
            raise ValueError("seams must pair distinct existing boundary labels")
        names = [b.name for b in self.blocks]
        if len(names) != len(set(names)):
            raise ValueError("block names must be unique")

    # lookup helpers
    def block_index(self, name: str) -> int:
        for i, b in enumerate(self.blocks):
            if b.name == name:
                return i
        raise KeyError(name)

    def owner(self, label: str) -> tuple[int, int]:
        for i, b in enumerate(self.blocks):
            if label in b.boundaries:
                return i, b.boundaries.index(label)
        raise KeyError(label)

    def partner(self, label: str) -> str | None:
        for x, y in self.seams:
            if x == label:
                return y
            if y == label:
                return x
        return None

    def free_boundaries(self) -> list[str]:
        used = {lab for s in self.seams for lab in s}
        return [lab for b in self.blocks for lab in b.boundaries if lab not in used]

    def component_blocks(self) -> list[list[int]]:
        parent = list(range(len(self.blocks)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for x, y in self.seams:
            a, b = find(self.owner(x)[0]), find(self.owner(y)[0])
            parent[a] = b
        groups: dict[int, list[int]] = {}
        for i in range(len(self.blocks)):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())

    def surface(self) -> Surface:
        comps = []
        free = set(self.free_boundaries())
        for grp in self.component_blocks():
            chi = sum(self.blocks[i].euler_characteristic() for i in grp)
            b = sum(1 for i in grp for lab in self.blocks[i].boundaries if lab in free)
            comps.append(((2 - chi - b) // 2, b))
        return Surface(tuple(comps), tuple(sorted(free)))

    def betti1(self) -> int:
        """Rank of H1 of the glued surface."""
        total = 0
        for g, b in self.surface().components:
            total += 2 * g + max(b - 1, 0)
        return total

    def closed_components(self) -> int:
        return sum(1 for _, b in self.surface().components if b == 0)


# ---------------------------------------------------------------------------
# mapping classes


def _compat(src: Block, dst: Block, elem: Element) -> bool:
    if src.is_torus != dst.is_torus:
        return False
    if src.is_torus:
        return len(src.boundaries) == len(dst.boundaries) and isinstance(elem, TorusLift)
    if not isinstance(elem, PeriodicElement):
        return False
    want = src.model.mirror() if elem.rev else src.model
    return want == dst.model


@dataclass(frozen=True)
class MappingClass:
    domain: BlockSurface
    perm: tuple[int, ...]
    elems: tuple[Element, ...]

    def __post_init__(self):
        n = len(self.domain.blocks)
        if sorted(self.perm) != list(range(n)) or len(self.elems) != n:
            raise ValueError("block permutation has the wrong shape")
        for i, e in enumerate(self.elems):
            if not _compat(self.domain.blocks[i], self.domain.blocks[self.perm[i]], e):
                raise ValueError(f"transfer on block {self.domain.blocks[i].name} is incompatible")
        revs = {e.reversing for e in self.elems}
        if len(revs) > 1:
            raise ValueError("mixed orientation behaviour")
        lm = self.label_map()
        seams = {frozenset(s) for s in self.domain.seams}
        for s in self.domain.seams:
            if frozenset(lm[x] for x in s) not in seams:
                raise ValueError("mapping class does not preserve the seams")

    # constructors
    @staticmethod
    def identity(domain: BlockSurface) -> "MappingClass":
        elems: list[Element] = []
        for b in domain.blocks:
            if b.is_torus:
                elems.append(TorusLift.identity())
            else:
                elems.append(PeriodicElement(0, (0,) * len(b.boundaries)))
        return MappingClass(domain, tuple(range(len(domain.blocks))), tuple(elems))

    @property
    def surface(self) -> Surface:
        return self.domain.surface()

    @property
    def reversing(self) -> bool:
        return bool(self.elems) and self.elems[0].reversing

    def label_map(self) -> dict[str, str]:
        out = {}
        for i, b in enumerate(self.domain.blocks):
            tgt = self.domain.blocks[self.perm[i]]
            e = self.elems[i]
            for j, lab in enumerate(b.boundaries):
                jj = j if b.is_torus else e.boundary_map(j, b.model)
                out[lab] = tgt.boundaries[jj]
        return out

    def compose(self, other: "MappingClass") -> "MappingClass":
        """``self o other``."""
        if self.domain != other.domain:
            raise ValueError("surface mismatch")
        perm, elems = [], []
        for i, b in enumerate(self.domain.blocks):
            mid = other.perm[i]
            perm.append(self.perm[mid])
            f, g = self.elems[mid], other.elems[i]
            if b.is_torus:
                elems.append(f.compose(g))
            else:
                elems.append(f.compose(g, b.model))
        return MappingClass(self.domain, tuple(perm), tuple(elems))

    def inverse(self) -> "MappingClass":
        n = len(self.perm)
        perm = [0] * n
        elems: list[Element | None] = [None] * n
        for i, b in enumerate(self.domain.blocks):
            j = self.perm[i]
            perm[j] = i
            e = self.elems[i]
            elems[j] = e.inverse() if b.is_torus else e.inverse(b.model)
        return MappingClass(self.domain, tuple(perm), tuple(elems))

    def power(self, n: int) -> "MappingClass":
        if n < 0:
            return self.inverse().power(-n)
        out, base = MappingClass.identity(self.domain), self
        while n:
            if n & 1:
                out = out.compose(base)
            base = base.compose(base)
            n >>= 1
        return out

    def block_order(self, i: int) -> int:
        """Length of the cycle of block ``i`` under the block permutation."""
        n, j = 1, self.perm[i]
        while j != i:
            j = self.perm[j]
            n += 1
        return n

    def fdtc_at(self, label: str) -> Fraction:
        """Coefficient at a boundary circle of a block fixed by ``self``."""
        i, j = self.domain.owner(label)
        b, e = self.domain.blocks[i], self.elems[i]
        if self.perm[i] != i:
            raise ValueError("block is not fixed")
        if b.is_torus:
            c = e.fdtc()
            if c is None:
                raise ValueError("orientation reversing")
            return c
        if e.rev:
            raise ValueError("orientation reversing")
        if e.boundary_map(j, b.model) != j:
            raise ValueError("boundary circle is not fixed")
        return b.model.return_fdtc(j, e.k, e.twists[j])

    def twist_chains(self) -> list[list[str]]:
        """Boundary labels grouped into chains joined by seams and annulus blocks."""
        adj: dict[str, list[str]] = {lab: [] for b in self.domain.blocks for lab in b.boundaries}
        for x, y in self.domain.seams:
            adj[x].append(y)
            adj[y].append(x)
        for b in self.domain.blocks:
            if b.is_annulus():
                x, y = b.boundaries
                adj[x].append(y)
                adj[y].append(x)
        seen: set[str] = set()
        chains = []
        for lab in adj:
            if lab in seen:
                continue
            stack, comp = [lab], []
            seen.add(lab)
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            chains.append(sorted(comp))
        return chains

    def is_identity(self, rel_boundary: bool = False) -> bool:
        if self.perm != tuple(range(len(self.perm))):
            return False
        for b, e in zip(self.domain.blocks, self.elems):
            if b.is_torus:
                if e.L != I2:
                    return False
            elif not e.freely_trivial(b.model):
                return False
        free = set(self.domain.free_boundaries())
        for chain in self.twist_chains():
            owners = [self.domain.blocks[self.domain.owner(x)[0]] for x in chain]
            if any(o.is_disk() for o in owners):
                continue
            if not rel_boundary and any(x in free for x in chain):
                continue
            if sum(self.fdtc_at(x) for x in chain) != 0:
                return False
        return True

    def equals(self, other: "MappingClass", rel_boundary: bool = True) -> bool:
        return self.compose(other.inverse()).is_identity(rel_boundary)

    def boundary_twist_offsets(self) -> dict[str, Fraction]:
        """Coefficients at free boundary circles fixed by the map."""
        out = {}
        lm = self.label_map()
        for lab in self.domain.free_boundaries():
            i, _ = self.domain.owner(lab)
            if lm[lab] == lab and self.perm[i] == i and not self.reversing:
                out[lab] = self.fdtc_at(lab)
        return out

    # text -------------------------------------------------------------
    def to_text(self) -> str:
        """Twist word for classes on surfaces declared through ``parse_surface``."""
        words: list[str] = []
        labels = _word_labels(self.domain)
        if labels is None:
            raise ValueError("this surface has no twist-word presentation")
        if self.perm != tuple(range(len(self.perm))):
            raise ValueError("component permutations have no twist-word presentation")
        if self.reversing:
            words.append("R")
            body = _reflection(self.domain).compose(self)
        else:
            body = self
        for i, (b, e) in enumerate(zip(self.domain.blocks, body.elems)):
            names = labels[i]
            if b.is_torus:
                word = sl2_word(e.L)
                lift = TorusLift.identity()
                for g, k in word:
                    gen = TorusLift.twist_a() if g == "a" else TorusLift.twist_b()
                    lift = lift.compose(gen.power(k))
                    words.append(f"T{names[g]}" + (f"^{k}" if k != 1 else ""))
                if b.boundaries:
                    extra = lift.w - e.w
                    if extra:
                        words.append(f"T{names['d0']}" + (f"^{extra}" if extra != 1 else ""))
            else:
                if e.k % b.model.period:
                    raise ValueError("periodic block has no twist-word presentation")
                for j, t in enumerate(e.twists):
                    if t:
                        words.append(f"T{names[f'd{j}']}" + (f"^{t}" if t != 1 else ""))
        return " ".join(words)


def _reflection(domain: BlockSurface) -> MappingClass:
    elems: list[Element] = []
    for b in domain.blocks:
        if b.is_torus:
            elems.append(TorusLift.reflection())
        else:
            if not b.model.is_mirror_symmetric():
                raise ValueError("no standard reflection on a chiral block")
            elems.append(PeriodicElement(0, (0,) * len(b.boundaries), True))
    return MappingClass(domain, tuple(range(len(domain.blocks))), tuple(elems))


def compose(f: MappingClass, g: MappingClass) -> MappingClass:
    return f.compose(g)


def invert(f: MappingClass) -> MappingClass:
    return f.inverse()


def is_identity(f: MappingClass, rel_boundary: bool = False) -> bool:
    return f.is_identity(rel_boundary)


# ---------------------------------------------------------------------------
# curves

CurveRef = tuple  # ("seam", label) | ("boundary", label) | ("slope", block_name, (p, q))

_TRI_BOUNDED = Triangulation.torus(True)
_TRI_CLOSED = Triangulation.torus(False)


@dataclass(frozen=True)
class MultiCurve:
    domain: BlockSurface
    components: tuple[CurveRef, ...]

    @staticmethod
    def of(domain: BlockSurface, comps: Iterable[CurveRef]) -> "MultiCurve":
        norm = []
        for c in comps:
            if c[0] == "slope":
                norm.append(("slope", c[1], primitive(c[2])))
            elif c[0] == "seam":
                p = domain.partner(c[1])
                lab = min(c[1], p) if p else c[1]
                norm.append(("seam" if p else "boundary", lab))
            else:
                norm.append(tuple(c))
        return MultiCurve(domain, tuple(sorted(set(norm))))

    def normal_coordinates(self) -> dict[str, tuple[int, int, int]]:
        """Normal coordinates of the slope components, per torus block."""
        out: dict[str, list[int]] = {}
        for c in self.components:
            if c[0] == "slope":
                b = self.domain.blocks[self.domain.block_index(c[1])]
                tri = _TRI_BOUNDED if b.boundaries else _TRI_CLOSED
                nc = tri.normal_coordinates(c[2])
                acc = out.setdefault(c[1], [0, 0, 0])
                for k in range(3):
                    acc[k] += nc[k]
        return {k: tuple(v) for k, v in out.items()}

    def is_essential(self) -> bool:
        for c in self.components:
            if c[0] in ("seam", "boundary"):
                i, _ = self.domain.owner(c[1])
                blk = self.domain.blocks[i]
                if blk.is_disk():
                    return False
                if c[0] == "seam":
                    j, _ = self.domain.owner(self.domain.partner(c[1]))
                    if self.domain.blocks[j].is_disk():
                        return False
        return True

    def labels(self) -> list[str]:
        out = []
        for c in self.components:
            out.append(f"{c[1]}:{c[2][0]}/{c[2][1]}" if c[0] == "slope" else c[1])
        return out


def act_on_curve(f: MappingClass, c: MultiCurve) -> MultiCurve:
    if c.domain != f.domain:
        raise ValueError("curve is not on this surface")
    lm = f.label_map()
    out = []
    for comp in c.components:
        if comp[0] == "slope":
            i = f.domain.block_index(comp[1])
            e = f.elems[i]
            out.append(("slope", f.domain.blocks[f.perm[i]].name, primitive(mat_vec(e.L, comp[2]))))
        else:
            out.append(("seam" if comp[0] == "seam" else "boundary", lm[comp[1]]))
    return MultiCurve.of(f.domain, out)


def geometric_intersection(c1: MultiCurve, c2: MultiCurve) -> int:
    if c1.domain != c2.domain:
        raise ValueError("curves live on different surfaces")
    total = 0
    for x in c1.components:
        for y in c2.components:
            if x[0] == y[0] == "slope" and x[1] == y[1]:
                total += slope_intersection(x[2], y[2])
    return total


# ---------------------------------------------------------------------------
# text formats

_DECL = re.compile(r"\s*surface\s+(\w+)\s*\{(.*)\}\s*$", re.S)
_COMP = re.compile(r"component\s*\(\s*genus\s*=\s*(\d+)\s*,\s*boundary\s*=\s*(\d+)\s*\)")
_SHORT = re.compile(r"\s*(\w+)\s*\{(.*)\}\s*$", re.S)
_PAIR = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def _scan(body: str, pattern: re.Pattern, offset: int) -> list[tuple[int, int]]:
    out, pos = [], 0
    body_stripped = body
    while pos < len(body_stripped):
        if body_stripped[pos] in " \t\n,":
            pos += 1
            continue
        m = pattern.match(body_stripped, pos)
        if not m:
            tok = body_stripped[pos:].split()[0] if body_stripped[pos:].split() else body_stripped[pos:]
            raise ParseError("unexpected text in surface declaration", tok, offset + pos)
        out.append((int(m.group(1)), int(m.group(2))))
        pos = m.end()
    return out


def parse_surface(text: str) -> BlockSurface:
    """Parse ``surface S { component(genus=1, boundary=1) }`` or the short ``S{(1,1)}``."""
    m = _DECL.match(text)
    if m:
        comps = _scan(m.group(2), _COMP, m.start(2))
    else:
        m = _SHORT.match(text)
        if not m:
            tok = text.strip().split()[0] if text.strip() else ""
            raise ParseError("expected a surface declaration", tok, 0)
        comps = _scan(m.group(2), _PAIR, m.start(2))
    blocks = []
    for i, (g, b) in enumerate(comps):
        bl = tuple(f"C{i}.d{j}" for j in range(b))
        if g == 1 and b <= 1:
            blocks.append(Block(f"C{i}", bl))
        else:
            blocks.append(Block(f"C{i}", bl, PeriodicModel.identity(g, b)))
    return BlockSurface(tuple(blocks))


def _word_labels(domain: BlockSurface) -> list[dict[str, str]] | None:
    n = len(domain.blocks)
    out = []
    for i, b in enumerate(domain.blocks):
        if not b.name.startswith("C") or domain.seams:
            return None
        sfx = "" if n == 1 else f"_{i + 1}"
        names: dict[str, str] = {}
        if b.is_torus:
            names["a"], names["b"] = "a" + sfx, "b" + sfx
        nb = len(b.boundaries)
        for j in range(nb):
            names[f"d{j}"] = ("d" if nb == 1 else f"d{j + 1}") + sfx
        out.append(names)
    return out


_TOKEN = re.compile(r"T([A-Za-z]\w*)(?:\^(-?\d+))?$")


def parse_mapping_class(domain: BlockSurface, text: str) -> MappingClass:
    """Parse a twist word such as ``Ta Tb^-1``; the rightmost letter acts first.

    The letter ``R`` is the standard reflection of the surface.
    """
    labels = _word_labels(domain)
    if labels is None:
        raise ParseError("surface has no twist-word labels", "", 0)
    lookup: dict[str, tuple[int, str]] = {}
    for i, names in enumerate(labels):
        for key, lab in names.items():
            lookup[lab] = (i, key)
    result = MappingClass.identity(domain)
    for m in re.finditer(r"\S+", text):
        tok, pos = m.group(0), m.start()
        if tok == "R":
            result = result.compose(_reflection(domain))
            continue
        tm = _TOKEN.match(tok)
        if not tm or tm.group(1) not in lookup:
            raise ParseError("unknown twist", tok, pos)
        exp = int(tm.group(2)) if tm.group(2) is not None else 1
        i, key = lookup[tm.group(1)]
        result = result.compose(_twist(domain, i, key).power(exp))
    return result


def _twist(domain: BlockSurface, i: int, key: str) -> MappingClass:
    ident = MappingClass.identity(domain)
    elems = list(ident.elems)
    b = domain.blocks[i]
    if b.is_torus:
        gen = {"a": TorusLift.twist_a(), "b": TorusLift.twist_b(), "d0": TorusLift.boundary_twist()}[key]
        elems[i] = gen
    else:
        j = int(key[1:])
        tw = [0] * len(b.boundaries)
        tw[j] = 1
        elems[i] = PeriodicElement(0, tuple(tw))
    return MappingClass(domain, ident.perm, tuple(elems))


def slope_curve(domain: BlockSurface, block: str, slope: tuple[int, int]) -> MultiCurve:
    return MultiCurve.of(domain, [("slope", block, slope)])


def torus_matrix(f: MappingClass, block: int) -> Mat:
    return f.elems[block].L


def word_presentation(f: MappingClass) -> tuple[str, str] | None:
    """``(surface text, twist word)`` that parses back to ``f`` up to names, if there is one."""
    dom = f.domain
    if dom.seams:
        return None
    comps = []
    for b in dom.blocks:
        g, n = b.genus, len(b.boundaries)
        if b.is_torus != (g == 1 and n <= 1):
            return None
        if not b.is_torus and b.model != PeriodicModel.identity(g, n):
            return None
        comps.append((g, n))
    text = "S{" + ",".join(f"({g},{n})" for g, n in comps) + "}"
    try:
        word = MappingClass(parse_surface(text), f.perm, f.elems).to_text()
    except ValueError:
        return None
    return text, word


def renamed(f: MappingClass, prefix: str) -> MappingClass:
    """Copy of ``f`` with every block name and boundary label prefixed."""
    ren = {lab: prefix + lab for b in f.domain.blocks for lab in b.boundaries}
    blocks = tuple(
        Block(prefix + b.name, tuple(ren[x] for x in b.boundaries), b.model) for b in f.domain.blocks
    )
    seams = tuple((ren[x], ren[y]) for x, y in f.domain.seams)
    return MappingClass(BlockSurface(blocks, seams), f.perm, f.elems)


def disjoint_union(*maps: MappingClass, prefixes: Sequence[str] | None = None):
    """``f1 + f2 + ...`` on the disjoint union; also returns the block indices of each summand."""
    if prefixes is None:
        prefixes = [f"{i + 1}:" for i in range(len(maps))]
    blocks: list[Block] = []
    seams: list[tuple[str, str]] = []
    perm: list[int] = []
    elems: list = []
    index_lists = []
    for f, pre in zip(maps, prefixes):
        g = renamed(f, pre)
        off = len(blocks)
        index_lists.append(list(range(off, off + len(g.domain.blocks))))
        blocks.extend(g.domain.blocks)
        seams.extend(g.domain.seams)
        perm.extend(off + j for j in g.perm)
        elems.extend(g.elems)
    u = MappingClass(BlockSurface(tuple(blocks), tuple(seams)), tuple(perm), tuple(elems))
    return (u, *index_lists)

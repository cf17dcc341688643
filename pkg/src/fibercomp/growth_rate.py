"""Word growth of free group endomorphisms.

Letters are nonzero ints: ``i + 1`` for generator ``i`` and ``-(i + 1)`` for
its inverse. Iterates are stored as straight-line programs whose nodes carry
Karp-Rabin hashes of the word and of its inverse, so free cancellation at a
concatenation and cyclic reduction are found by binary search on prefix
hashes without expanding anything.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .torus import Mat, mat_det, sl2_word

__all__ = [
    "FreeGroupEndo",
    "SLP",
    "free_reduce",
    "cyclic_reduce",
    "apply_word",
    "growth_lengths",
    "growth_estimate",
    "monotonicity_check",
    "fig8_endo",
    "torus_endo",
    "induced_endo",
    "IntertwiningError",
]

Word = tuple[int, ...]

_P = (1 << 61) - 1
_B = 1_000_003  # fixed base: runs are reproducible


def free_reduce(w: Sequence[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: Sequence[int]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i : j + 1]


def invert_word(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


@dataclass(frozen=True)
class FreeGroupEndo:
    rank: int
    images: tuple[Word, ...]

    def __post_init__(self):
        if len(self.images) != self.rank:
            raise ValueError("one image per generator")
        for w in self.images:
            if free_reduce(w) != tuple(w):
                raise ValueError("images must be freely reduced")
            if any(abs(x) > self.rank or x == 0 for x in w):
                raise ValueError("letter out of range")

    @staticmethod
    def of(images: Sequence[Sequence[int]]) -> "FreeGroupEndo":
        return FreeGroupEndo(len(images), tuple(free_reduce(w) for w in images))

    def apply(self, w: Sequence[int]) -> Word:
        out: list[int] = []
        for x in w:
            img = self.images[abs(x) - 1]
            out.extend(img if x > 0 else invert_word(img))
        return free_reduce(out)

    def compose(self, other: "FreeGroupEndo") -> "FreeGroupEndo":
        """``self o other``."""
        return FreeGroupEndo(self.rank, tuple(self.apply(w) for w in other.images))

    def abelianization(self) -> tuple[tuple[int, ...], ...]:
        """Integer matrix; column ``j`` is the image of generator ``j``."""
        cols = []
        for w in self.images:
            v = [0] * self.rank
            for x in w:
                v[abs(x) - 1] += 1 if x > 0 else -1
            cols.append(v)
        return tuple(tuple(cols[j][i] for j in range(self.rank)) for i in range(self.rank))

    def extended(self, extra: int = 1) -> "FreeGroupEndo":
        """Free product with ``extra`` new letters fixed."""
        n = self.rank + extra
        return FreeGroupEndo(n, self.images + tuple((i + 1,) for i in range(self.rank, n)))

    def conjugated(self, g: Sequence[int]) -> "FreeGroupEndo":
        """``x -> g A(x) g^-1``; same growth rate."""
        g = tuple(g)
        return FreeGroupEndo(self.rank, tuple(free_reduce(g + w + invert_word(g)) for w in self.images))


def apply_word(e: FreeGroupEndo, w: Sequence[int], n: int) -> Word:
    """Exact ``A^n(w)``; only for small lengths."""
    for _ in range(n):
        w = e.apply(w)
    return tuple(w)


# ---------------------------------------------------------------------------
# straight-line programs


class SLP:
    """Arena of nodes; node ``i`` is a letter or a concatenation of two earlier nodes.

    A reference is ``(node, inverted)``.
    """

    def __init__(self):
        self.left: list[int] = []
        self.right: list[int] = []
        self.letter: list[int] = []
        self.length: list[int] = []
        self.h: list[int] = []
        self.hinv: list[int] = []
        self._letters: dict[int, int] = {}

    def _bpow(self, n: int) -> int:
        return pow(_B, n, _P)

    # construction
    def letter_node(self, x: int) -> tuple[int, bool]:
        if abs(x) in self._letters:
            i = self._letters[abs(x)]
        else:
            i = len(self.length)
            self.left.append(-1)
            self.right.append(-1)
            self.letter.append(abs(x))
            self.length.append(1)
            self.h.append(_code(abs(x)))
            self.hinv.append(_code(-abs(x)))
            self._letters[abs(x)] = i
        return (i, x < 0)

    def _hash(self, ref) -> int:
        i, inv = ref
        return self.hinv[i] if inv else self.h[i]

    def _len(self, ref) -> int:
        return 0 if ref is None else self.length[ref[0]]

    def concat_raw(self, a, b):
        """Concatenation without cancellation; ``None`` is the empty word."""
        if a is None:
            return b
        if b is None:
            return a
        la, lb = self._len(a), self._len(b)
        ha, hb = self._hash(a), self._hash(b)
        hai, hbi = self._hash(_inv(a)), self._hash(_inv(b))
        i = len(self.length)
        # children stored as references packed into ints
        self.left.append(_pack(a))
        self.right.append(_pack(b))
        self.letter.append(0)
        self.length.append(la + lb)
        self.h.append((ha * self._bpow(lb) + hb) % _P)
        self.hinv.append((hbi * self._bpow(la) + hai) % _P)
        return (i, False)

    def children(self, ref):
        i, inv = ref
        a, b = _unpack(self.left[i]), _unpack(self.right[i])
        if inv:
            return _inv(b), _inv(a)
        return a, b

    def prefix(self, ref, k: int):
        """Reference to the first ``k`` letters."""
        if ref is None or k <= 0:
            return None
        n = self._len(ref)
        if k >= n:
            return ref
        a, b = self.children(ref)
        la = self._len(a)
        if k <= la:
            return self.prefix(a, k)
        return self.concat_raw(a, self.prefix(b, k - la))

    def suffix(self, ref, k: int):
        """Reference to the last ``k`` letters."""
        if ref is None or k <= 0:
            return None
        n = self._len(ref)
        if k >= n:
            return ref
        a, b = self.children(ref)
        lb = self._len(b)
        if k <= lb:
            return self.suffix(b, k)
        return self.concat_raw(self.suffix(a, k - lb), b)

    def prefix_hash(self, ref, k: int) -> int:
        h, cur, need = 0, ref, k
        while need > 0:
            n = self._len(cur)
            if need >= n:
                return (h * self._bpow(n) + self._hash(cur)) % _P
            a, b = self.children(cur)
            la = self._len(a)
            if need <= la:
                cur = a
            else:
                h = (h * self._bpow(la) + self._hash(a)) % _P
                cur, need = b, need - la
        return h

    def common_prefix(self, x, y, bound: int) -> int:
        """Largest ``k <= bound`` with equal prefixes of length ``k`` (by hash)."""
        lo, hi = 0, bound
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.prefix_hash(x, mid) == self.prefix_hash(y, mid):
                lo = mid
            else:
                hi = mid - 1
        return lo

    def concat(self, a, b):
        """Freely reduced product of two freely reduced words."""
        if a is None or b is None:
            return a if b is None else b
        k = self.common_prefix(_inv(a), b, min(self._len(a), self._len(b)))
        return self.concat_raw(self.prefix(a, self._len(a) - k), self.suffix(b, self._len(b) - k))

    def cyclic_length(self, ref) -> int:
        if ref is None:
            return 0
        n = self._len(ref)
        k = self.common_prefix(ref, _inv(ref), n // 2)
        return n - 2 * k

    def expand(self, ref) -> Word:
        if ref is None:
            return ()
        out: list[int] = []
        stack = [ref]
        while stack:
            cur = stack.pop()
            i, inv = cur
            if self.letter[i]:
                out.append(-self.letter[i] if inv else self.letter[i])
                continue
            a, b = self.children(cur)
            stack.append(b)
            stack.append(a)
        return tuple(out)


def _code(x: int) -> int:
    return (2 * x + 1 if x > 0 else -2 * x) % _P


def _inv(ref):
    return None if ref is None else (ref[0], not ref[1])


def _pack(ref) -> int:
    return 2 * ref[0] + int(ref[1])


def _unpack(v: int):
    return (v >> 1, bool(v & 1))


# ---------------------------------------------------------------------------
# iteration


def growth_lengths(e: FreeGroupEndo, iterations: int) -> list[list[int]]:
    """``lengths[n][i]``: cyclically reduced length of ``A^n(x_i)`` for n <= iterations."""
    slp = SLP()
    cur = [slp.letter_node(i + 1) for i in range(e.rank)]
    out = [[slp.cyclic_length(r) for r in cur]]
    for _ in range(iterations):
        nxt = []
        for img in e.images:
            acc = None
            for x in img:
                r = cur[abs(x) - 1]
                acc = slp.concat(acc, r if x > 0 else _inv(r))
            nxt.append(acc)
        cur = nxt
        out.append([slp.cyclic_length(r) for r in cur])
    return out


def _log_bounds(n: int) -> tuple[Fraction, Fraction]:
    if n <= 1:
        return Fraction(0), Fraction(0)
    v = math.log(n)
    eps = 1e-12 * max(1.0, abs(v))
    return Fraction(v - eps), Fraction(v + eps)


def growth_estimate(e: FreeGroupEndo, iterations: int = 40) -> tuple[Fraction, Fraction]:
    """Rational interval around ``max_g (1/n) log l(A^n g)`` at the last two iterations."""
    if iterations < 2:
        raise ValueError("need at least two iterations")
    lens = growth_lengths(e, iterations)
    lo, hi = None, None
    for n in (iterations - 1, iterations):
        best = max(lens[n])
        a, b = _log_bounds(best)
        a, b = a / n, b / n
        lo = a if lo is None else min(lo, a)
        hi = b if hi is None else max(hi, b)
    return lo, hi


class IntertwiningError(ValueError):
    pass


def monotonicity_check(
    interior: FreeGroupEndo,
    ambient: FreeGroupEndo,
    inclusion: Sequence[Sequence[int]],
    iterations: int = 40,
    retract: Sequence[Sequence[int]] | None = None,
) -> bool:
    """Whether the estimates allow ``growth(interior) <= growth(ambient)``.

    ``inclusion[i]`` is the ambient word of interior generator ``i``; it must
    intertwine the two maps up to conjugacy. ``retract`` (ambient generator to
    interior word) is checked to be a left inverse when given.
    """
    for i, img in enumerate(interior.images):
        lhs = _apply_map(inclusion, img)
        rhs = ambient.apply(inclusion[i])
        if cyclic_reduce(lhs) != cyclic_reduce(rhs) and not _conjugate(lhs, rhs):
            raise IntertwiningError(f"inclusion does not intertwine on generator {i}")
    if retract is not None:
        for i, w in enumerate(inclusion):
            if _apply_map(retract, w) != (i + 1,):
                raise IntertwiningError("retract is not a left inverse of the inclusion")
    lo_i, _ = growth_estimate(interior, iterations)
    _, hi_a = growth_estimate(ambient, iterations)
    return lo_i <= hi_a


def _apply_map(images: Sequence[Sequence[int]], w: Sequence[int]) -> Word:
    out: list[int] = []
    for x in w:
        img = tuple(images[abs(x) - 1])
        out.extend(img if x > 0 else invert_word(img))
    return free_reduce(out)


def _conjugate(u: Sequence[int], v: Sequence[int]) -> bool:
    a, b = cyclic_reduce(u), cyclic_reduce(v)
    if len(a) != len(b):
        return False
    return not a or any(a[i:] + a[:i] == b for i in range(len(a)))


# ---------------------------------------------------------------------------
# endomorphisms from torus matrices

# twists along a and b on the one-holed torus, acting on pi_1 = <x, y>
_TA = FreeGroupEndo(2, ((1,), (2, 1)))
_TB = FreeGroupEndo(2, ((1, -2), (2,)))
_IDENT = FreeGroupEndo(2, ((1,), (2,)))


def torus_endo(m: Mat) -> FreeGroupEndo:
    """An automorphism of F2 realizing ``m`` in SL(2, Z) on homology."""
    if mat_det(m) != 1:
        raise ValueError("orientation preserving matrices only")
    out = _IDENT
    for g, k in sl2_word(m):
        base = _TA if g == "a" else _TB
        if k < 0:
            base = _invert_twist(base)
        for _ in range(abs(k)):
            out = out.compose(base)
    return out


def _invert_twist(t: FreeGroupEndo) -> FreeGroupEndo:
    if t == _TA:
        return FreeGroupEndo(2, ((1,), (2, -1)))
    return FreeGroupEndo(2, ((1, 2), (2,)))


def fig8_endo() -> FreeGroupEndo:
    """``x -> xyx, y -> yx``; abelianization (2 1; 1 1)."""
    return FreeGroupEndo(2, ((1, 2, 1), (2, 1)))


def induced_endo(f) -> FreeGroupEndo:
    """Action on pi_1 of a class on a single one-holed torus block."""
    dom = f.domain
    if len(dom.blocks) != 1 or not dom.blocks[0].is_torus or len(dom.blocks[0].boundaries) != 1:
        raise NotImplementedError("free group action is built for one-holed torus fibers only")
    return torus_endo(f.elems[0].L)

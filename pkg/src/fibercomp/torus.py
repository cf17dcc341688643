"""Integer 2x2 matrices, lifted torus mapping classes, slopes and the base triangulation.

A mapping class of the one-holed torus rel boundary is an element of the
braid group B3, which is the preimage of SL(2,Z) in the universal cover of
SL(2,R). We store it as ``TorusLift(L, w)``: ``L`` is the action on homology
and ``w`` counts full turns of the lifted action on the circle of directions.
For ``L`` in SL(2,Z) the lift sends the angle 0 to ``arg(L e1) + 2*pi*w`` with
``arg`` in ``[0, 2*pi)``. Orientation reversing classes have ``det L = -1`` and
mean ``lift(L R) o r`` where ``R = diag(1, -1)`` and ``r`` negates angles.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator

Mat = tuple[int, int, int, int]

I2: Mat = (1, 0, 0, 1)
NEG_I: Mat = (-1, 0, 0, -1)
A_MAT: Mat = (1, 1, 0, 1)
B_MAT: Mat = (1, 0, -1, 1)
R_MAT: Mat = (1, 0, 0, -1)
J_MAT: Mat = (0, 1, 1, 0)


def mat_mul(m: Mat, n: Mat) -> Mat:
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def mat_det(m: Mat) -> int:
    return m[0] * m[3] - m[1] * m[2]


def mat_inv(m: Mat) -> Mat:
    det = mat_det(m)
    if det not in (1, -1):
        raise ValueError("matrix is not invertible over Z")
    a, b, c, d = m
    return (d * det, -b * det, -c * det, a * det)


def mat_vec(m: Mat, v: tuple[int, int]) -> tuple[int, int]:
    return (m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1])


def mat_pow(m: Mat, n: int) -> Mat:
    if n < 0:
        return mat_pow(mat_inv(m), -n)
    out, base = I2, m
    while n:
        if n & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        n >>= 1
    return out


def mat_trace(m: Mat) -> int:
    return m[0] + m[3]


def mat_neg(m: Mat) -> Mat:
    return tuple(-x for x in m)  # type: ignore[return-value]


def _half(v: tuple[int, int]) -> int:
    x, y = v
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def arg_less(u: tuple[int, int], v: tuple[int, int]) -> bool:
    """Exact test ``arg(u) < arg(v)`` with arguments taken in ``[0, 2*pi)``."""
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu < hv
    return u[0] * v[1] - u[1] * v[0] > 0


def _compose_preserving(m: Mat, u: int, n: Mat, w: int) -> tuple[Mat, int]:
    mn = mat_mul(m, n)
    e1 = (1, 0)
    carry = 1 if arg_less(mat_vec(mn, e1), mat_vec(m, e1)) else 0
    return mn, u + w + carry


def _conj_reflection(p: Mat, w: int) -> tuple[Mat, int]:
    q = mat_mul(R_MAT, mat_mul(p, R_MAT))
    pe1 = mat_vec(p, (1, 0))
    if pe1[1] == 0 and pe1[0] > 0:
        return q, -w
    return q, -w - 1


@dataclass(frozen=True)
class TorusLift:
    """Element of B3 (or of its extension by the reflection ``r``)."""

    L: Mat
    w: int = 0

    @property
    def reversing(self) -> bool:
        return mat_det(self.L) == -1

    @property
    def P(self) -> Mat:
        return mat_mul(self.L, R_MAT) if self.reversing else self.L

    @staticmethod
    def identity() -> "TorusLift":
        return TorusLift(I2, 0)

    @staticmethod
    def twist_a() -> "TorusLift":
        return TorusLift(A_MAT, 0)

    @staticmethod
    def twist_b() -> "TorusLift":
        return TorusLift(B_MAT, -1)

    @staticmethod
    def boundary_twist() -> "TorusLift":
        return TorusLift(I2, -1)

    @staticmethod
    def reflection() -> "TorusLift":
        return TorusLift(R_MAT, 0)

    def compose(self, other: "TorusLift") -> "TorusLift":
        """``self o other``."""
        p2, w2 = other.P, other.w
        if self.reversing:
            p2, w2 = _conj_reflection(p2, w2)
        p, w = _compose_preserving(self.P, self.w, p2, w2)
        if self.reversing != other.reversing:
            return TorusLift(mat_mul(p, R_MAT), w)
        return TorusLift(p, w)

    def inverse(self) -> "TorusLift":
        p = self.P
        pinv = mat_inv(p)
        pe1 = mat_vec(p, (1, 0))
        winv = -self.w - (0 if (pe1[1] == 0 and pe1[0] > 0) else 1)
        if not self.reversing:
            return TorusLift(pinv, winv)
        q, wq = _conj_reflection(pinv, winv)
        return TorusLift(mat_mul(q, R_MAT), wq)

    def power(self, n: int) -> "TorusLift":
        if n < 0:
            return self.inverse().power(-n)
        out, base = TorusLift.identity(), self
        while n:
            if n & 1:
                out = out.compose(base)
            base = base.compose(base)
            n >>= 1
        return out

    def conjugate_by_reflection(self) -> "TorusLift":
        r = TorusLift.reflection()
        return r.compose(self).compose(r)

    def closed(self) -> "TorusLift":
        """Forget the boundary: the class on the closed torus."""
        return TorusLift(self.L, 0)

    def fdtc(self) -> Fraction | None:
        """Fractional Dehn twist coefficient about the boundary.

        Equal to minus the translation number of the lift, so the boundary
        twist has coefficient 1 and ``T_a T_b`` has coefficient 1/6.
        """
        if self.reversing:
            return None
        p = self.P
        for k in (1, 2, 3, 4, 6):
            pk = mat_pow(p, k)
            if pk == I2:
                return Fraction(-self.power(k).w, k)
            if pk == NEG_I:
                return Fraction(-(2 * self.power(k).w + 1), 2 * k)
        n = 64
        wn = self.power(n).w
        # |w_n - n*tau| < 2 and tau is a half-integer here
        return Fraction(round(Fraction(-2 * wn, n)), 2)


def primitive(v: tuple[int, int]) -> tuple[int, int]:
    """Normalize a nonzero integer vector to a primitive slope with a sign convention."""
    p, q = v
    g = gcd(p, q)
    if g == 0:
        raise ValueError("zero vector is not a slope")
    p, q = p // g, q // g
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return (p, q)


def slope_intersection(s: tuple[int, int], t: tuple[int, int]) -> int:
    return abs(s[0] * t[1] - s[1] * t[0])


def sl2_word(p: Mat) -> list[tuple[str, int]]:
    """Write ``p`` in SL(2,Z) as a word in ``A`` and ``B`` (rightmost applied first)."""
    if mat_det(p) != 1:
        raise ValueError("not in SL(2,Z)")
    left: list[tuple[str, int]] = []
    cur = p
    # reduce the first column (x, y) to (+-1, 0) by left multiplication
    while cur[2] != 0:
        x, y = cur[0], cur[2]
        if x == 0:
            k = y
            cur = mat_mul(mat_pow(A_MAT, k), cur)
            left.append(("a", k))
        elif abs(x) > abs(y):
            k = -(x // y)
            cur = mat_mul(mat_pow(A_MAT, k), cur)
            left.append(("a", k))
        else:
            k = y // x
            cur = mat_mul(mat_pow(B_MAT, k), cur)
            left.append(("b", k))
    word: list[tuple[str, int]] = []
    if cur[0] == -1:
        word.extend([("a", 1), ("b", 1)] * 3)
        cur = mat_neg(cur)
    if cur[1]:
        word.append(("a", cur[1]))
    # cur = left_k ... left_1 p, so p = left_1^-1 ... left_k^-1 cur
    merged: list[tuple[str, int]] = []
    for g, k in [(g, -k) for g, k in left] + word:
        if merged and merged[-1][0] == g:
            k += merged.pop()[1]
        if k:
            merged.append((g, k))
    return merged


@dataclass(frozen=True)
class Triangulation:
    """Two ideal triangles glued along three edges: the base triangulation of a torus.

    ``gluing`` maps (triangle, side) to (triangle, side). Each triangle lists its
    edges counterclockwise. ``edge_slopes`` gives the straight-line slope of each edge,
    which turns normal coordinates into intersection numbers.
    """

    triangles: tuple[tuple[int, int, int], ...]
    gluing: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    edge_slopes: tuple[tuple[int, int], ...]
    boundary: bool

    @staticmethod
    def torus(boundary: bool = True) -> "Triangulation":
        tris = ((0, 1, 2), (0, 1, 2))
        glue = (((0, 0), (1, 0)), ((0, 1), (1, 1)), ((0, 2), (1, 2)))
        return Triangulation(tris, glue, ((1, 0), (0, 1), (1, 1)), boundary)

    def check(self) -> None:
        seen: dict[tuple[int, int], tuple[int, int]] = {}
        for x, y in self.gluing:
            if x in seen or y in seen or x == y:
                raise ValueError("gluing is not an involution")
            seen[x], seen[y] = y, x
            if self.triangles[x[0]][x[1]] != self.triangles[y[0]][y[1]]:
                raise ValueError("glued sides carry different edges")
            if x[0] == y[0]:
                raise ValueError("orientation data inconsistent")
        corners = {(t, s) for t in range(len(self.triangles)) for s in range(3)}
        if set(seen) != corners:
            raise ValueError("unglued sides")
        # Euler characteristic of the ideal vertex link: one vertex, 3 edges, 2 faces.
        if len(self.edge_slopes) != 3:
            raise ValueError("edge table mismatch")

    def normal_coordinates(self, slope: tuple[int, int]) -> tuple[int, int, int]:
        return tuple(slope_intersection(slope, e) for e in self.edge_slopes)  # type: ignore

    @staticmethod
    def matching_ok(coords: tuple[int, int, int]) -> bool:
        """Normal arcs in each triangle: one coordinate is the sum of the other two."""
        x, y, z = coords
        if min(coords) < 0:
            return False
        return x == y + z or y == x + z or z == x + y

    def slope_from_normal(self, coords: tuple[int, int, int]) -> tuple[int, int]:
        if not self.matching_ok(coords) or coords == (0, 0, 0):
            raise ValueError(f"not the coordinates of a curve: {coords}")
        n1, n2, n3 = coords
        q, p = n1, n2
        for sp in (p, -p):
            cand = (sp, q)
            if abs(cand[0] - cand[1]) == n3 and gcd(p, q) == 1:
                return primitive(cand)
        raise ValueError(f"coordinates {coords} describe a multicurve, not a slope")


def slopes_up_to(bound: int) -> Iterator[tuple[int, int]]:
    """All primitive slopes with max(|p|,|q|) <= bound, each once."""
    for p in range(0, bound + 1):
        for q in range(-bound, bound + 1):
            if gcd(p, q) == 1 and (p > 0 or q > 0):
                yield (p, q)

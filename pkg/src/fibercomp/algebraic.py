"""Exact real algebraic numbers and a small quadratic field.

``AlgebraicNumber`` stores an irreducible integer minimal polynomial together
with a rational isolating interval. Comparisons refine intervals by exact
bisection, so no floating point ever decides an ordering. ``QuadraticNumber``
is the field ``Q(sqrt(D))`` used by the train-track code, where every weight
lives in the splitting field of a 2x2 integer matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import isqrt
from typing import Iterable, Sequence

import sympy

__all__ = ["AlgebraicNumber", "QuadraticNumber", "poly_eval"]

_x = sympy.Symbol("x")


def poly_eval(coeffs: Sequence[int], value: Fraction) -> Fraction:
    """Horner evaluation; ``coeffs`` runs from the leading term down."""
    acc = Fraction(0)
    for c in coeffs:
        acc = acc * value + c
    return acc


def _normalize(coeffs: Iterable[int]) -> tuple[int, ...]:
    cs = [int(c) for c in coeffs]
    while cs and cs[0] == 0:
        cs.pop(0)
    if not cs:
        raise ValueError("zero polynomial")
    from math import gcd

    g = 0
    for c in cs:
        g = gcd(g, c)
    cs = [c // g for c in cs]
    if cs[0] < 0:
        cs = [-c for c in cs]
    return tuple(cs)


def _to_sympy(coeffs: Sequence[int]) -> sympy.Poly:
    return sympy.Poly(list(coeffs), _x, domain="ZZ")


def _count_roots(coeffs: Sequence[int], lo: Fraction, hi: Fraction) -> int:
    return int(_to_sympy(coeffs).count_roots(sympy.Rational(lo.numerator, lo.denominator),
                                             sympy.Rational(hi.numerator, hi.denominator)))


def _frac_sqrt_bounds(q: Fraction, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rational lower and upper bounds for sqrt(q), q >= 0."""
    if q < 0:
        raise ValueError("negative")
    scale = 1 << bits
    num = q.numerator * scale * scale
    lo = isqrt(num // q.denominator)
    return Fraction(lo, scale), Fraction(lo + 1, scale) + Fraction(0)


def _frac_root_bounds(q: Fraction, k: int, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rational bounds for the real k-th root of q >= 0."""
    scale = 1 << bits
    target = q * scale**k
    lo = 0
    # integer k-th root by bisection
    hi = 1
    while Fraction(hi) ** k <= target:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if Fraction(mid) ** k <= target:
            lo = mid
        else:
            hi = mid
    return Fraction(lo, scale), Fraction(lo + 1, scale)


@total_ordering
class AlgebraicNumber:
    """A real algebraic number given by (minimal polynomial, isolating interval)."""

    __slots__ = ("minpoly", "lo", "hi")

    def __init__(self, minpoly: Sequence[int], lo: Fraction, hi: Fraction):
        self.minpoly = _normalize(minpoly)
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        if self.lo > self.hi:
            raise ValueError("empty interval")

    # construction -------------------------------------------------------
    @classmethod
    def rational(cls, q) -> "AlgebraicNumber":
        q = Fraction(q)
        return cls((q.denominator, -q.numerator), q, q)

    @classmethod
    def from_polynomial(cls, coeffs: Sequence[int], lo, hi) -> "AlgebraicNumber":
        """The unique root of ``coeffs`` inside ``[lo, hi]``.

        The polynomial is factored first so the stored polynomial is minimal.
        """
        lo, hi = Fraction(lo), Fraction(hi)
        _, factors = sympy.factor_list(_to_sympy(coeffs))
        hits = []
        for fac, _mult in factors:
            fc = [int(c) for c in fac.all_coeffs()]
            if len(fc) < 2:
                continue
            n = _count_roots(fc, lo, hi)
            if n:
                hits.append((fc, n))
        if len(hits) != 1 or hits[0][1] != 1:
            raise ValueError(f"interval [{lo}, {hi}] does not isolate one root")
        return cls(hits[0][0], lo, hi)

    @classmethod
    def largest_real_root(cls, coeffs: Sequence[int]) -> "AlgebraicNumber":
        poly = _to_sympy(coeffs)
        roots = poly.intervals()
        if not roots:
            raise ValueError("no real roots")
        (lo, hi), _ = max(roots, key=lambda r: r[0][1])
        lo, hi = Fraction(str(lo)), Fraction(str(hi))
        return cls.from_polynomial(coeffs, lo, hi)

    # refinement and comparison --------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    def is_rational(self) -> bool:
        return self.degree == 1

    def refine(self, width=Fraction(1, 10**12)) -> "AlgebraicNumber":
        """Bisect in place until the interval is narrower than ``width``."""
        width = Fraction(width)
        if self.is_rational():
            q = Fraction(-self.minpoly[1], self.minpoly[0])
            self.lo = self.hi = q
            return self
        p = self.minpoly
        slo = poly_eval(p, self.lo)
        while self.hi - self.lo > width:
            mid = (self.lo + self.hi) / 2
            sm = poly_eval(p, mid)
            if sm == 0:  # impossible for irreducible degree >= 2
                self.lo = self.hi = mid
                break
            if (sm > 0) == (slo > 0):
                self.lo, slo = mid, sm
            else:
                self.hi = mid
        return self

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraicNumber):
            try:
                other = AlgebraicNumber.rational(Fraction(other))
            except (TypeError, ValueError):
                return NotImplemented
        if self.minpoly != other.minpoly:
            return False
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return False
        if self.is_rational():
            return True
        return _count_roots(self.minpoly, lo, hi) == 1

    def __hash__(self) -> int:
        return hash(self.minpoly)

    def __lt__(self, other) -> bool:
        if not isinstance(other, AlgebraicNumber):
            other = AlgebraicNumber.rational(Fraction(other))
        if self == other:
            return False
        width = Fraction(1, 2)
        while True:
            if self.hi < other.lo:
                return True
            if other.hi < self.lo:
                return False
            width /= 16
            self.refine(width)
            other.refine(width)

    # arithmetic ---------------------------------------------------------
    def __pow__(self, n: int) -> "AlgebraicNumber":
        if n < 1:
            raise ValueError("only positive powers are supported")
        if n == 1:
            return AlgebraicNumber(self.minpoly, self.lo, self.hi)
        if self.lo <= 0 <= self.hi and not self.is_rational():
            self.refine(min(abs(self.lo), abs(self.hi)) / 2 or Fraction(1, 2))
        y = sympy.Symbol("y")
        p = sympy.Poly(list(self.minpoly), y)
        res = sympy.resultant(p.as_expr(), _x - y**n, y)
        coeffs = [int(c) for c in sympy.Poly(res, _x).all_coeffs()]
        width = Fraction(1, 2**20)
        while True:
            self.refine(width)
            ends = sorted([self.lo**n, self.hi**n])
            if self.lo < 0 < self.hi and n % 2 == 0:
                ends[0] = Fraction(0)
            try:
                return AlgebraicNumber.from_polynomial(coeffs, ends[0], ends[1])
            except ValueError:
                width /= 2**8

    def sqrt(self) -> "AlgebraicNumber":
        """Positive square root of a positive number."""
        if self.hi <= 0 and not self > 0:
            raise ValueError("sqrt of a non-positive number")
        p = list(self.minpoly)
        d = len(p) - 1
        coeffs: list[int] = []
        for i, c in enumerate(p):
            coeffs.append(c)
            if i < d:
                coeffs.append(0)
        width = Fraction(1, 2**20)
        while True:
            self.refine(width)
            lo = max(self.lo, Fraction(0))
            a, _ = _frac_sqrt_bounds(lo)
            _, b = _frac_sqrt_bounds(self.hi)
            try:
                return AlgebraicNumber.from_polynomial(coeffs, a, b)
            except ValueError:
                width /= 2**8

    def root(self, k: int) -> "AlgebraicNumber":
        """Positive real ``k``-th root of a positive number."""
        if k == 1:
            return AlgebraicNumber(self.minpoly, self.lo, self.hi)
        if k == 2:
            return self.sqrt()
        if not self > 0:
            raise ValueError("root of a non-positive number")
        p = list(self.minpoly)
        d = len(p) - 1
        coeffs: list[int] = []
        for i, c in enumerate(p):
            coeffs.append(c)
            if i < d:
                coeffs.extend([0] * (k - 1))
        width = Fraction(1, 2**20)
        while True:
            self.refine(width)
            a = _frac_root_bounds(max(self.lo, Fraction(0)), k)[0]
            b = _frac_root_bounds(self.hi, k)[1]
            try:
                return AlgebraicNumber.from_polynomial(coeffs, a, b)
            except ValueError:
                width /= 2**8

    def __float__(self) -> float:
        self.refine(Fraction(1, 2**60))
        return float((self.lo + self.hi) / 2)

    def log(self) -> float:
        import math

        return math.log(float(self))

    def to_json(self) -> dict:
        self.refine(Fraction(1, 10**9))
        return {
            "minpoly": list(self.minpoly),
            "interval": [str(self.lo), str(self.hi)],
            "approx": round(float(self), 12),
        }

    def __repr__(self) -> str:
        return f"AlgebraicNumber({list(self.minpoly)}, ~{float(self):.9g})"


@dataclass(frozen=True)
class QuadraticNumber:
    """``a + b*sqrt(d)`` with rational ``a, b`` and a squarefree integer ``d > 1``.

    ``d = 1`` is allowed and means the number is rational (``b`` must be 0).
    """

    a: Fraction
    b: Fraction
    d: int

    @staticmethod
    def of(a, b=0, d: int = 1) -> "QuadraticNumber":
        a, b = Fraction(a), Fraction(b)
        if d == 1:
            a, b = a + b, Fraction(0)
        return QuadraticNumber(a, b, d)

    def _coerce(self, other) -> "QuadraticNumber":
        if isinstance(other, QuadraticNumber):
            if other.d != self.d and other.b and self.b:
                raise ValueError("mixing quadratic fields")
            return other
        return QuadraticNumber(Fraction(other), Fraction(0), self.d)

    def _field(self, other: "QuadraticNumber") -> int:
        return self.d if self.b or self.d == other.d else other.d

    def __add__(self, other):
        o = self._coerce(other)
        return QuadraticNumber(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        d = self._field(o)
        return QuadraticNumber(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def __truediv__(self, other):
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in quadratic field")
        q = self * o.conjugate()
        return QuadraticNumber(q.a / n, q.b / n, q.d)

    def sign(self) -> int:
        """Exact sign using squares only."""
        a, b, d = self.a, self.b, self.d
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        sa, sb = (1 if a > 0 else -1), (1 if b > 0 else -1)
        if sa == sb:
            return sa
        # a + b sqrt d with opposite signs: compare a^2 and b^2 d
        diff = a * a - b * b * d
        return sa if diff > 0 else (sb if diff < 0 else 0)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except ValueError:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __float__(self):
        import math

        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        if self.b == 0:
            return f"Q({self.a})"
        return f"Q({self.a} + {self.b}*sqrt({self.d}))"

import math
from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from fibercomp.algebraic import AlgebraicNumber, QuadraticNumber

x = sympy.Symbol("x")


def test_golden_and_fig8():
    lam = AlgebraicNumber.largest_real_root([1, -3, 1])
    assert list(lam.minpoly) == [1, -3, 1]
    assert Fraction(261, 100) < lam < Fraction(262, 100)
    phi = lam.root(2)
    assert list(phi.minpoly) == [1, -1, -1]
    assert abs(float(phi) ** 2 - float(lam)) < 1e-12


def test_cube_root_minpoly():
    lam = AlgebraicNumber.largest_real_root([1, -3, 1])
    assert list(lam.root(3).minpoly) == [1, 0, 0, -3, 0, 0, 1]


@settings(max_examples=120, deadline=None)
@given(st.integers(3, 60))
def test_trace_roots_match_float(t):
    lam = AlgebraicNumber.largest_real_root([1, -t, 1])
    ref = (t + math.sqrt(t * t - 4)) / 2
    assert abs(float(lam) - ref) < 1e-9 * ref
    # independent minimal polynomial from sympy
    mp = sympy.Poly(sympy.minimal_polynomial((t + sympy.sqrt(t * t - 4)) / 2, x), x)
    assert list(lam.minpoly) == [int(c) for c in mp.all_coeffs()]


@settings(max_examples=120, deadline=None)
@given(st.integers(3, 40), st.integers(2, 4))
def test_roots_power_back(t, k):
    lam = AlgebraicNumber.largest_real_root([1, -t, 1])
    r = lam.root(k)
    assert abs(float(r) ** k - float(lam)) < 1e-8 * float(lam)
    mp = sympy.Poly(sympy.minimal_polynomial(((t + sympy.sqrt(t * t - 4)) / 2) ** sympy.Rational(1, k), x), x)
    assert list(r.minpoly) == [int(c) for c in mp.all_coeffs()]


@settings(max_examples=120, deadline=None)
@given(st.integers(3, 30), st.integers(3, 30))
def test_ordering_is_exact(s, t):
    a = AlgebraicNumber.largest_real_root([1, -s, 1])
    b = AlgebraicNumber.largest_real_root([1, -t, 1])
    assert (a < b) == (s < t)
    assert (a == b) == (s == t)


def test_quadratic_field_arithmetic():
    u = QuadraticNumber.of(Fraction(3, 2), Fraction(1, 2), 5)
    assert u.norm() == 1
    assert u * u.conjugate() == QuadraticNumber.of(1, 0, 5)


def test_json_has_no_bare_float_only():
    d = AlgebraicNumber.largest_real_root([1, -3, 1]).to_json()
    assert set(d) == {"minpoly", "interval", "approx"}
    lo, hi = (sympy.Rational(v) for v in d["interval"])
    root = (3 + sympy.sqrt(5)) / 2
    assert bool(lo <= root) and bool(root <= hi)
    assert hi - lo <= sympy.Rational(1, 10**9)

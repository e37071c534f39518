from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from capax import GaussianRational

I = GaussianRational(0, 1)


def test_construction_and_coercion():
    a = GaussianRational(Fraction(1, 2), Fraction(-3, 4))
    assert a.re == Fraction(1, 2)
    assert a.im == Fraction(-3, 4)
    assert GaussianRational.coerce(5) == GaussianRational(5)
    assert GaussianRational.coerce(Fraction(2, 3)) == GaussianRational(Fraction(2, 3))
    assert GaussianRational.coerce(a) is a


def test_arithmetic_frozen():
    a = GaussianRational(1, 2)
    b = GaussianRational(3, -1)
    assert a + b == GaussianRational(4, 1)
    assert a - b == GaussianRational(-2, 3)
    assert a * b == GaussianRational(5, 5)
    assert a / b == GaussianRational(Fraction(1, 10), Fraction(7, 10))
    assert a ** 3 == GaussianRational(-11, -2)
    assert -a == GaussianRational(-1, -2)


def test_conjugate_and_abs2():
    a = GaussianRational(Fraction(3, 5), Fraction(4, 5))
    assert a.conjugate() == GaussianRational(Fraction(3, 5), Fraction(-4, 5))
    assert a.abs2() == 1
    assert (a * a.conjugate()).re == a.abs2()


def test_zero_division():
    with pytest.raises(ZeroDivisionError):
        GaussianRational(1) / GaussianRational(0)


def test_truthiness_and_complex():
    assert not GaussianRational(0, 0)
    assert GaussianRational(0, 1)
    assert complex(GaussianRational(Fraction(1, 2), 1)) == 0.5 + 1j


small_fractions = st.fractions(
    min_value=-8, max_value=8, max_denominator=16
)
gaussians = st.builds(GaussianRational, small_fractions, small_fractions)


@given(gaussians, gaussians, gaussians)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    assert a + b == b + a
    assert a * b == b * a


@given(gaussians)
def test_multiplicative_inverse(a):
    if not a:
        return
    assert a * (GaussianRational(1) / a) == GaussianRational(1)


@given(gaussians, gaussians)
def test_abs2_multiplicative(a, b):
    assert (a * b).abs2() == a.abs2() * b.abs2()


@given(st.integers(min_value=0, max_value=12), gaussians)
def test_pow_matches_repeated_product(n, a):
    out = GaussianRational(1)
    for _ in range(n):
        out = out * a
    assert a ** n == out

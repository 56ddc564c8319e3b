from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ncdiff.scalars import ONE, ZERO, Scalar, integer

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=9)
scalars = st.builds(Scalar, rationals, rationals)


@given(scalars, scalars, scalars)
def test_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a
    assert a * b == b * a


@given(scalars)
def test_unit_and_inverse(a):
    assert a * ONE == a
    assert a + ZERO == a
    assert (a - a).is_zero()
    if not a.is_zero():
        assert a * a.inverse() == ONE


def test_complex_multiplication_is_exact():
    i = Scalar.of(0, 1)
    assert i * i == integer(-1)
    assert Scalar.of(Fraction(1, 3), 2) * Scalar.of(3, Fraction(-1, 2)) == Scalar.of(
        2, Fraction(35, 6)
    )


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


@given(scalars)
def test_json_round_trip(a):
    assert Scalar.from_json(a.to_json()) == a


def test_json_accepts_plain_integers():
    assert Scalar.from_json([2, [1, 2]]) == Scalar.of(2, Fraction(1, 2))
    assert Scalar.from_json(3) == integer(3)

"""Exact-scalar invariants: parsing, canonical rendering, signed squares."""

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from opfold import SignedSquare, as_fraction, rat_str

rationals = st.fractions(
    min_value=-(10**6), max_value=10**6, max_denominator=10**4
)


@given(rationals)
def test_always_reduced_with_positive_denominator(q):
    assert q.denominator > 0
    assert gcd(abs(q.numerator), q.denominator) == 1


@given(rationals, rationals)
def test_field_arithmetic_is_exact(a, b):
    assert a + b - b == a
    assert (a + b) - (b + a) == 0
    if b != 0:
        assert (a / b) * b == a
    assert a * b == b * a


@given(rationals)
def test_render_parse_round_trip(q):
    assert as_fraction(rat_str(q)) == q


@given(rationals)
def test_render_is_decimal_free(q):
    text = rat_str(q)
    assert "." not in text and "e" not in text.lower()
    parts = text.split("/")
    assert all(part.lstrip("-").isdigit() for part in parts)


def test_parse_accepts_ints_strings_fractions():
    assert as_fraction(7) == Fraction(7)
    assert as_fraction("7") == Fraction(7)
    assert as_fraction("-3/9") == Fraction(-1, 3)
    assert as_fraction(" 5/10 ") == Fraction(1, 2)
    assert as_fraction(Fraction(2, 4)) == Fraction(1, 2)


def test_parse_rejects_floats_and_decimals():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(ValueError):
        as_fraction("0.5")


@given(rationals, st.sampled_from([-1, 1]))
def test_signed_square_realization(q, sign):
    sq = q * q
    if sq == 0:
        entry = SignedSquare(Fraction(0), 0)
        assert entry.value() == 0.0
        return
    entry = SignedSquare(sq, sign)
    val = entry.value()
    assert val.imag == 0 if not isinstance(val, complex) else True
    assert abs(abs(val) - abs(float(q))) <= 1e-12 * max(1.0, abs(float(q)))


def test_signed_square_negative_square_is_imaginary():
    entry = SignedSquare(Fraction(-4), 1)
    assert entry.value() == pytest.approx(2j)


def test_signed_square_sign_zero_consistency():
    with pytest.raises(ValueError):
        SignedSquare(Fraction(1), 0)
    with pytest.raises(ValueError):
        SignedSquare(Fraction(0), 1)
    with pytest.raises(ValueError):
        SignedSquare(Fraction(1), 2)

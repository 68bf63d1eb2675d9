import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from core.errors import MixedRadicandsError, NegativeOperandError, UndecidableComparisonError
from core.exactnum import (
    ApproxReal,
    Ordering,
    Surd,
    format_decimal,
    parse_rational,
    parse_surd,
    sqrt_cmp,
    sqrt_in_field,
    surd_cmp,
    surd_normalize,
)

RADICANDS = st.sampled_from([2, 3, 5, 6, 7, 21, 45])


def test_normalization_pulls_out_squares():
    assert Surd(0, 1, 8) == Surd(0, 2, 2)
    assert surd_normalize(1, 3, 45) == Surd(1, 9, 5)
    assert Surd(0, 1, Fraction(1, 2)) == Surd(0, Fraction(1, 2), 2)
    assert Surd(1, 2, 9) == 7
    assert Surd(1, 2, 9).is_rational


def test_field_arithmetic():
    x = Surd(3, 2, 2)
    assert x * x.conjugate() == 1
    assert x.norm() == 1
    assert x.trace() == 6
    assert x * x.inverse() == 1
    assert Surd(0, 1, 2) ** 2 == 2
    assert (x - 3) / 2 == Surd(0, 1, 2)
    assert 1 / x == Surd(3, -2, 2)
    assert x ** -1 == x.conjugate()


def test_rational_surds_hash_like_fractions():
    assert hash(Surd(Fraction(1, 2))) == hash(Fraction(1, 2))
    assert {Surd(Fraction(5, 2)): "a"}[Fraction(5, 2)] == "a"


def test_mixed_radicands_refuse_arithmetic_but_order():
    with pytest.raises(MixedRadicandsError):
        Surd(0, 1, 2) + Surd(0, 1, 3)
    with pytest.raises(MixedRadicandsError):
        surd_cmp(Surd(0, 1, 2), Surd(0, 1, 3))
    assert Surd(0, 1, 2) < Surd(0, 1, 3)
    assert Surd(3, 2, 2) < Surd(Fraction(7, 2), Fraction(3, 2), 5)


def test_comparisons_against_rationals():
    assert surd_cmp(Surd(0, 1, 2), Fraction(7, 5)) == Ordering.GREATER
    assert surd_cmp(Surd(0, 1, 2), Fraction(3, 2)) == Ordering.LESS
    assert surd_cmp(Fraction(1, 3), Fraction(1, 3)) == Ordering.EQUAL
    assert Fraction(3, 2) > Surd(0, 1, 2)


def test_sqrt_cmp():
    assert sqrt_cmp(Fraction(5, 2), Fraction(25, 4)) == Ordering.EQUAL
    assert sqrt_cmp(Fraction(11, 4), Fraction(121, 16) - Fraction(1, 100)) == Ordering.GREATER
    with pytest.raises(NegativeOperandError):
        sqrt_cmp(-1, 2)


def test_sqrt_in_field():
    assert sqrt_in_field(Fraction(25, 4)) == Fraction(5, 2)
    assert sqrt_in_field(Surd(Fraction(7, 2), Fraction(3, 2), 5)) == Surd(Fraction(3, 2), Fraction(1, 2), 5)
    assert sqrt_in_field(Surd(2, 1, 3)) is None
    assert sqrt_in_field(8) == Surd(0, 2, 2)


def test_floor_and_ceil_are_exact():
    assert math.floor(Surd(3, 2, 2)) == 5
    assert math.ceil(Surd(3, 2, 2)) == 6
    assert math.floor(Surd(Fraction(5, 2), Fraction(3, 2), 5)) == 5
    assert math.floor(Surd(-1, 1, 2)) == 0
    assert math.floor(Surd(Fraction(-7, 2))) == -4


def test_parse_and_format():
    assert parse_rational("19/2") == Fraction(19, 2)
    assert parse_rational(" 24 ") == 24
    with pytest.raises(ValueError):
        parse_rational("x")
    assert parse_surd("3+2*sqrt(2)") == Surd(3, 2, 2)
    assert parse_surd("7/2+3/2*sqrt(5)") == Surd(Fraction(7, 2), Fraction(3, 2), 5)
    assert parse_surd("sqrt(8)") == Surd(0, 2, 2)
    assert parse_surd("5/11") == Fraction(5, 11)
    assert str(Surd(Fraction(5, 2), Fraction(3, 2), 5)) == "5/2+3/2*sqrt(5)"
    assert str(Surd(3, -2, 2)) == "3-2*sqrt(2)"
    assert str(Surd(Fraction(5, 11))) == "5/11"


def test_format_decimal():
    assert format_decimal(Fraction(5, 2)) == "2.5"
    assert format_decimal(2) == "2"
    assert format_decimal(Surd(0, 1, 4)) == "2"
    assert format_decimal(Surd(3, 2, 2)) == "5.82842712474619"
    assert format_decimal(Surd(0, 1, 5)) == "2.23606797749979"


def test_approx_real_refuses_close_calls():
    with mpmath.workdps(50):
        value = ApproxReal(mpmath.sqrt(2), mpmath.mpf(10) ** -30)
        assert value.compare(Fraction(7, 5)) == Ordering.GREATER
        with pytest.raises(UndecidableComparisonError):
            value.compare(Surd(0, 1, 2))
    assert value.exact is False


@given(st.integers(-50, 50), st.integers(-50, 50), RADICANDS)
def test_sign_matches_numeric_value(a, c, radicand):
    x = Surd(a, c, radicand)
    expected = (a + c * math.sqrt(radicand) > 0) - (a + c * math.sqrt(radicand) < 0)
    if a == 0 and c == 0:
        expected = 0
    assert x.sign() == expected


@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30), RADICANDS)
def test_order_is_translation_invariant(a, c, e, f, radicand):
    x, y = Surd(a, c, radicand), Surd(e, f, radicand)
    assert (x < y) == ((x - y).sign() < 0)
    assert (x < y) == (x + 7 < y + 7)
    assert (x == y) == ((x - y).sign() == 0)


@given(st.integers(1, 30), st.integers(-30, 30), RADICANDS)
def test_inverse_round_trip(a, c, radicand):
    x = Surd(a, c, radicand)
    assert x * x.inverse() == 1
    assert x * x.conjugate() == x.norm()

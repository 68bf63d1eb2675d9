import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from core.cfweights import (
    ContinuedFraction,
    cf_length,
    cf_to_rational,
    cf_value,
    format_run_lengths,
    integral_weights,
    parse_cf_literal,
    parse_run_lengths,
    rational_to_cf,
    surd_weight_blocks,
    weight_expansion,
)
from core.errors import DomainError, NotCoprimeError
from core.exactnum import Surd


def test_finite_values():
    assert ContinuedFraction((5, 1, 6)).value == Fraction(41, 7)
    assert cf_to_rational([7, 4]) == Fraction(29, 4)
    assert cf_to_rational([5, 1, 6, 4]) == Fraction(170, 29)


def test_trailing_one_is_folded():
    assert ContinuedFraction((7, 3, 1)).terms == (7, 4)
    assert str(ContinuedFraction((5, 1, 6))) == "[5;1,6]"
    assert str(ContinuedFraction((6,))) == "[6]"


def test_rational_to_cf():
    assert rational_to_cf(Fraction(170, 29)).terms == (5, 1, 6, 4)
    assert rational_to_cf(6).terms == (6,)
    with pytest.raises(DomainError):
        rational_to_cf(1)


def test_with_last_and_length():
    cf = ContinuedFraction((5, 1, 6))
    assert cf.with_last(1).terms == (5, 1, 7)
    assert cf.length == 12
    assert cf_length(Fraction(29, 4)) == len(integral_weights(29, 4))


def test_bad_terms():
    with pytest.raises(DomainError):
        ContinuedFraction((5, 0))
    with pytest.raises(DomainError):
        ContinuedFraction(())


def test_periodic_values():
    assert cf_value([], [2]) == Surd(1, 1, 2)
    assert cf_value([1], [2]) == Surd(0, 1, 2)
    assert cf_value([5], [1, 4]) == Surd(3, 2, 2)
    assert cf_value([5, 1, 6]) == Fraction(41, 7)
    with pytest.raises(DomainError):
        cf_value([1], [0])


def test_parse_cf_literal():
    assert parse_cf_literal("[5;1,6,4]") == ([5, 1, 6, 4], [])
    assert parse_cf_literal("[5;1,6,3,1]") == ([5, 1, 6, 4], [])
    assert parse_cf_literal("[6]") == ([6], [])
    assert parse_cf_literal("[7;{5,1}*]") == ([7], [5, 1])
    assert parse_cf_literal("[{5,1}*]") == ([], [5, 1])
    with pytest.raises(ValueError):
        parse_cf_literal("5;1")
    with pytest.raises(ValueError):
        parse_cf_literal("[]")


def test_weight_expansion_blocks():
    weights = weight_expansion(Fraction(11, 2))
    assert weights.blocks == ((Fraction(1), 5), (Fraction(1, 2), 2))
    assert weights.entries() == [1] * 5 + [Fraction(1, 2)] * 2
    assert len(weights) == 7
    assert weights.dot([1] * 6) == Fraction(11, 2)
    assert weights.dot([2, 1]) == 3


def test_integral_weights():
    assert integral_weights(29, 4) == [4] * 7 + [1] * 4
    assert integral_weights(6, 1) == [1] * 6
    with pytest.raises(NotCoprimeError):
        integral_weights(4, 2)
    with pytest.raises(DomainError):
        integral_weights(2, 3)


def test_run_lengths():
    values = [29] * 5 + [25] + [4] * 6 + [1] * 4
    assert format_run_lengths(values) == "29^5,25,4^6,1^4"
    assert parse_run_lengths("29^5,25,4^6,1^4") == values
    assert parse_run_lengths("1x6") == [1] * 6


def test_surd_weight_blocks():
    blocks = surd_weight_blocks(Surd(3, 2, 2), 10)
    assert blocks == [(1, 5), (Surd(-2, 2, 2), 1), (Surd(3, -2, 2), 4)]
    assert surd_weight_blocks(Fraction(11, 2), 100) == [(1, 5), (Fraction(1, 2), 2)]
    with pytest.raises(DomainError):
        surd_weight_blocks(1, 3)


coprime_pairs = st.tuples(st.integers(2, 400), st.integers(1, 399)).filter(
    lambda pair: pair[0] > pair[1] and math.gcd(*pair) == 1
)


@given(coprime_pairs)
def test_cf_round_trip(pair):
    p, q = pair
    assert rational_to_cf(Fraction(p, q)).value == Fraction(p, q)


@given(coprime_pairs)
def test_weight_identities(pair):
    p, q = pair
    weights = integral_weights(p, q)
    assert weights[-1] == 1
    assert sum(weights) == p + q - 1
    assert sum(w * w for w in weights) == p * q
    assert weight_expansion(Fraction(p, q)).total() == Fraction(p + q - 1, q)
    assert weight_expansion(Fraction(p, q)).square_sum() == Fraction(p, q)


@given(st.integers(2, 60), st.integers(2, 60), st.integers(1, 60))
def test_surd_blocks_match_rational_blocks(p, q, extra):
    assume(math.gcd(p + q * extra, q) == 1)
    z = Fraction(p + q * extra, q)
    assume(z > 1)
    expected = list(weight_expansion(z).blocks)
    assert surd_weight_blocks(z, len(weight_expansion(z))) == expected

from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from core.accumulation import (
    GOLDEN_FOURTH,
    MIN_ACCUMULATION,
    Branch,
    RootSign,
    acc,
    acc_coefficient,
    acc_inv,
    b_from_center,
    branch_for_ratio,
    volume_at_accumulation,
)
from core.errors import DomainError, NegativeSigmaError, OutOfBranchRangeError
from core.exactnum import Surd


def test_known_accumulation_points():
    assert acc(0) == GOLDEN_FOURTH
    assert acc(Fraction(1, 3)) == MIN_ACCUMULATION
    assert acc(Fraction(1, 5)) == 6
    assert acc_coefficient(Fraction(1, 5)) == Fraction(37, 6)


def test_inverse_branches():
    assert acc_inv(6, Branch.U) == Fraction(5, 11)
    assert acc_inv(6, "L") == Fraction(1, 5)
    assert acc_inv(MIN_ACCUMULATION, Branch.L) == Fraction(1, 3)
    assert acc_inv(7, Branch.U) == Surd(Fraction(21, 71), Fraction(16, 71), 2)


def test_inverse_out_of_range():
    with pytest.raises(OutOfBranchRangeError):
        acc_inv(5, Branch.U)
    with pytest.raises(OutOfBranchRangeError):
        acc_inv(7, Branch.L)
    with pytest.raises(DomainError):
        acc(1)


def test_b_from_center():
    assert b_from_center(6, 1, RootSign.PLUS) == Fraction(5, 11)
    assert b_from_center(6, 1, "minus") == Fraction(1, 5)
    with pytest.raises(NegativeSigmaError):
        b_from_center(4, 1, RootSign.PLUS)


def test_branch_for_ratio():
    assert branch_for_ratio(Fraction(1, 5)) == Branch.L
    assert branch_for_ratio(Fraction(1, 3)) == Branch.U
    assert branch_for_ratio(Fraction(2, 3)) == Branch.U


def test_volume_at_accumulation():
    assert volume_at_accumulation(Fraction(1, 5)) == Fraction(5, 2)
    assert volume_at_accumulation(Fraction(5, 11)) == Fraction(7, 1) / (3 - Fraction(5, 11))


@given(st.integers(1, 40), st.integers(0, 39))
def test_acc_inv_undoes_acc(denominator, numerator):
    assume(numerator < denominator)
    b = Fraction(numerator, denominator)
    assume(b != Fraction(1, 3))
    point = acc(b)
    assert acc_inv(point, branch_for_ratio(b)) == b
    assert point >= MIN_ACCUMULATION

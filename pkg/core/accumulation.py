"""
Accumulation points of H_b and their inverses.

acc(b) is the root > 1 of z^2 - c(b) z + 1 = 0 with c(b) = (3-b)^2/(1-b^2) - 2.
Its inverse has two branches meeting at b = 1/3, z = 3 + 2*sqrt(2): the
lower branch L maps [3+2sqrt2, tau^4] onto [0, 1/3] and the upper branch U
maps [3+2sqrt2, inf) onto [1/3, 1).
"""

from enum import Enum
from fractions import Fraction
from typing import Union

import mpmath

from .errors import DomainError, MixedRadicandsError, NegativeSigmaError, OutOfBranchRangeError
from .exactnum import ApproxReal, Surd, as_surd, sqrt_in_field

ONE_THIRD = Fraction(1, 3)
MIN_ACCUMULATION = Surd(3, 2, 2)
GOLDEN_FOURTH = Surd(Fraction(7, 2), Fraction(3, 2), 5)

DEFAULT_NUMERIC_DPS = 50


class Branch(str, Enum):
    L = "L"
    U = "U"


class RootSign(str, Enum):
    PLUS = "plus"
    MINUS = "minus"


def _check_parameter(b: Surd) -> None:
    if b < 0 or b >= 1:
        raise DomainError(f"b must lie in [0, 1), got {b}")


def acc_coefficient(b) -> Surd:
    """c(b) = (3-b)^2/(1-b^2) - 2, the middle coefficient of the defining quadratic."""
    b = as_surd(b)
    _check_parameter(b)
    return (3 - b) * (3 - b) / (1 - b * b) - 2


def _numeric_root(b: Surd, dps: int) -> ApproxReal:
    with mpmath.workdps(dps):
        bm = b.to_mpf(int(dps * 3.33) + 16)
        c = (3 - bm) ** 2 / (1 - bm ** 2) - 2
        value = (c + mpmath.sqrt(c * c - 4)) / 2
        return ApproxReal(+value, mpmath.mpf(10) ** (-(dps - 5)))


def acc(b, dps: int = DEFAULT_NUMERIC_DPS) -> Union[Surd, ApproxReal]:
    """
    The accumulation point acc(b) > 1.

    Exact whenever sqrt(c(b)^2 - 4) lives in the field of b; otherwise an
    ApproxReal with error bound 10^-(dps-5).
    """
    b = as_surd(b)
    c = acc_coefficient(b)
    root = sqrt_in_field(c * c - 4)
    if root is None:
        return _numeric_root(b, dps)
    try:
        return (c + root) / 2
    except MixedRadicandsError:
        return _numeric_root(b, dps)


def _check_branch_range(z: Surd, branch: Branch) -> None:
    if z < MIN_ACCUMULATION:
        raise OutOfBranchRangeError(f"z = {z} lies below 3+2*sqrt(2)")
    if branch == Branch.L and z > GOLDEN_FOURTH:
        raise OutOfBranchRangeError(f"z = {z} lies above (7+3*sqrt(5))/2, outside the lower branch")


def acc_inv(z, branch: Union[Branch, str]) -> Union[Surd, ApproxReal]:
    """b = (3 -+ sqrt(l^2 - 8l))/(l + 1) with l = z + 1/z + 2; L takes the minus sign."""
    branch = Branch(branch)
    z = as_surd(z)
    _check_branch_range(z, branch)
    ell = z + 1 / z + 2
    root = sqrt_in_field(ell * ell - 8 * ell)
    try:
        if root is not None:
            signed = -root if branch == Branch.L else root
            return (3 + signed) / (ell + 1)
    except MixedRadicandsError:
        pass
    with mpmath.workdps(DEFAULT_NUMERIC_DPS):
        lm = ell.to_mpf(200)
        rm = mpmath.sqrt(lm * lm - 8 * lm)
        value = (3 - rm if branch == Branch.L else 3 + rm) / (lm + 1)
        return ApproxReal(+value, mpmath.mpf(10) ** (-(DEFAULT_NUMERIC_DPS - 5)))


def branch_for_ratio(ratio) -> Branch:
    """The branch containing b = ratio; ratio = 1/3 lies on both."""
    return Branch.L if as_surd(ratio) < ONE_THIRD else Branch.U


def b_from_center(p: int, q: int, sign: Union[RootSign, str]) -> Surd:
    """
    b = (3pq +- (p+q) sqrt(sigma)) / (p^2 + q^2 + 3pq) with sigma = p^2 + q^2 - 6pq.

    The plus sign gives the upper branch, minus the lower.
    """
    sign = RootSign(sign)
    sigma = p * p + q * q - 6 * p * q
    if sigma < 0:
        raise NegativeSigmaError(f"sigma = {sigma} < 0 for center {p}/{q}")
    coefficient = (p + q) if sign == RootSign.PLUS else -(p + q)
    return Surd(3 * p * q, coefficient, sigma) / (p * p + q * q + 3 * p * q)


def volume_at_accumulation(b) -> Union[Surd, ApproxReal]:
    """V_b(acc(b)) through the identity (1 + acc(b))/(3 - b)."""
    b = as_surd(b)
    point = acc(b)
    if isinstance(point, ApproxReal):
        with mpmath.workdps(DEFAULT_NUMERIC_DPS):
            value = (1 + point.value) / (3 - b.to_mpf(200))
            return ApproxReal(+value, point.error_bound)
    return (1 + point) / (3 - b)

"""
Exact scalars: rationals (fractions.Fraction) and real quadratic surds.

A Surd is a + c*sqrt(D) with a, c rational and D a squarefree integer > 1,
or a plain rational (D = 0, c = 0). Every decision (comparison, sign,
floor) is made exactly; the mpmath view exists for rendering only.

Two surds over different radicands cannot be combined arithmetically, only
ordered. A pure rational combines with anything.
"""

import math
import re
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple, Union

import mpmath
import sympy

from .errors import (
    MixedRadicandsError,
    NegativeOperandError,
    UndecidableComparisonError,
)

Rational = Fraction
Number = Union[int, Fraction, "Surd"]

# 128-bit mantissa for every float view
VIEW_PRECISION_BITS = 128


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    @classmethod
    def of(cls, sign: int) -> "Ordering":
        return cls((sign > 0) - (sign < 0))


@lru_cache(maxsize=4096)
def _squarefree_split(n: int) -> Tuple[int, int]:
    """Return (k, s) with n = k*k*s and s squarefree."""
    if n in (0, 1):
        return 1, n
    k, s = 1, 1
    for prime, exponent in sympy.factorint(n).items():
        k *= prime ** (exponent // 2)
        if exponent % 2:
            s *= prime
    return k, s


def rational_sqrt(x: Fraction) -> Optional[Fraction]:
    """Exact square root of a nonnegative rational, or None if it is irrational."""
    if x < 0:
        return None
    x = Fraction(x)
    num_root = math.isqrt(x.numerator)
    den_root = math.isqrt(x.denominator)
    if num_root * num_root == x.numerator and den_root * den_root == x.denominator:
        return Fraction(num_root, den_root)
    return None


def _sign_of(a: Fraction, c: Fraction, radicand: int) -> int:
    """Exact sign of a + c*sqrt(radicand)."""
    if c == 0 or radicand == 0:
        return (a > 0) - (a < 0)
    sign_a = (a > 0) - (a < 0)
    sign_c = (c > 0) - (c < 0)
    if sign_a == 0 or sign_a == sign_c:
        return sign_c if sign_a == 0 else sign_a
    # opposite signs: whichever of a^2 and c^2 D is larger wins
    gap = a * a - c * c * radicand
    if gap > 0:
        return sign_a
    if gap < 0:
        return sign_c
    return 0


def _cross_sign(x: "Surd", y: "Surd") -> int:
    """
    Exact sign of x - y for surds over two different radicands.

    Only ordering crosses fields; arithmetic across them still raises.
    """
    u = Surd._make(x._a - y._a, x._c, x._d)
    w = Surd._make(Fraction(0), y._c, y._d)
    sign_u, sign_w = u.sign(), w.sign()
    if sign_u != sign_w:
        return 1 if sign_u > sign_w else -1
    squares = (u * u) - y._c * y._c * y._d
    return squares.sign() * sign_u


class Surd:
    """An element a + c*sqrt(D) of a real quadratic field, always canonical."""

    __slots__ = ("_a", "_c", "_d")

    def __init__(self, rational_part=0, radical_coefficient=0, radicand=0):
        a = Fraction(rational_part)
        c = Fraction(radical_coefficient)
        raw = Fraction(radicand)
        if raw < 0:
            raise NegativeOperandError(f"radicand {raw} is negative")
        if c == 0 or raw == 0:
            self._a, self._c, self._d = a, Fraction(0), 0
            return
        # sqrt(P/Q) = sqrt(P*Q)/Q, then pull the square part of P*Q out
        k, s = _squarefree_split(raw.numerator * raw.denominator)
        c = c * k / raw.denominator
        if s == 1:
            self._a, self._c, self._d = a + c, Fraction(0), 0
        else:
            self._a, self._c, self._d = a, c, s

    @classmethod
    def _make(cls, a: Fraction, c: Fraction, radicand: int) -> "Surd":
        obj = cls.__new__(cls)
        if c == 0:
            radicand = 0
        obj._a, obj._c, obj._d = a, (c if radicand else Fraction(0)), radicand
        return obj

    # ------------------------------------------------------------------
    # Accessors
    # ------------------------------------------------------------------

    @property
    def rational_part(self) -> Fraction:
        return self._a

    @property
    def radical_coefficient(self) -> Fraction:
        return self._c

    @property
    def radicand(self) -> int:
        return self._d

    @property
    def is_rational(self) -> bool:
        return self._d == 0

    def as_fraction(self) -> Fraction:
        """The value as a Fraction; only valid for rational surds."""
        if self._d:
            raise ValueError(f"{self} is irrational")
        return self._a

    # ------------------------------------------------------------------
    # Field operations
    # ------------------------------------------------------------------

    @staticmethod
    def _coerce(value) -> Optional["Surd"]:
        if isinstance(value, Surd):
            return value
        if isinstance(value, (int, Fraction)):
            return Surd._make(Fraction(value), Fraction(0), 0)
        return None

    def _shared_radicand(self, other: "Surd") -> int:
        if not self._d:
            return other._d
        if not other._d or other._d == self._d:
            return self._d
        raise MixedRadicandsError(self._d, other._d)

    def __add__(self, other):
        other = Surd._coerce(other)
        if other is None:
            return NotImplemented
        radicand = self._shared_radicand(other)
        return Surd._make(self._a + other._a, self._c + other._c, radicand)

    __radd__ = __add__

    def __neg__(self) -> "Surd":
        return Surd._make(-self._a, -self._c, self._d)

    def __pos__(self) -> "Surd":
        return self

    def __sub__(self, other):
        other = Surd._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = Surd._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = Surd._coerce(other)
        if other is None:
            return NotImplemented
        radicand = self._shared_radicand(other)
        a = self._a * other._a + self._c * other._c * radicand
        c = self._a * other._c + self._c * other._a
        return Surd._make(a, c, radicand)

    __rmul__ = __mul__

    def inverse(self) -> "Surd":
        norm = self.norm()
        if norm == 0:
            raise ZeroDivisionError("Surd division by zero")
        return Surd._make(self._a / norm, -self._c / norm, self._d)

    def __truediv__(self, other):
        other = Surd._coerce(other)
        if other is None:
            return NotImplemented
        self._shared_radicand(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = Surd._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> "Surd":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Surd._make(Fraction(1), Fraction(0), 0)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def conjugate(self) -> "Surd":
        return Surd._make(self._a, -self._c, self._d)

    def norm(self) -> Fraction:
        """a^2 - c^2 D, the product with the conjugate."""
        return self._a * self._a - self._c * self._c * self._d

    def trace(self) -> Fraction:
        return 2 * self._a

    # ------------------------------------------------------------------
    # Order
    # ------------------------------------------------------------------

    def sign(self) -> int:
        return _sign_of(self._a, self._c, self._d)

    def __abs__(self) -> "Surd":
        return -self if self.sign() < 0 else self

    def _compare(self, other) -> Optional[int]:
        other = Surd._coerce(other)
        if other is None:
            return None
        if self._d and other._d and self._d != other._d:
            return _cross_sign(self, other)
        radicand = self._shared_radicand(other)
        return _sign_of(self._a - other._a, self._c - other._c, radicand)

    def __eq__(self, other):
        if isinstance(other, Surd):
            return (self._a, self._c, self._d) == (other._a, other._c, other._d)
        if isinstance(other, (int, Fraction)):
            return self._d == 0 and self._a == other
        return NotImplemented

    def __hash__(self):
        if self._d == 0:
            return hash(self._a)
        return hash((self._a, self._c, self._d))

    def __lt__(self, other):
        result = self._compare(other)
        return NotImplemented if result is None else result < 0

    def __le__(self, other):
        result = self._compare(other)
        return NotImplemented if result is None else result <= 0

    def __gt__(self, other):
        result = self._compare(other)
        return NotImplemented if result is None else result > 0

    def __ge__(self, other):
        result = self._compare(other)
        return NotImplemented if result is None else result >= 0

    def __bool__(self) -> bool:
        return self._a != 0 or self._c != 0

    def __floor__(self) -> int:
        if self._d == 0:
            return math.floor(self._a)
        guess = int(mpmath.floor(self.to_mpf()))
        # the float guess can only be off by one near an integer
        while self < guess:
            guess -= 1
        while self >= guess + 1:
            guess += 1
        return guess

    def __ceil__(self) -> int:
        return -math.floor(-self)

    # ------------------------------------------------------------------
    # Views
    # ------------------------------------------------------------------

    def to_mpf(self, prec: int = VIEW_PRECISION_BITS):
        with mpmath.workprec(max(prec, VIEW_PRECISION_BITS)):
            value = mpmath.mpf(self._a.numerator) / self._a.denominator
            if self._d:
                value += mpmath.mpf(self._c.numerator) / self._c.denominator * mpmath.sqrt(self._d)
            return +value

    def __float__(self) -> float:
        return float(self.to_mpf())

    def __str__(self) -> str:
        if self._d == 0:
            return format_rational(self._a)
        coefficient = abs(self._c)
        radical = f"sqrt({self._d})" if coefficient == 1 else f"{format_rational(coefficient)}*sqrt({self._d})"
        if self._a == 0:
            return radical if self._c > 0 else f"-{radical}"
        sign = "+" if self._c > 0 else "-"
        return f"{format_rational(self._a)}{sign}{radical}"

    def __repr__(self) -> str:
        return f"Surd('{self}')"


@dataclass(frozen=True)
class ApproxReal:
    """A numeric fallback value with an absolute error bound. Never exact."""

    value: mpmath.mpf
    error_bound: mpmath.mpf

    exact = False

    def compare(self, other) -> Ordering:
        if isinstance(other, ApproxReal):
            other_value, other_error = other.value, other.error_bound
        else:
            other_value, other_error = to_mpf(other), mpmath.mpf(0)
        gap = self.value - other_value
        if abs(gap) <= self.error_bound + other_error:
            raise UndecidableComparisonError(
                f"{mpmath.nstr(self.value, 20)} is within the error bound of {mpmath.nstr(other_value, 20)}"
            )
        return Ordering.GREATER if gap > 0 else Ordering.LESS

    def to_mpf(self, prec: int = VIEW_PRECISION_BITS):
        return self.value

    def __float__(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        return f"~{mpmath.nstr(self.value, 30)}"


ExactOrApprox = Union[Surd, ApproxReal]


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------

def as_surd(value) -> Surd:
    coerced = Surd._coerce(value)
    if coerced is None:
        raise TypeError(f"cannot treat {value!r} as an exact number")
    return coerced


def exact_value(value: Number) -> Union[Fraction, Surd]:
    """Collapse rational surds to Fractions; leave irrational surds alone."""
    if isinstance(value, Surd):
        return value.as_fraction() if value.is_rational else value
    return Fraction(value)


def surd_normalize(rational_part, radical_coefficient, raw_radicand) -> Surd:
    """Canonical surd equal to rational_part + radical_coefficient * sqrt(raw_radicand)."""
    return Surd(rational_part, radical_coefficient, raw_radicand)


def surd_cmp(x: Number, y: Number) -> Ordering:
    """
    Exact sign of x - y inside one quadratic field.

    Raises MixedRadicandsError for surds over different radicands; the rich
    comparison operators on Surd order across fields, this function does not.
    """
    x, y = as_surd(x), as_surd(y)
    x._shared_radicand(y)
    return Ordering.of(x._compare(y))


def sqrt_cmp(x: Number, r: Number) -> Ordering:
    """Exact sign of x - sqrt(r) for x, r >= 0."""
    x, r = as_surd(x), as_surd(r)
    if x.sign() < 0 or r.sign() < 0:
        raise NegativeOperandError(f"sqrt_cmp needs nonnegative operands, got {x} and {r}")
    return surd_cmp(x * x, r)


def sqrt_in_field(x: Number) -> Optional[Surd]:
    """
    Exact square root of x inside its own field, or None.

    Rational x always succeeds (possibly with a new radicand). For
    x = a + c*sqrt(D) the root u + v*sqrt(D) needs u^2 = (a +- sqrt(a^2 - c^2 D))/2
    to be a rational square.
    """
    x = as_surd(x)
    if x.sign() < 0:
        raise NegativeOperandError(f"square root of negative value {x}")
    if x.is_rational:
        return Surd(0, 1, x.rational_part)
    root_of_norm = rational_sqrt(x.norm())
    if root_of_norm is None:
        return None
    a, c, radicand = x.rational_part, x.radical_coefficient, x.radicand
    for u_squared in ((a + root_of_norm) / 2, (a - root_of_norm) / 2):
        u = rational_sqrt(u_squared) if u_squared > 0 else None
        if u is None:
            continue
        candidate = Surd._make(u, c / (2 * u), radicand)
        if candidate.sign() < 0:
            candidate = -candidate
        if candidate * candidate == x:
            return candidate
    return None


def to_mpf(value, prec: int = VIEW_PRECISION_BITS):
    """High-precision view of any exact or approximate value."""
    if isinstance(value, (Surd, ApproxReal)):
        return value.to_mpf(prec)
    value = Fraction(value)
    with mpmath.workprec(max(prec, VIEW_PRECISION_BITS)):
        return mpmath.mpf(value.numerator) / value.denominator


# ---------------------------------------------------------------------------
# Text forms
# ---------------------------------------------------------------------------

_SURD_PATTERN = re.compile(
    r"^\s*(?P<a>[+-]?\d+(?:/\d+)?)?\s*"
    r"(?:(?P<sign>[+-])?\s*(?:(?P<c>\d+(?:/\d+)?)\s*\*\s*)?sqrt\(\s*(?P<d>\d+(?:/\d+)?)\s*\))?\s*$"
)


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer, or a finite decimal into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


def parse_surd(text: str) -> Surd:
    """Parse "a+c*sqrt(D)" (any part optional) or a plain rational."""
    match = _SURD_PATTERN.match(text)
    if not match or not (match.group("a") or match.group("d")):
        try:
            return as_surd(parse_rational(text))
        except ValueError:
            raise ValueError(f"not a surd literal: {text!r}") from None
    a = Fraction(match.group("a")) if match.group("a") else Fraction(0)
    if not match.group("d"):
        return as_surd(a)
    if match.group("a") and not match.group("sign"):
        raise ValueError(f"missing sign before sqrt in {text!r}")
    c = Fraction(match.group("c")) if match.group("c") else Fraction(1)
    if match.group("sign") == "-":
        c = -c
    return Surd(a, c, Fraction(match.group("d")))


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value, digits: int = 15) -> str:
    """Decimal rendering with `digits` significant digits; the only lossy step."""
    if isinstance(value, (int, Fraction)) or (isinstance(value, Surd) and value.is_rational):
        exact = Fraction(value.as_fraction() if isinstance(value, Surd) else value)
        if exact.denominator == 1:
            return str(exact.numerator)
    with mpmath.workprec(VIEW_PRECISION_BITS):
        rendered = mpmath.nstr(to_mpf(value), digits, strip_zeros=True)
    if rendered.endswith(".0"):
        rendered = rendered[:-2]
    return rendered

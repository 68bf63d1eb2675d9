"""
Continued fractions and weight expansions.

For z = p/q > 1 with continued fraction [l0; l1, ..., lN], the weight
expansion w(z) has blocks (r_i/q)^{l_i} where r_{-1} = p, r_0 = q and
r_{i+1} = r_{i-1} - l_i r_i (the Euclidean remainders). Its integral form
q*w(p/q) is the list of remainders with multiplicities.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple, Union

from .errors import DomainError, NotCoprimeError
from .exactnum import Surd, as_surd

Terms = Tuple[int, ...]


def _canonical_terms(terms: Iterable[int]) -> Terms:
    terms = tuple(int(t) for t in terms)
    if not terms:
        raise DomainError("a continued fraction needs at least one term")
    if any(t <= 0 for t in terms[1:]) or terms[0] < 0:
        raise DomainError(f"continued fraction terms must be positive: {list(terms)}")
    if len(terms) > 1 and terms[-1] == 1:
        terms = terms[:-2] + (terms[-2] + 1,)
    return terms


@dataclass(frozen=True)
class ContinuedFraction:
    """A finite continued fraction [l0; l1, ..., lN], stored with lN >= 2 when N >= 1."""

    terms: Terms

    def __post_init__(self):
        object.__setattr__(self, "terms", _canonical_terms(self.terms))

    @property
    def value(self) -> Fraction:
        return cf_to_rational(self)

    @property
    def length(self) -> int:
        return sum(self.terms)

    def with_last(self, delta: int) -> "ContinuedFraction":
        """The continued fraction whose last term is shifted by delta."""
        return ContinuedFraction(self.terms[:-1] + (self.terms[-1] + delta,))

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        head, tail = self.terms[0], self.terms[1:]
        if not tail:
            return f"[{head}]"
        return f"[{head};{','.join(str(t) for t in tail)}]"


def convergents(terms: Sequence[int]) -> List[Tuple[int, int]]:
    """Successive convergents (p_k, q_k) of [t0; t1, ...]."""
    result = []
    p_prev, p = 1, int(terms[0])
    q_prev, q = 0, 1
    result.append((p, q))
    for term in terms[1:]:
        p_prev, p = p, term * p + p_prev
        q_prev, q = q, term * q + q_prev
        result.append((p, q))
    return result


def _terms_of(cf: Union[ContinuedFraction, Sequence[int]]) -> Terms:
    if isinstance(cf, ContinuedFraction):
        return cf.terms
    return tuple(int(t) for t in cf)


def cf_to_rational(cf: Union[ContinuedFraction, Sequence[int]]) -> Fraction:
    terms = _terms_of(cf)
    if not terms:
        raise DomainError("empty continued fraction")
    p, q = convergents(terms)[-1]
    return Fraction(p, q)


def rational_to_cf(z) -> ContinuedFraction:
    z = Fraction(z)
    if z <= 1:
        raise DomainError(f"continued fractions are only formed for z > 1, got {z}")
    p, q = z.numerator, z.denominator
    terms = []
    while q:
        terms.append(p // q)
        p, q = q, p % q
    return ContinuedFraction(tuple(terms))


def _moebius(terms: Sequence[int], tail: Surd) -> Surd:
    """[t0; t1, ..., t_{s-1}, tail] for an exact tail > 0."""
    pairs = convergents(terms)
    p, q = pairs[-1]
    p_prev, q_prev = pairs[-2] if len(pairs) > 1 else (1, 0)
    return (tail * p + p_prev) / (tail * q + q_prev)


def periodic_cf_value(head: Sequence[int], cycle: Sequence[int]) -> Surd:
    """
    Exact value of [head; {cycle}^inf].

    The cycle tail y solves y = [c0; c1, ..., c_{r-1}, y], i.e.
    Q y^2 + (Q' - P) y - P' = 0 with P/Q, P'/Q' the last two convergents
    of the cycle; the head is then applied as a fractional-linear map.
    """
    cycle = [int(t) for t in cycle]
    if not cycle or any(t <= 0 for t in cycle):
        raise DomainError(f"cycle must be nonempty with positive terms: {cycle}")
    pairs = convergents(cycle)
    p, q = pairs[-1]
    p_prev, q_prev = pairs[-2] if len(pairs) > 1 else (1, 0)
    linear = Fraction(p - q_prev)
    tail = (Surd(0, 1, linear * linear + 4 * q * p_prev) + linear) / (2 * q)
    if not head:
        return tail
    return _moebius([int(t) for t in head], tail)


def cf_value(head: Sequence[int], cycle: Sequence[int] = ()) -> Union[Fraction, Surd]:
    if cycle:
        return periodic_cf_value(head, cycle)
    return cf_to_rational(head)


_CF_PATTERN = re.compile(r"^\s*\[(?P<body>[^\]]*)\]\s*$")
_CYCLE_PATTERN = re.compile(r"\{(?P<cycle>[\d,\s]+)\}\s*\*?\s*$")


def parse_cf_literal(text: str) -> Tuple[List[int], List[int]]:
    """
    Parse "[5;1,6,4]", "[6]", "[7;{5,1}*]", "[{5,1}*]" into (head, cycle).

    A finite literal is returned canonical (a trailing 1 is folded in).
    """
    match = _CF_PATTERN.match(text)
    if not match:
        raise ValueError(f"not a continued fraction literal: {text!r}")
    body = match.group("body").replace(";", ",")
    cycle: List[int] = []
    cycle_match = _CYCLE_PATTERN.search(body)
    if cycle_match:
        cycle = [int(t) for t in cycle_match.group("cycle").split(",") if t.strip()]
        body = body[:cycle_match.start()]
    try:
        head = [int(t) for t in body.split(",") if t.strip()]
    except ValueError:
        raise ValueError(f"not a continued fraction literal: {text!r}") from None
    if not cycle:
        if not head:
            raise ValueError(f"empty continued fraction literal: {text!r}")
        head = list(_canonical_terms(head))
    return head, cycle


@dataclass(frozen=True)
class WeightExpansion:
    """Blocks (value, multiplicity) of w(z); values strictly decreasing, first value 1."""

    blocks: Tuple[Tuple[Fraction, int], ...]

    def entries(self) -> List[Fraction]:
        result: List[Fraction] = []
        for value, multiplicity in self.blocks:
            result.extend([value] * multiplicity)
        return result

    def __len__(self) -> int:
        return sum(multiplicity for _, multiplicity in self.blocks)

    def total(self) -> Fraction:
        return sum((value * multiplicity for value, multiplicity in self.blocks), Fraction(0))

    def square_sum(self) -> Fraction:
        return sum((value * value * multiplicity for value, multiplicity in self.blocks), Fraction(0))

    def dot(self, mvec: Sequence[int]) -> Fraction:
        """Dot product against a (nonincreasing) multiplicity vector, zero-padded."""
        total = Fraction(0)
        position = 0
        for value, multiplicity in self.blocks:
            chunk = mvec[position:position + multiplicity]
            total += value * sum(chunk)
            position += multiplicity
            if position >= len(mvec):
                break
        return total


def _remainder_blocks(p: int, q: int) -> List[Tuple[int, int]]:
    blocks = []
    previous, current = p, q
    while current:
        blocks.append((current, previous // current))
        previous, current = current, previous % current
    return blocks


def weight_expansion(z) -> WeightExpansion:
    z = Fraction(z)
    if z <= 1:
        raise DomainError(f"weight expansions are only formed for z > 1, got {z}")
    q = z.denominator
    blocks = tuple((Fraction(r, q), count) for r, count in _remainder_blocks(z.numerator, q))
    return WeightExpansion(blocks)


def integral_weights(p: int, q: int) -> List[int]:
    """q*w(p/q) as integers: last entry 1, sum p + q - 1, sum of squares pq."""
    if math.gcd(p, q) != 1:
        raise NotCoprimeError(f"gcd({p}, {q}) = {math.gcd(p, q)}")
    if not p > q >= 1:
        raise DomainError(f"integral weights need p > q >= 1, got ({p}, {q})")
    result: List[int] = []
    for r, count in _remainder_blocks(p, q):
        result.extend([r] * count)
    return result


def cf_length(z) -> int:
    return rational_to_cf(z).length


def format_run_lengths(values: Sequence[int]) -> str:
    """Compact "29^5,25,4^6,1^4" rendering of a multiplicity vector."""
    parts = []
    index = 0
    while index < len(values):
        run = 1
        while index + run < len(values) and values[index + run] == values[index]:
            run += 1
        parts.append(f"{values[index]}^{run}" if run > 1 else str(values[index]))
        index += run
    return ",".join(parts)


def parse_run_lengths(text: str) -> List[int]:
    """Inverse of format_run_lengths; accepts "29^5,25,4^6,1^4" and "x" for "^"."""
    values: List[int] = []
    for chunk in text.replace("x", "^").split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "^" in chunk:
            value, count = chunk.split("^", 1)
            values.extend([int(value)] * int(count))
        else:
            values.append(int(chunk))
    return values


def surd_weight_blocks(z, max_entries: int) -> List[Tuple[Surd, int]]:
    """
    Exact leading blocks of w(z) for a rational or quadratic-surd z > 1.

    The blocks cover at least the first max_entries weights (the last
    multiplicity is clipped); a rational z terminates on its own.
    """
    x = as_surd(z)
    if x <= 1:
        raise DomainError(f"weight expansions are only formed for z > 1, got {x}")
    width = as_surd(1)
    blocks: List[Tuple[Surd, int]] = []
    count = 0
    while count < max_entries:
        multiplicity = math.floor(x / width)
        taken = min(multiplicity, max_entries - count)
        blocks.append((width, taken))
        count += taken
        remainder = x - width * multiplicity
        if remainder.sign() == 0:
            break
        x, width = width, remainder
    return blocks

"""
Diophantine and quasi-perfect classes and their obstruction functions.

A class (d, m; m_1, m_2, ...) gives the obstruction
mu(z) = (m . w(z)) / (d - m b) on the target H_b. A quasi-perfect class has
m = q w(p/q); near its center a = p/q the obstruction is qz/(d-mb) to the
left and p/(d-mb) to the right.
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath
import sympy

from utils.logger import get_logger
from utils.parallel import parallel_map

from .accumulation import (
    GOLDEN_FOURTH,
    MIN_ACCUMULATION,
    ONE_THIRD,
    Branch,
    acc_inv,
    branch_for_ratio,
)
from .cfweights import (
    ContinuedFraction,
    cf_to_rational,
    format_run_lengths,
    integral_weights,
    parse_run_lengths,
    rational_to_cf,
    surd_weight_blocks,
    weight_expansion,
)
from .errors import (
    AmbiguousBranchError,
    CenterOutOfRangeError,
    DegenerateDenominatorError,
    DomainError,
    NotDiophantineError,
    OutOfWindowError,
)
from .exactnum import ApproxReal, Ordering, Surd, as_surd, sqrt_cmp, sqrt_in_field

logger = get_logger()


# ---------------------------------------------------------------------------
# Class types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExClass:
    """A candidate class (d, m; mvec); mvec is stored sorted nonincreasing, zeros dropped."""

    d: int
    m: int
    mvec: Tuple[int, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted((int(x) for x in self.mvec if x != 0), reverse=True))
        object.__setattr__(self, "mvec", ordered)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.m, self.d)

    def __str__(self) -> str:
        return f"({self.d},{self.m};{format_run_lengths(self.mvec)})"


@dataclass(frozen=True)
class QuasiPerfectClass:
    """A class with mvec = q w(p/q); d^2 - m^2 = pq - 1 and 3d = m + p + q."""

    d: int
    m: int
    p: int
    q: int

    @property
    def center(self) -> Fraction:
        return Fraction(self.p, self.q)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.m, self.d)

    @cached_property
    def mvec(self) -> Tuple[int, ...]:
        return tuple(integral_weights(self.p, self.q))

    def as_exclass(self) -> ExClass:
        return ExClass(self.d, self.m, self.mvec)

    def __str__(self) -> str:
        if self.q == 1:
            return f"({self.d},{self.m};w({self.p}))"
        return f"({self.d},{self.m};{self.q}w({self.p}/{self.q}))"


AnyClass = Union[ExClass, QuasiPerfectClass]


class MuRegime(str, Enum):
    LEFT_LINEAR = "LeftLinear"
    RIGHT_CONSTANT = "RightConstant"
    GENERAL = "General"


@dataclass(frozen=True)
class ObstructionValue:
    value: Surd
    regime: MuRegime


class Side(str, Enum):
    BELOW = "below"
    ABOVE = "above"


# ---------------------------------------------------------------------------
# Construction and identities
# ---------------------------------------------------------------------------

def make_quasi_perfect(d: int, m: int, p: int, q: int) -> QuasiPerfectClass:
    if not p > q >= 1:
        raise DomainError(f"a center needs p > q >= 1, got {p}/{q}")
    if math.gcd(p, q) != 1:
        raise DomainError(f"center {p}/{q} is not in lowest terms")
    if d * d - m * m != p * q - 1:
        raise NotDiophantineError("d^2 - m^2 = pq - 1", f"{d * d - m * m} != {p * q - 1}")
    if 3 * d != m + p + q:
        raise NotDiophantineError("3d = m + p + q", f"{3 * d} != {m + p + q}")
    return QuasiPerfectClass(d, m, p, q)


def _mvec_of(c: AnyClass) -> Tuple[int, ...]:
    return c.mvec


def check_diophantine(c: AnyClass) -> bool:
    mvec = _mvec_of(c)
    linear = 3 * c.d - c.m - sum(mvec) == 1
    quadratic = c.d * c.d - c.m * c.m - sum(x * x for x in mvec) == -1
    return linear and quadratic


def ech_index(c: AnyClass) -> int:
    """(d(d+3) - m(m+1))/2, the capacity index attached to the class."""
    return (c.d * (c.d + 3) - c.m * (c.m + 1)) // 2


def intersection(first: AnyClass, second: AnyClass) -> int:
    """dd' - mm' - sum m_i m'_i with both vectors sorted and zero-padded."""
    total = first.d * second.d - first.m * second.m
    return total - sum(a * b for a, b in zip(_mvec_of(first), _mvec_of(second)))


def parse_class_spec(text: str) -> AnyClass:
    """
    Parse "d,m;p/q" and "d,m;p" into a quasi-perfect class, or
    "d,m;[29^5,25,4^6,1^4]" into an explicit class.
    """
    try:
        head, tail = text.split(";", 1)
        d_text, m_text = head.split(",")
        d, m = int(d_text), int(m_text)
    except ValueError:
        raise ValueError(f"not a class literal: {text!r}") from None
    tail = tail.strip()
    if tail.startswith("["):
        if not tail.endswith("]"):
            raise ValueError(f"unterminated multiplicity list in {text!r}")
        return ExClass(d, m, tuple(parse_run_lengths(tail[1:-1])))
    center = Fraction(tail)
    return make_quasi_perfect(d, m, center.numerator, center.denominator)


# ---------------------------------------------------------------------------
# Obstruction functions
# ---------------------------------------------------------------------------

def _denominator(c: AnyClass, b) -> Surd:
    denominator = c.d - c.m * as_surd(b)
    if denominator.sign() <= 0:
        raise DegenerateDenominatorError(f"d - m b = {denominator} <= 0 for {c} at b = {b}")
    return denominator


def mu_at(c: AnyClass, b, z) -> Union[Fraction, Surd]:
    """Exact m . w(z) / (d - m b) at a rational z > 1."""
    denominator = _denominator(c, b)
    numerator = weight_expansion(Fraction(z)).dot(_mvec_of(c))
    value = numerator / denominator
    return value.as_fraction() if isinstance(value, Surd) and value.is_rational else value


def center_window(p: int, q: int) -> Tuple[Fraction, Fraction]:
    """
    The interval [z1, z2) around p/q on which the piecewise formula holds.

    Its ends are the values of the continued fraction of p/q with the last
    term lowered and raised by one, in increasing order.
    """
    terms = rational_to_cf(Fraction(p, q)).terms
    lowered = cf_to_rational(terms[:-1] + (terms[-1] - 1,))
    raised = cf_to_rational(terms[:-1] + (terms[-1] + 1,))
    return min(lowered, raised), max(lowered, raised)


def mu_near_center(c: QuasiPerfectClass, b, z) -> ObstructionValue:
    """
    Piecewise mu on the window of c's center.

    For an integer center a the mvec is 1^a, and w(z) starts with a
    ones for every z >= a, so the right-hand constant has no upper end.
    """
    z = as_surd(z)
    low, high = center_window(c.p, c.q)
    if c.q == 1:
        high = None
    if z < low or (high is not None and z >= high):
        raise OutOfWindowError(f"z = {z} is outside the window [{low}, {high}) of {c}")
    denominator = _denominator(c, b)
    if z < c.center:
        return ObstructionValue(c.q * z / denominator, MuRegime.LEFT_LINEAR)
    return ObstructionValue(as_surd(c.p) / denominator, MuRegime.RIGHT_CONSTANT)


def _is_rational(z) -> bool:
    return isinstance(z, (int, Fraction)) or (isinstance(z, Surd) and z.is_rational)


def obstruction_value(c: AnyClass, b, z) -> ObstructionValue:
    """mu at rational z for any class; at an irrational z only inside a center window."""
    if _is_rational(z):
        z = as_surd(z).as_fraction()
        return ObstructionValue(as_surd(mu_at(c, b, z)), MuRegime.GENERAL)
    if isinstance(c, QuasiPerfectClass):
        return mu_near_center(c, b, z)
    raise OutOfWindowError(f"{c} has no exact obstruction value at irrational z = {z}; use estimate_mu")


def estimate_mu(c: AnyClass, b, z, dps: int = 50) -> ApproxReal:
    """
    Numeric mu at any z > 1 (rational or surd), b possibly over another field.

    The first len(mvec) weights are exact; only the final division is done in
    mpmath at `dps` digits, so the error bound is 10^-(dps-5).
    """
    mvec = _mvec_of(c)
    blocks = surd_weight_blocks(z, len(mvec))
    numerator = as_surd(0)
    position = 0
    for width, multiplicity in blocks:
        numerator = numerator + width * sum(mvec[position:position + multiplicity])
        position += multiplicity
    b = as_surd(b)
    if c.d - c.m * b <= 0:
        raise DegenerateDenominatorError(f"d - m b <= 0 for {c} at b = {b}")
    with mpmath.workdps(dps):
        prec = int(dps * 3.33) + 16
        value = numerator.to_mpf(prec) / (c.d - c.m * b.to_mpf(prec))
        return ApproxReal(+value, mpmath.mpf(10) ** (-(dps - 5)))


@dataclass(frozen=True)
class VolumeBound:
    """V_b(z) = sqrt(z/(1-b^2)) held through its exact square."""

    b: Surd
    z: Surd
    squared: Surd

    def compare(self, value) -> Ordering:
        """Exact sign of value - V_b(z)."""
        return sqrt_cmp(value, self.squared)

    def exact(self) -> Optional[Surd]:
        return sqrt_in_field(self.squared)

    def at_accumulation_point(self) -> Surd:
        """(1+z)/(3-b), equal to V_b(z) exactly when z = acc(b)."""
        return (1 + self.z) / (3 - self.b)


def volume_bound(b, z) -> VolumeBound:
    b, z = as_surd(b), as_surd(z)
    if b < 0 or b >= 1:
        raise DomainError(f"b must lie in [0, 1), got {b}")
    if z < 1:
        raise DomainError(f"z must be at least 1, got {z}")
    return VolumeBound(b, z, z / (1 - b * b))


def nontrivial_at(c: AnyClass, b, z) -> bool:
    mu = obstruction_value(c, b, z)
    return volume_bound(b, z).compare(mu.value) == Ordering.GREATER


def is_b_perfect(c: AnyClass, b) -> bool:
    """|bd - m| < sqrt(1 - b^2)."""
    b = as_surd(b)
    gap = abs(b * c.d - c.m)
    return sqrt_cmp(gap, 1 - b * b) == Ordering.LESS


def live_condition(c: AnyClass, b, r: int = 1, s: int = 1, side: Union[Side, str] = Side.BELOW) -> bool:
    """
    Sufficient liveness interval for b at the center of c.

    Below r/s: (m^2-1)/(dm) <= b <= (s + m(rd-sm))/(r + d(rd-sm)).
    Above r/s: (m(sm-rd) - s)/(d(sm-rd) - r) <= b <= m/d.
    r = s = 1 on the below side is the plain condition.
    """
    side = Side(side)
    b = as_surd(b)
    d, m = c.d, c.m
    if side == Side.BELOW:
        lower: Optional[Fraction] = Fraction(m * m - 1, d * m) if m != 0 else None
        upper_den = r + d * (r * d - s * m)
        if upper_den == 0:
            return False
        upper = Fraction(s + m * (r * d - s * m), upper_den)
    else:
        lower_den = d * (s * m - r * d) - r
        if lower_den == 0:
            return False
        lower = Fraction(m * (s * m - r * d) - s, lower_den)
        upper = Fraction(m, d)
    if lower is not None and b < lower:
        return False
    return b <= upper


def center_blocking_test(c: QuasiPerfectClass) -> bool:
    """mu at the center exceeds the volume bound at b0 = acc^-1(center) on the branch of m/d."""
    center = as_surd(c.center)
    if center <= MIN_ACCUMULATION:
        raise CenterOutOfRangeError(f"center {c.center} does not exceed 3+2*sqrt(2)")
    if c.ratio == ONE_THIRD:
        raise AmbiguousBranchError(f"m/d = 1/3 for {c}")
    branch = branch_for_ratio(c.ratio)
    if branch == Branch.L and center > GOLDEN_FOURTH:
        return False
    b0 = acc_inv(center, branch)
    if isinstance(b0, ApproxReal):
        raise DomainError(f"acc^-1({c.center}) is not a quadratic surd")
    if c.d - c.m * b0 <= 0:
        return False
    value = as_surd(c.p) / (c.d - c.m * b0)
    return sqrt_cmp(value, center / (1 - b0 * b0)) == Ordering.GREATER


# ---------------------------------------------------------------------------
# Class search
# ---------------------------------------------------------------------------

def find_dm_from_k(k: int) -> List[Tuple[int, int]]:
    """
    All (d, m >= 0) with (d(d+3) - m(m+1))/2 = k.

    (2d+3)^2 - (2m+1)^2 = 8(k+1) factors as u v with u = 2(d-m+1), v = 2(d+m+2).
    """
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    target = 8 * (k + 1)
    found = set()
    for u in sympy.divisors(target):
        v = target // u
        if u >= v:
            break
        if (u + v - 6) % 4 or (v - u - 2) % 4:
            continue
        d, m = (u + v - 6) // 4, (v - u - 2) // 4
        if d >= 0 and m >= 0:
            found.add((d, m))
    return sorted(found)


def find_pq_from_dm(d: int, m: int) -> List[Tuple[int, int]]:
    """Coprime (p, q), p > q >= 1, with p + q = 3d - m and pq = d^2 - m^2 + 1."""
    total, product_ = 3 * d - m, d * d - m * m + 1
    discriminant = total * total - 4 * product_
    if total <= 0 or product_ <= 0 or discriminant <= 0:
        return []
    root = math.isqrt(discriminant)
    if root * root != discriminant or (total + root) % 2:
        return []
    p, q = (total + root) // 2, (total - root) // 2
    if q >= 1 and p > q and math.gcd(p, q) == 1:
        return [(p, q)]
    return []


def dm_from_center(p: int, q: int) -> List[Tuple[int, int]]:
    """All (d, m >= 0) making (d, m; q w(p/q)) quasi-perfect: d = (3(p+q) +- sqrt(sigma+8))/8."""
    total = p + q
    shifted_sigma = p * p + q * q - 6 * p * q + 8
    if shifted_sigma < 0:
        return []
    root = math.isqrt(shifted_sigma)
    if root * root != shifted_sigma:
        return []
    found = set()
    for numerator in (3 * total + root, 3 * total - root):
        if numerator % 8:
            continue
        d = numerator // 8
        m = 3 * d - total
        if d >= 0 and m >= 0 and d * d - m * m == p * q - 1:
            found.add((d, m))
    return sorted(found)


ClassRecord = Tuple[int, int, int, int, ContinuedFraction]


def _classes_for_denominator(task: Tuple[Fraction, Fraction, int]) -> List[ClassRecord]:
    z_low, z_high, q = task
    records = []
    first = math.floor(z_low * q) + 1
    last = math.ceil(z_high * q) - 1
    for p in range(first, last + 1):
        if math.gcd(p, q) != 1:
            continue
        for d, m in dm_from_center(p, q):
            records.append((d, m, p, q, rational_to_cf(Fraction(p, q))))
    return records


def classes_with_cf_in_range(z_low, z_high, q_min: int, q_max: int) -> List[ClassRecord]:
    """Every quasi-perfect (d, m, p, q) with p/q strictly inside (z_low, z_high), q in [q_min, q_max]."""
    z_low, z_high = Fraction(z_low), Fraction(z_high)
    if not 1 < z_low < z_high:
        raise DomainError(f"need 1 < z_low < z_high, got ({z_low}, {z_high})")
    if not 1 <= q_min <= q_max:
        raise DomainError(f"need 1 <= q_min <= q_max, got ({q_min}, {q_max})")
    tasks = [(z_low, z_high, q) for q in range(q_min, q_max + 1)]
    results = parallel_map(_classes_for_denominator, tasks)
    records = [record for chunk in results for record in chunk]
    records.sort(key=lambda record: (Fraction(record[2], record[3]), record[0]))
    logger.debug(f"classes_with_cf_in_range({z_low}, {z_high}, {q_min}, {q_max}): {len(records)} classes")
    return records


def search_ending(head: Sequence[int], ending: Sequence[int]) -> List[Tuple[int, int]]:
    """(d, m) of the quasi-perfect classes centered at [head, ending]."""
    terms = list(head) + list(ending)
    value = cf_to_rational(terms)
    if value <= 1:
        raise DomainError(f"{terms} has value {value} <= 1")
    return dm_from_center(value.numerator, value.denominator)


# ---------------------------------------------------------------------------
# Overshadowing candidates
# ---------------------------------------------------------------------------

class CandidateStatus(str, Enum):
    EXCLUDED = "Excluded"
    NEEDS_REVIEW = "NeedsReview"


@dataclass(frozen=True)
class OvershadowCandidate:
    d: int
    m: int
    status: CandidateStatus
    reason: str = ""


def _block_lengths(break_point: Fraction) -> List[int]:
    return [multiplicity for _, multiplicity in weight_expansion(break_point).blocks]


def _deviations_match(lengths: Sequence[int], values: Sequence[int], linear: int, quadratic: int) -> bool:
    base_sum = sum(length * value for length, value in zip(lengths, values))
    base_squares = sum(length * value * value for length, value in zip(lengths, values))
    if base_sum == linear and base_squares == quadratic:
        return True
    for index, value in enumerate(values):
        for epsilon in (-1, 1):
            if base_sum + epsilon != linear or base_squares + 2 * value * epsilon + 1 != quadratic:
                continue
            if value + epsilon < 1:
                continue
            # +1 sits first in its block, -1 last; the whole vector stays nonincreasing
            if epsilon > 0 and index > 0 and values[index - 1] < value + 1:
                continue
            if epsilon < 0 and index + 1 < len(values) and values[index + 1] > value - 1:
                continue
            return True
    return False


def _block_structure_feasible(lengths: Sequence[int], linear: int, quadratic: int) -> bool:
    """
    Is there a positive nonincreasing vector, constant on blocks of the given
    lengths up to a single entry moved by +-1, whose entries sum to `linear`
    and whose squares sum to `quadratic`?
    """

    def search(index: int, ceiling: int, values: List[int], used: int) -> bool:
        if index == len(lengths):
            return _deviations_match(lengths, values, linear, quadratic)
        remaining = sum(lengths[index + 1:])
        for value in range(1, ceiling + 1):
            spent = used + lengths[index] * value
            if spent + remaining > linear + 1:
                break
            values.append(value)
            found = search(index + 1, value, values, spent)
            values.pop()
            if found:
                return True
        return False

    return search(0, max(linear, 1), [], 0)


def _exclusion_reason(d: int, m: int, break_points: Optional[Sequence[Fraction]]) -> Optional[str]:
    linear = 3 * d - m - 1
    quadratic = d * d - m * m + 1
    if linear < 0 or quadratic < 0:
        return "negative linear or quadratic budget"
    if quadratic < linear:
        return f"sum of squares {quadratic} < sum {linear}"
    if quadratic > linear * linear:
        return f"sum of squares {quadratic} > (sum)^2 = {linear * linear}"
    if (quadratic - linear) % 2:
        return "sum and sum of squares have different parity"
    if break_points:
        for point in break_points:
            if _block_structure_feasible(_block_lengths(Fraction(point)), linear, quadratic):
                return None
        listed = ", ".join(str(Fraction(point)) for point in break_points)
        return f"no block-structured multiplicities at break points {listed}"
    return None


def overshadow_candidates(
    b_inf,
    r: int,
    s: int,
    side: Union[Side, str] = Side.BELOW,
    break_points: Optional[Sequence] = None,
) -> List[OvershadowCandidate]:
    """
    Classes (d', m') that could overshadow a staircase at b_inf.

    Below: d' < s/(r - s b_inf) and m'/d' > r/s. Above: d' < s/(s b_inf - r)
    and m'/d' < r/s. In both cases |b_inf d' - m'| < 1.
    """
    side = Side(side)
    b_inf = as_surd(b_inf)
    threshold = Fraction(r, s)
    gap = threshold - b_inf if side == Side.BELOW else b_inf - threshold
    if gap <= 0:
        raise DomainError(f"b_inf = {b_inf} is not {side.value} r/s = {threshold}")
    bound = 1 / gap
    candidates: List[OvershadowCandidate] = []
    d = 1
    while d < bound:
        for m in range(0, d + 1):
            ratio = Fraction(m, d)
            if side == Side.BELOW and ratio <= threshold:
                continue
            if side == Side.ABOVE and ratio >= threshold:
                continue
            if abs(b_inf * d - m) >= 1:
                continue
            reason = _exclusion_reason(d, m, break_points)
            if reason is None:
                candidates.append(OvershadowCandidate(d, m, CandidateStatus.NEEDS_REVIEW))
            else:
                candidates.append(OvershadowCandidate(d, m, CandidateStatus.EXCLUDED, reason))
        d += 1
    candidates.sort(key=lambda candidate: (-candidate.d, -candidate.m))
    return candidates


def candidate_pairs(candidates: Sequence[OvershadowCandidate]) -> Dict[Tuple[int, int], CandidateStatus]:
    return {(candidate.d, candidate.m): candidate.status for candidate in candidates}

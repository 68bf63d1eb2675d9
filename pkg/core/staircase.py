"""
Staircase families, their limits, blocking intervals and symmetries.

Every family (U, L or E; lower or upper direction; index n) has centers

    [head_n, {2n+5, 2n+1}^k, end_n],   end_n = 2n+4 or (2n+5, 2n+2),

and a homogeneous relation (2n+3) d = R_p p + R_q q. The classes follow from
the center and the relation alone, and consecutive terms then satisfy
x_{k+1} = (sigma_n + 2) x_k - x_{k-1} with sigma_n = (2n+1)(2n+5).
"""

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple, Union

import mpmath
import sympy

from utils.logger import get_logger

from .accumulation import ONE_THIRD, Branch, acc_coefficient, branch_for_ratio
from .cfweights import cf_to_rational
from .classes import QuasiPerfectClass, center_blocking_test, make_quasi_perfect
from .errors import DivisibilityFailureError, DomainError, NotBlockingError
from .exactnum import ApproxReal, Surd, as_surd, exact_value

logger = get_logger()

NUMERIC_DPS = 60


class Family(str, Enum):
    U = "U"
    L = "L"
    E = "E"


class Direction(str, Enum):
    LOWER = "l"
    UPPER = "u"


class Ending(str, Enum):
    SHORT = "short"
    LONG = "long"


_DIRECTION_ALIASES = {"l": Direction.LOWER, "ell": Direction.LOWER, "ℓ": Direction.LOWER, "u": Direction.UPPER}


@dataclass(frozen=True)
class FamilyShape:
    """CF head, relation coefficients (of p and q) and the smallest admissible n."""

    head: Callable[[int], List[int]]
    relation: Callable[[int], Tuple[int, int]]
    first_n: int
    default_ratio: Fraction
    extends_backwards: bool = False


FAMILY_SHAPES: Dict[Tuple[Family, Direction], FamilyShape] = {
    (Family.L, Direction.LOWER): FamilyShape(
        lambda n: [6, 2 * n + 1], lambda n: (n + 1, -(n - 1)), 1, Fraction(7, 10)),
    (Family.L, Direction.UPPER): FamilyShape(
        lambda n: [6, 2 * n - 1, 2 * n + 1], lambda n: (-(n - 1), 11 * n + 2), 1, Fraction(3, 10),
        extends_backwards=True),
    (Family.U, Direction.LOWER): FamilyShape(
        lambda n: [], lambda n: (n + 1, n + 2), 1, Fraction(1)),
    (Family.U, Direction.UPPER): FamilyShape(
        lambda n: [2 * n + 7], lambda n: (n + 2, -(n + 4)), 0, Fraction(1, 2)),
    (Family.E, Direction.LOWER): FamilyShape(
        lambda n: [5, 1, 2 * n + 4, 2 * n + 1], lambda n: (n + 2, -(n + 4)), 1, Fraction(1, 2),
        extends_backwards=True),
    (Family.E, Direction.UPPER): FamilyShape(
        lambda n: [5, 1, 2 * n + 6], lambda n: (-(n + 4), 11 * n + 31), 0, Fraction(1, 3)),
}


@dataclass(frozen=True)
class StairFamilySpec:
    family: Family
    direction: Direction
    n: int
    ending: Ending = Ending.SHORT

    @classmethod
    def parse(cls, text: str) -> "StairFamilySpec":
        """Parse "U:u:0:short"; the ending defaults to short."""
        parts = [part.strip() for part in text.split(":")]
        if len(parts) not in (3, 4):
            raise ValueError(f"family spec must look like F:dir:n[:end], got {text!r}")
        direction = _DIRECTION_ALIASES.get(parts[1].lower())
        if direction is None:
            raise ValueError(f"unknown direction {parts[1]!r} (use l or u)")
        ending = Ending(parts[3].lower()) if len(parts) == 4 else Ending.SHORT
        return cls(Family(parts[0].upper()), direction, int(parts[2]), ending)

    @property
    def shape(self) -> FamilyShape:
        return FAMILY_SHAPES[(self.family, self.direction)]

    @property
    def sigma(self) -> int:
        return (2 * self.n + 1) * (2 * self.n + 5)

    @property
    def root_of_sigma_plus_4(self) -> int:
        return 2 * self.n + 3

    @property
    def default_ratio(self) -> Fraction:
        return self.shape.default_ratio

    def end_terms(self) -> List[int]:
        n = self.n
        return [2 * n + 4] if self.ending == Ending.SHORT else [2 * n + 5, 2 * n + 2]

    def center_terms(self, k: int) -> List[int]:
        n = self.n
        return self.shape.head(n) + [2 * n + 5, 2 * n + 1] * k + self.end_terms()

    def with_ending(self, ending: Ending) -> "StairFamilySpec":
        return StairFamilySpec(self.family, self.direction, self.n, ending)

    def __str__(self) -> str:
        return f"{self.family.value}:{self.direction.value}:{self.n}:{self.ending.value}"


@dataclass(frozen=True)
class StairStep:
    """One row (k, d, m, p, q); numeric_only rows carry no geometric class."""

    k: int
    d: int
    m: int
    p: int
    q: int
    numeric_only: bool = False

    @property
    def klass(self) -> QuasiPerfectClass:
        return make_quasi_perfect(self.d, self.m, self.p, self.q)

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return self.d, self.m, self.p, self.q


def _check_range(spec: StairFamilySpec, allow_fibonacci: bool = False) -> None:
    first = spec.shape.first_n
    if allow_fibonacci and spec.family == Family.L and spec.direction == Direction.LOWER:
        first = 0
    if spec.n < first:
        raise DomainError(f"{spec.family.value}/{spec.direction.value} needs n >= {first}, got {spec.n}")


def _class_at_center(spec: StairFamilySpec, k: int) -> StairStep:
    center = cf_to_rational(spec.center_terms(k))
    p, q = center.numerator, center.denominator
    coefficient_p, coefficient_q = spec.shape.relation(spec.n)
    weighted = coefficient_p * p + coefficient_q * q
    if weighted % spec.root_of_sigma_plus_4:
        raise DivisibilityFailureError(
            f"{spec} at k = {k}: {weighted} is not divisible by {spec.root_of_sigma_plus_4}"
        )
    d = weighted // spec.root_of_sigma_plus_4
    return StairStep(k, d, 3 * d - p - q, p, q)


def _generate(spec: StairFamilySpec, k_max: int) -> List[QuasiPerfectClass]:
    if k_max < 0:
        raise DomainError(f"k_max must be nonnegative, got {k_max}")
    classes = [_class_at_center(spec, k).klass for k in range(k_max + 1)]
    logger.debug(f"generated {len(classes)} classes of {spec}")
    return classes


def prestaircase_generate(spec: StairFamilySpec, k_max: int) -> List[QuasiPerfectClass]:
    """
    Classes k = 0..k_max of the family.

    Raises:
        DivisibilityFailureError: if (2n+3) does not divide the relation
        NotDiophantineError: if a generated tuple breaks the class identities
    """
    _check_range(spec)
    return _generate(spec, k_max)


def prestaircase_steps(spec: StairFamilySpec, k_max: int) -> List[StairStep]:
    _check_range(spec, allow_fibonacci=True)
    return [_class_at_center(spec, k) for k in range(k_max + 1)]


def _is_geometric(d: int, m: int, p: int, q: int) -> bool:
    if q <= 0 or p <= q or math.gcd(p, q) != 1:
        return False
    return d * d - m * m == p * q - 1 and 3 * d == m + p + q


def prestaircase_extension(spec: StairFamilySpec) -> Optional[StairStep]:
    """
    The k = -1 row x_{-1} = (sigma+2) x_0 - x_1, for the families that admit it.

    The row is marked numeric_only unless it is itself a quasi-perfect tuple.
    """
    if not spec.shape.extends_backwards:
        return None
    if spec.family == Family.L and spec.ending != Ending.SHORT:
        return None
    _check_range(spec)
    first, second = _class_at_center(spec, 0), _class_at_center(spec, 1)
    factor = spec.sigma + 2
    d, m, p, q = (factor * a - b for a, b in zip(first.as_tuple(), second.as_tuple()))
    return StairStep(-1, d, m, p, q, numeric_only=not _is_geometric(d, m, p, q))


def fibonacci_staircase(k_max: int) -> List[QuasiPerfectClass]:
    """
    The Fibonacci stairs at b = 0, with the numerics of family (L, lower, n = 0).

    No blocking class exists for this family; the class (3,0;2,1^6) with
    break point 7 plays that role.
    """
    return _generate(StairFamilySpec(Family.L, Direction.LOWER, 0), k_max)


# ---------------------------------------------------------------------------
# Limits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PrestairLimits:
    """x_k = X lambda^k + conj(X) conj(lambda)^k for x in (d, m, p, q)."""

    lam: Surd
    D: Surd
    M: Surd
    P: Surd
    Q: Surd
    acc_verified: bool

    @property
    def b_inf(self) -> Surd:
        return self.M / self.D

    @property
    def a_inf(self) -> Surd:
        return self.P / self.Q

    def term(self, constant: Surd, k: int) -> Union[Fraction, Surd]:
        """X lambda^k + conj(X) conj(lambda)^k, an integer for the family sequences."""
        lam_power = self.lam ** k if k >= 0 else self.lam.conjugate() ** (-k)
        conj_power = self.lam.conjugate() ** k if k >= 0 else self.lam ** (-k)
        return exact_value(constant * lam_power + constant.conjugate() * conj_power)


def growth_rate(spec: StairFamilySpec) -> Surd:
    """lambda = (sigma + 2 + (2n+3) sqrt(sigma)) / 2."""
    return Surd(Fraction(spec.sigma + 2, 2), Fraction(spec.root_of_sigma_plus_4, 2), spec.sigma)


def _limit_constant(spec: StairFamilySpec, x0: int, x1: int) -> Surd:
    sigma = spec.sigma
    rational = Fraction(x0, 2)
    radical = Fraction(2 * x1 - x0 * (sigma + 2), 2 * spec.root_of_sigma_plus_4 * sigma)
    return Surd(rational, radical, sigma)


def is_accumulation_pair(b, z) -> bool:
    """z^2 - c(b) z + 1 = 0 with z > 1, i.e. z = acc(b)."""
    b, z = as_surd(b), as_surd(z)
    if z <= 1:
        return False
    return (z * z - acc_coefficient(b) * z + 1).sign() == 0


def prestaircase_limits(spec: StairFamilySpec) -> PrestairLimits:
    _check_range(spec, allow_fibonacci=True)
    first, second = _class_at_center(spec, 0), _class_at_center(spec, 1)
    constants = [_limit_constant(spec, a, b) for a, b in zip(first.as_tuple(), second.as_tuple())]
    D, M, P, Q = constants
    verified = is_accumulation_pair(M / D, P / Q)
    if not verified:
        logger.warning(f"acc(M/D) != P/Q for {spec}")
    return PrestairLimits(growth_rate(spec), D, M, P, Q, verified)


# ---------------------------------------------------------------------------
# Liveness inequality
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DMinResult:
    passed: bool
    difference: int
    lhs: Fraction
    rhs: Surd
    monotonicity: str
    case: str


def dmin1_check(spec: StairFamilySpec, r: Optional[int] = None, s: Optional[int] = None) -> DMinResult:
    """
    |m1 d0 - m0 d1| / (2n+3) <= sqrt(sigma) (sD - rM) / |sM - rD|.

    r/s defaults to the family's standard choice; the difference is the same
    for any pair of consecutive rows.
    """
    if r is None or s is None:
        ratio = spec.default_ratio
        r, s = ratio.numerator, ratio.denominator
    limits = prestaircase_limits(spec)
    first, second = _class_at_center(spec, 0), _class_at_center(spec, 1)
    difference = second.m * first.d - first.m * second.d
    lhs = Fraction(abs(difference), spec.root_of_sigma_plus_4)
    gap = abs(s * limits.M - r * limits.D)
    if gap.sign() == 0:
        raise DomainError(f"sM - rD vanishes for {spec} at r/s = {r}/{s}")
    rhs = Surd(0, 1, spec.sigma) * (s * limits.D - r * limits.M) / gap
    passed = as_surd(lhs) <= rhs
    monotonicity = "increasing" if difference > 0 else "decreasing"
    case = "ii" if limits.b_inf < Fraction(r, s) else "iii"
    return DMinResult(passed, difference, lhs, rhs, monotonicity, case)


def staircase_one_third(i: int, k_max: int) -> List[QuasiPerfectClass]:
    """
    The three interwoven sequences of the staircase at b = 1/3.

    Centers are g_k/g_{k-1} with g_{k+1} = 6 g_k - g_{k-1}; 3d - m = g_k + g_{k-1}
    and d - 3m is -(-1)^k, (-1)^k or -2(-1)^k for i = 0, 1, 2.
    """
    seeds = {0: (1, 2), 1: (1, 4), 2: (1, 5)}
    if i not in seeds:
        raise DomainError(f"sequence index must be 0, 1 or 2, got {i}")
    if k_max < 1:
        raise DomainError(f"k_max must be at least 1, got {k_max}")
    previous, current = seeds[i]
    classes = []
    for k in range(1, k_max + 1):
        sign = -1 if k % 2 else 1
        offset = {0: -sign, 1: sign, 2: -2 * sign}[i]
        total = current + previous
        # d = 3m + offset and 3d - m = total
        if (total - 3 * offset) % 8:
            raise DivisibilityFailureError(f"no integer class at b = 1/3, i = {i}, k = {k}")
        m = (total - 3 * offset) // 8
        classes.append(make_quasi_perfect(3 * m + offset, m, current, previous))
        previous, current = current, 6 * current - previous
    return classes


# ---------------------------------------------------------------------------
# Blocking classes and intervals
# ---------------------------------------------------------------------------

def blocking_class(family: Union[Family, str], n: int) -> QuasiPerfectClass:
    """B^U_n = (n+3, n+2; w(2n+6)), B^L_n = (5n, n-1; 2n w((12n+1)/2n)), B^E_n = (5(n+3), n+4; (2n+6) w((12n+35)/(2n+6)))."""
    family = Family(family)
    if family == Family.U:
        if n < 0:
            raise DomainError(f"B^U_n needs n >= 0, got {n}")
        return make_quasi_perfect(n + 3, n + 2, 2 * n + 6, 1)
    if family == Family.L:
        if n < 1:
            raise DomainError(f"B^L_n needs n >= 1, got {n}")
        return make_quasi_perfect(5 * n, n - 1, 12 * n + 1, 2 * n)
    if n < 0:
        raise DomainError(f"B^E_n needs n >= 0, got {n}")
    return make_quasi_perfect(5 * (n + 3), n + 4, 12 * n + 35, 2 * n + 6)


Endpoint = Union[Surd, ApproxReal]


@dataclass(frozen=True)
class BlockingInterval:
    """J = (b_low, b_high) and I = acc(J) = (z_low, z_high)."""

    b_low: Endpoint
    b_high: Endpoint
    z_low: Endpoint
    z_high: Endpoint
    exact: bool


def _fraction_of(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def _factor_roots(factor: sympy.Poly) -> List[Endpoint]:
    coefficients = [_fraction_of(c) for c in factor.all_coeffs()]
    if factor.degree() == 1:
        return [as_surd(-coefficients[1] / coefficients[0])]
    if factor.degree() == 2:
        a, b, c = coefficients
        discriminant = b * b - 4 * a * c
        if discriminant < 0:
            return []
        return [Surd(-b / (2 * a), sign / (2 * a), discriminant) for sign in (1, -1)]
    roots = []
    for root in factor.real_roots():
        value = mpmath.mpf(str(sympy.N(root, NUMERIC_DPS)))
        roots.append(ApproxReal(value, mpmath.mpf(10) ** (-(NUMERIC_DPS - 5))))
    return roots


def _numeric(value: Endpoint):
    with mpmath.workdps(NUMERIC_DPS):
        return value.value if isinstance(value, ApproxReal) else value.to_mpf(256)


def _endpoint_b(numerator: Tuple[int, int], denominator: Tuple[int, int], z: Endpoint) -> Optional[Endpoint]:
    """b = (n0 + n1 z)/(e0 + e1 z)."""
    if isinstance(z, ApproxReal):
        with mpmath.workdps(NUMERIC_DPS):
            lower = denominator[0] + denominator[1] * z.value
            if lower == 0:
                return None
            value = (numerator[0] + numerator[1] * z.value) / lower
            return ApproxReal(+value, z.error_bound * 1000)
    lower = denominator[0] + denominator[1] * z
    if lower.sign() == 0:
        return None
    return (numerator[0] + numerator[1] * z) / lower


def _on_branch(b: Endpoint, branch: Branch) -> bool:
    if isinstance(b, ApproxReal):
        with mpmath.workdps(NUMERIC_DPS):
            inside = 0 <= b.value < 1
            return inside and ((b.value < mpmath.mpf(1) / 3) == (branch == Branch.L))
    if b < 0 or b >= 1:
        return False
    return (b < ONE_THIRD) == (branch == Branch.L)


def _solve_endpoint(c: QuasiPerfectClass, upper: bool, branch: Branch) -> Tuple[Endpoint, Endpoint]:
    """
    Root nearest the center, on the requested side, of
    (1+z)^2 (den^2 - num^2) - z (3 den - num)^2 where b = num/den is the
    endpoint relation and z = acc(b).
    """
    d, m, p, q = c.d, c.m, c.p, c.q
    if upper:
        numerator, denominator = (d - 3 * p, d), (m - p, m)
    else:
        numerator, denominator = (d, d - 3 * q), (m, m - q)
    z = sympy.Symbol("z")
    num = numerator[0] + numerator[1] * z
    den = denominator[0] + denominator[1] * z
    polynomial = sympy.Poly(sympy.expand((1 + z) ** 2 * (den ** 2 - num ** 2) - z * (3 * den - num) ** 2), z)
    center = mpmath.mpf(c.center.numerator) / c.center.denominator
    best = None
    for factor, _ in polynomial.factor_list()[1]:
        for root in _factor_roots(factor):
            value = _numeric(root)
            if value <= 1 or (value > center) != upper or value == center:
                continue
            b = _endpoint_b(numerator, denominator, root)
            if b is None or not _on_branch(b, branch):
                continue
            distance = abs(value - center)
            if best is None or distance < best[0]:
                best = (distance, root, b)
    if best is None:
        side = "upper" if upper else "lower"
        raise NotBlockingError(f"no {side} endpoint found for {c}")
    _, root, b = best
    logger.debug(f"{'upper' if upper else 'lower'} endpoint of {c}: z = {root}, b = {b}")
    return _collapse(root), _collapse(b)


def _collapse(value: Endpoint) -> Endpoint:
    return value if isinstance(value, ApproxReal) else as_surd(value)


def _b_order(first: Endpoint, second: Endpoint) -> Tuple[Endpoint, Endpoint]:
    return (first, second) if _numeric(first) <= _numeric(second) else (second, first)


def blocking_interval_generic(c: QuasiPerfectClass) -> BlockingInterval:
    """
    Endpoints of I_B and J_B for a center-blocking class.

    Raises:
        NotBlockingError: if the class does not block at its center
    """
    if not center_blocking_test(c):
        raise NotBlockingError(f"{c} is not center-blocking")
    branch = branch_for_ratio(c.ratio)
    z_low, b_at_low = _solve_endpoint(c, upper=False, branch=branch)
    z_high, b_at_high = _solve_endpoint(c, upper=True, branch=branch)
    b_low, b_high = _b_order(b_at_low, b_at_high)
    exact = not any(isinstance(value, ApproxReal) for value in (z_low, z_high, b_low, b_high))
    return BlockingInterval(b_low, b_high, z_low, z_high, exact)


def blocking_family_closed_form(family: Union[Family, str], n: int) -> BlockingInterval:
    """The explicit J and I intervals of B^U_n."""
    if Family(family) != Family.U:
        raise DomainError("closed-form blocking intervals exist only for family U")
    if n < 0:
        raise DomainError(f"n must be nonnegative, got {n}")
    sigma = (2 * n + 1) * (2 * n + 5)
    root = Surd(0, 1, sigma)
    b_low = (2 * n * n + 6 * n + 3 - root) / (2 * n * n + 6 * n + 2)
    b_high = (n + 3) * (3 * n + 7 + root) / (5 * n * n + 30 * n + 44)
    spread = sigma + (2 * n + 3) * root
    z_low = spread / (2 * (2 * n + 1))
    z_high = 6 + spread / (2 * (2 * n + 5))
    return BlockingInterval(b_low, b_high, z_low, z_high, True)


def blocking_interval(family: Union[Family, str], n: int) -> BlockingInterval:
    family = Family(family)
    if family == Family.U:
        return blocking_family_closed_form(family, n)
    return blocking_interval_generic(blocking_class(family, n))


# ---------------------------------------------------------------------------
# Symmetries
# ---------------------------------------------------------------------------

class SymmetryMap(str, Enum):
    PSI = "Psi"
    PHI = "Phi"
    SH = "Sh"


# (a, b, c, d) for w -> (a w + b)/(c w + d) and the open lower bound of the domain
_SYMMETRIES = {
    SymmetryMap.PSI: ((6, -35, 1, -6), Fraction(6)),
    SymmetryMap.PHI: ((35, -204, 6, -35), Fraction(35, 6)),
    SymmetryMap.SH: ((6, -1, 1, 0), Fraction(1)),
}


def symmetry_apply(name: Union[SymmetryMap, str], z) -> Union[Fraction, Surd]:
    """Psi: w -> (6w-35)/(w-6), Phi: w -> (35w-204)/(6w-35), Sh: z -> (6z-1)/z."""
    name = SymmetryMap(name)
    (a, b, c, d), bound = _SYMMETRIES[name]
    z = as_surd(z)
    if z <= bound:
        raise DomainError(f"{name.value} is defined for z > {bound}, got {z}")
    return exact_value((a * z + b) / (c * z + d))


def symmetry_apply_class(name: Union[SymmetryMap, str], c: QuasiPerfectClass) -> Union[Fraction, Surd]:
    """Image of the center of c; the class itself is not transported."""
    return symmetry_apply(name, c.center)


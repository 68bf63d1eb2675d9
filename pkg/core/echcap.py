"""
ECH capacities of ellipsoids and of the Hirzebruch domains X_b.

The capacities of X_b come from convex lattice paths (0,y) -> (x,y) -> (x+y,0):
such a path encloses L(x,y) = (x+1)(y+1) + y(y+1)/2 lattice points and has
Omega-length x(1-b) + y, and

    c_k(X_b) = min{ x(1-b) + y : k+1 <= L(x,y) <= 2k+1 }.

For b = u/v every action is an integer multiple of 1/v, so the minimization
runs over integers and the rational scale is applied once at the end.
"""

import math
from bisect import bisect_right
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

from utils.logger import get_logger
from utils.parallel import parallel_map

from .accumulation import acc
from .errors import DomainError, InsufficientPathTableError, TableTooShortError
from .exactnum import ApproxReal, Ordering, Surd, as_surd, exact_value, sqrt_cmp

logger = get_logger()

Number = Union[int, Fraction, Surd]

# rows of y handled by one worker task
_ROWS_PER_TASK = 16


def lattice_count(x: int, y: int) -> int:
    return (x + 1) * (y + 1) + y * (y + 1) // 2


@dataclass(frozen=True)
class PathVertex:
    """Corner (x, y) of the path (0,y) -> (x,y) -> (x+y,0)."""

    x: int
    y: int

    @property
    def lattice_count(self) -> int:
        return lattice_count(self.x, self.y)

    def action(self, b) -> Union[Fraction, Surd]:
        return exact_value(self.x * (1 - as_surd(b)) + self.y)


@dataclass(frozen=True)
class PathTable:
    """
    All path corners with lattice count at most max_count.

    For each height y the admissible x form the range 0..x_max[y], so the
    table keeps only those bounds.
    """

    max_count: int
    x_max: Tuple[int, ...]

    @property
    def heights(self) -> int:
        return len(self.x_max)

    def vertices(self, count: int) -> List[PathVertex]:
        """Every corner whose path encloses exactly count lattice points."""
        if count < 1 or count > self.max_count:
            return []
        found = []
        for y, top in enumerate(self.x_max):
            rest = count - y * (y + 1) // 2
            if rest % (y + 1) == 0:
                x = rest // (y + 1) - 1
                if 0 <= x <= top:
                    found.append(PathVertex(x, y))
        return found

    def as_mapping(self) -> Dict[int, List[PathVertex]]:
        mapping: Dict[int, List[PathVertex]] = {count: [] for count in range(1, self.max_count + 1)}
        for y, top in enumerate(self.x_max):
            for x in range(top + 1):
                mapping[lattice_count(x, y)].append(PathVertex(x, y))
        return mapping

    def __len__(self) -> int:
        return sum(top + 1 for top in self.x_max)


@lru_cache(maxsize=8)
def path_table(max_count: int) -> PathTable:
    """Corners for every lattice count 1..max_count."""
    if max_count < 1:
        raise DomainError(f"max_count must be at least 1, got {max_count}")
    bounds = []
    y = 0
    while (y + 1) * (y + 2) // 2 <= max_count:
        bounds.append((max_count - y * (y + 1) // 2) // (y + 1) - 1)
        y += 1
    table = PathTable(max_count, tuple(bounds))
    logger.debug(f"path table up to L = {max_count}: {table.heights} heights, {len(table)} corners")
    return table


def _row_minima(task: Tuple[int, int, int, int, int]) -> List[int]:
    """Per-count minimal integer action x*(v-u) + y*v over rows y_start..y_end-1 (-1 = none)."""
    y_start, y_end, max_count, slope, height_step = task
    best = [-1] * (max_count + 1)
    for y in range(y_start, y_end):
        count = (y + 1) + y * (y + 1) // 2
        action = y * height_step
        while count <= max_count:
            current = best[count]
            if current < 0 or action < current:
                best[count] = action
            count += y + 1
            action += slope
    return best


@lru_cache(maxsize=16)
def _per_count_minima(max_count: int, u: int, v: int) -> Tuple[int, ...]:
    heights = path_table(max_count).heights
    tasks = [
        (start, min(start + _ROWS_PER_TASK, heights), max_count, v - u, v)
        for start in range(0, heights, _ROWS_PER_TASK)
    ]
    merged = [-1] * (max_count + 1)
    for partial in parallel_map(_row_minima, tasks):
        for count, action in enumerate(partial):
            if action >= 0 and (merged[count] < 0 or action < merged[count]):
                merged[count] = action
    return tuple(merged)


@dataclass(frozen=True)
class CapacityTable:
    """c_0..c_K of the scaled domain scale * X_b."""

    b: Fraction
    scale: Fraction
    caps: Tuple[Fraction, ...] = field(default_factory=tuple)

    @property
    def count(self) -> int:
        return len(self.caps) - 1

    def __len__(self) -> int:
        return len(self.caps)

    def __getitem__(self, k: int) -> Fraction:
        return self.caps[k]

    def unscaled(self, k: int) -> Fraction:
        """c_k(X_b)."""
        return self.caps[k] / self.scale


def _check_b(b) -> Fraction:
    b = Fraction(b)
    if b < 0 or b >= 1:
        raise DomainError(f"b must lie in [0, 1), got {b}")
    return b


def _check_scale(scale) -> Fraction:
    scale = Fraction(scale)
    if scale <= 0:
        raise DomainError(f"scale must be positive, got {scale}")
    return scale


def toric_caps(b, scale, K: int, table: Optional[PathTable] = None) -> CapacityTable:
    """
    The first K+1 capacities of scale * X_b.

    Per-count minima are cached per (table size, b); a monotone deque then
    slides the window [k+1, 2k+1] across them.

    Raises:
        InsufficientPathTableError: if the table stops before 2K+1
    """
    b, scale = _check_b(b), _check_scale(scale)
    if K < 0:
        raise DomainError(f"K must be nonnegative, got {K}")
    needed = 2 * K + 1
    if table is None:
        table = path_table(needed)
    elif table.max_count < needed:
        raise InsufficientPathTableError(
            f"path table covers L <= {table.max_count}, capacities up to k = {K} need {needed}"
        )

    minima = _per_count_minima(table.max_count, b.numerator, b.denominator)
    window: deque = deque()
    pushed = 0
    integer_caps = []
    for k in range(K + 1):
        while pushed < 2 * k + 1:
            pushed += 1
            while window and minima[window[-1]] >= minima[pushed]:
                window.pop()
            window.append(pushed)
        while window[0] < k + 1:
            window.popleft()
        integer_caps.append(minima[window[0]])

    unit = scale / b.denominator
    logger.debug(f"toric capacities for {scale}*X_{b}: K = {K}")
    return CapacityTable(b, scale, tuple(unit * value for value in integer_caps))


def single_toric_capacity(b, scale, k: int) -> Fraction:
    """c_k(scale * X_b) from the cheapest admissible corner in each row."""
    b, scale = _check_b(b), _check_scale(scale)
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k}")
    u, v = b.numerator, b.denominator
    best = None
    y = 0
    while (y + 1) * (y + 2) // 2 <= 2 * k + 1:
        triangle = y * (y + 1) // 2
        x = max(0, -(-(k + 1 - triangle) // (y + 1)) - 1)
        if lattice_count(x, y) <= 2 * k + 1:
            action = x * (v - u) + y * v
            if best is None or action < best:
                best = action
        y += 1
    return scale * Fraction(best, v)


# ---------------------------------------------------------------------------
# Ellipsoids and balls
# ---------------------------------------------------------------------------

def _integer_ellipsoid_values(a: Fraction, b: Fraction, K: int) -> List[Fraction]:
    common = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
    step_a, step_b = int(a * common), int(b * common)
    threshold = max(step_a, step_b)
    while True:
        values = [
            step_a * m + step_b * n
            for n in range(threshold // step_b + 1)
            for m in range((threshold - step_b * n) // step_a + 1)
        ]
        if len(values) >= K + 1:
            break
        threshold *= 2
    values.sort()
    return [Fraction(value, common) for value in values[:K + 1]]


def _surd_ellipsoid_values(a: Surd, b: Surd, K: int) -> List[Surd]:
    threshold = max(a, b)
    while True:
        values = []
        for n in range(math.floor(threshold / b) + 1):
            rest = threshold - b * n
            values.extend(a * m + b * n for m in range(math.floor(rest / a) + 1))
        if len(values) >= K + 1:
            break
        threshold = threshold * 2
    values.sort()
    return values[:K + 1]


def ellipsoid_caps(a: Number, b: Number, K: int) -> List[Union[Fraction, Surd]]:
    """
    N(a, b)_0..N(a, b)_K: the sorted multiset {a*m + b*n : m, n >= 0}.

    The enumeration threshold doubles until at least K+1 values lie below it.
    """
    a, b = as_surd(a), as_surd(b)
    if a <= 0 or b <= 0:
        raise DomainError(f"ellipsoid parameters must be positive, got {a} and {b}")
    if K < 0:
        raise DomainError(f"K must be nonnegative, got {K}")
    if a.is_rational and b.is_rational:
        return list(_integer_ellipsoid_values(a.as_fraction(), b.as_fraction(), K))
    return [exact_value(value) for value in _surd_ellipsoid_values(a, b, K)]


def ellipsoid_capacity(a: Number, b: Number, k: int) -> Union[Fraction, Surd]:
    return ellipsoid_caps(a, b, k)[k]


def ball_degree(j: int) -> int:
    """The d with d(d+1)/2 <= j < (d+1)(d+2)/2."""
    return (math.isqrt(8 * j + 1) - 1) // 2


def ball_caps(scale, K: int) -> List[Fraction]:
    """N(scale, scale)_0..K, the capacities of the ball of size scale."""
    scale = _check_scale(scale)
    return [scale * ball_degree(j) for j in range(K + 1)]


def subtraction_caps(scale, b, K: int) -> List[Fraction]:
    """
    (N(scale) - N(scale*b))_k = min over l of N(scale)_{k+l} - N(scale*b)_l.

    Within a run of equal ball degrees for l the first index is the cheapest,
    and a term at degree j costs at least scale*(1-b)*j, which bounds the search.
    """
    scale, b = _check_scale(scale), _check_b(b)
    small = scale * b
    caps = []
    for k in range(K + 1):
        best = scale * ball_degree(k)
        j = 1
        while scale * (1 - b) * j <= best:
            value = scale * ball_degree(k + j * (j + 1) // 2) - small * j
            if value < best:
                best = value
            j += 1
        caps.append(best)
    return caps


# ---------------------------------------------------------------------------
# The lower bound for the embedding function
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LowerBound:
    """max_k N(1,z)_k / c_k(X_b) together with every maximizing k."""

    value: Union[Fraction, Surd]
    indices: Tuple[int, ...]


def _usable_table(b, table: CapacityTable, K: int) -> Fraction:
    b = _check_b(b)
    if table.b != b:
        raise DomainError(f"capacity table was built for b = {table.b}, not {b}")
    if table.count < K:
        raise TableTooShortError(f"capacity table holds k <= {table.count}, need K = {K}")
    return b


def capacity_ratios(z: Number, table: CapacityTable, K: int) -> List[Union[Fraction, Surd]]:
    """N(1,z)_k / c_k(X_b) for k = 1..K (entry k-1)."""
    ellipsoid = ellipsoid_caps(1, z, K)
    return [exact_value(as_surd(ellipsoid[k]) / table.unscaled(k)) for k in range(1, K + 1)]


def c_lower(b, z: Number, table: CapacityTable, K: int) -> LowerBound:
    """The truncated capacity lower bound sup_{1<=k<=K} c_k(E(1,z))/c_k(X_b)."""
    _usable_table(b, table, K)
    if as_surd(z) < 1:
        raise DomainError(f"z must be at least 1, got {z}")
    ratios = capacity_ratios(z, table, K)
    best = max(ratios)
    indices = tuple(k for k, ratio in enumerate(ratios, start=1) if ratio == best)
    return LowerBound(best, indices)


def min_obstructing_index(b, table: CapacityTable, K: int) -> Optional[int]:
    """
    Smallest k <= K whose capacity ratio at z = acc(b) beats the volume bound.

    At the accumulation point V_b(z)^2 = z/(1-b^2) and every ratio is compared
    with its square root exactly.
    """
    b = _usable_table(b, table, K)
    point = acc(b)
    if isinstance(point, ApproxReal):
        raise DomainError(f"acc({b}) has no exact form")
    volume_squared = point / (1 - b * b)
    for k, ratio in enumerate(capacity_ratios(point, table, K), start=1):
        if sqrt_cmp(ratio, volume_squared) == Ordering.GREATER:
            logger.debug(f"c_{k} obstructs a staircase at b = {b}")
            return k
    return None


# ---------------------------------------------------------------------------
# Counting functions
# ---------------------------------------------------------------------------

def cap_count(table: CapacityTable, t) -> int:
    """#{k >= 0 : c_k <= t}; the table must reach past t."""
    t = Fraction(t)
    if not table.caps or table.caps[-1] <= t:
        raise TableTooShortError(f"last capacity {table.caps[-1] if table.caps else None} does not exceed t = {t}")
    return bisect_right(table.caps, t)


def ehrhart_count(u, v, t) -> int:
    """#{(x, y) in Z^2, x, y >= 0 : x/u + y/v <= t}."""
    u, v, t = Fraction(u), Fraction(v), Fraction(t)
    if u <= 0 or v <= 0 or t < 0:
        raise DomainError(f"ehrhart_count needs u, v > 0 and t >= 0, got {u}, {v}, {t}")
    return sum(
        math.floor(u * (t - Fraction(y) / v)) + 1
        for y in range(math.floor(t * v) + 1)
    )


# Constant terms of the lattice count of t * Delta(1/2, 1/12), by t mod 12
_EHRHART_CONSTANTS = {
    0: Fraction(1), 8: Fraction(1), 4: Fraction(4, 3),
    1: Fraction(11, 16), 9: Fraction(11, 16), 5: Fraction(49, 48),
    2: Fraction(5, 4), 6: Fraction(5, 4), 10: Fraction(7, 12),
    3: Fraction(15, 16), 7: Fraction(15, 16), 11: Fraction(13, 48),
}

# Constant terms of cap_X(t) for X = 5 H_{1/5} and t > 42, by t mod 24
_CAP_CONSTANTS = {
    0: Fraction(1), 10: Fraction(1),
    1: Fraction(11, 16), 9: Fraction(11, 16),
    2: Fraction(-2, 3), 8: Fraction(-2, 3),
    3: Fraction(-17, 16), 7: Fraction(-17, 16),
    4: Fraction(1, 2), 6: Fraction(1, 2),
    5: Fraction(49, 48),
    11: Fraction(13, 48), 23: Fraction(13, 48),
    12: Fraction(-3, 2), 22: Fraction(-3, 2),
    13: Fraction(-5, 16), 21: Fraction(-5, 16),
    14: Fraction(5, 6), 20: Fraction(5, 6),
    15: Fraction(15, 16), 19: Fraction(15, 16),
    16: Fraction(0), 18: Fraction(0),
    17: Fraction(-95, 48),
}

# d~(t) - d(t) by t mod 24
DTILDE_OFFSETS = {residue: 0 for residue in (0, 1, 4, 5, 6, 9, 11, 14, 15, 19, 20, 23)}
DTILDE_OFFSETS.update({residue: 1 for residue in (2, 8, 13, 16, 18, 21)})
DTILDE_OFFSETS.update({residue: 2 for residue in (3, 7, 12, 22)})
DTILDE_OFFSETS.update({17: 3, 10: -1})

CAP_FORMULA_START = 43


def ehrhart_formula(t: int) -> Fraction:
    """Period-12 quasipolynomial for the lattice count of t * Delta(1/2, 1/12)."""
    linear = Fraction(t, 3) if t % 2 == 0 else Fraction(7 * t, 24)
    return Fraction(t * t, 48) + linear + _EHRHART_CONSTANTS[t % 12]


def cap_formula(t: int) -> Fraction:
    """Period-24 quasipolynomial for cap_X(t), X = 5 H_{1/5}, valid for t > 42."""
    if t < CAP_FORMULA_START:
        raise DomainError(f"the cap quasipolynomial holds for t > 42, got {t}")
    return Fraction(t * t, 48) + Fraction(7 * t, 24) + _CAP_CONSTANTS[t % 24]


def _triangle_edge(t: int, z: Fraction, y: int) -> Fraction:
    """x on the edge x + z*y = t(z+6)/24."""
    return Fraction(t) * (z + 6) / 24 - z * y


def count_U(t: int, z) -> int:
    """Lattice points between the two triangles at heights t/24 <= y <= t/12."""
    z = Fraction(z)
    total = 0
    for y in range(math.ceil(Fraction(t, 24)), t // 12 + 1):
        low = max(0, math.ceil(_triangle_edge(t, z, y)))
        high = math.floor(Fraction(t - 12 * y, 2))
        total += max(0, high - low + 1)
    return total


def count_D(t: int, z) -> int:
    """Lattice points between the two triangles at heights 0 <= y <= t/24."""
    z = Fraction(z)
    total = 0
    for y in range(t // 24 + 1):
        low = math.ceil(Fraction(t - 12 * y, 2))
        high = math.floor(_triangle_edge(t, z, y))
        total += max(0, high - low + 1)
    return total


def boundary_count_d(t: int) -> int:
    """Lattice points on 2x + 12y = t with 0 <= y < t/24."""
    return sum(1 for y in range(t // 24 + 1) if 24 * y < t and (t - 12 * y) % 2 == 0)


"""
Curve Sampling Service

Samples the capacity lower bound, the volume curve, the accumulation curve
and class obstructions on an exact rational z-grid and packages them as
CurveSeries for CSV and SVG output. All values are computed exactly;
format_decimal is the only lossy step.
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Union

import mpmath

from core.accumulation import GOLDEN_FOURTH, MIN_ACCUMULATION, Branch, acc_inv, branch_for_ratio
from core.classes import (
    AnyClass,
    find_dm_from_k,
    find_pq_from_dm,
    make_quasi_perfect,
    obstruction_value,
    volume_bound,
)
from core.echcap import CapacityTable, c_lower
from core.errors import DomainError, UsageError
from core.exactnum import VIEW_PRECISION_BITS, ApproxReal, Surd, as_surd, format_decimal
from ingest.models import CurvePoint, CurveSeries
from utils.logger import get_logger

LOWER_BOUND_LABEL = "c_lower"
VOLUME_LABEL = "volume"
ACC_CURVE_LABEL = "acc_curve"


class CurveService:
    """
    Service for sampling embedding-function curves.

    Every sampler takes the same z-grid so the series line up row by row
    when written to one CSV.
    """

    def __init__(self):
        """Initialize the curve service."""
        self.logger = get_logger()
        self.stats = {
            'series_built': 0,
            'points_sampled': 0,
        }

    def grid(self, z_min: Fraction, z_max: Fraction, step: Fraction) -> List[Fraction]:
        """z_min, z_min + step, ... up to and including z_max when it is hit exactly."""
        z_min, z_max, step = Fraction(z_min), Fraction(z_max), Fraction(step)
        if step <= 0:
            raise UsageError(f"--step must be positive, got {step}")
        if z_max < z_min:
            raise UsageError(f"--zmax {z_max} is below --zmin {z_min}")
        if z_min < 1:
            raise DomainError(f"z must be at least 1, got {z_min}")
        points = []
        z = z_min
        while z <= z_max:
            points.append(z)
            z += step
        return points

    def _series(self, label: str, zs: Sequence[Fraction], values: Sequence[Optional[str]]) -> CurveSeries:
        points = [CurvePoint(z=format_decimal(z), value=value) for z, value in zip(zs, values)]
        self.stats['series_built'] += 1
        self.stats['points_sampled'] += len(points)
        self.logger.debug(f"Built series {label!r} with {len(points)} points")
        return CurveSeries(label=label, points=points)

    # -----------------------
    # Samplers
    # -----------------------

    def lower_bound_series(self, table: CapacityTable, zs: Sequence[Fraction], K: Optional[int] = None,
                           label: str = LOWER_BOUND_LABEL) -> CurveSeries:
        """c_lower(z) = max over k <= K of c_k(E(1,z)) / c_k(X_b) from the table."""
        K = table.count if K is None else K
        self.logger.info(f"Sampling the lower bound for b = {table.b} at {len(zs)} points (K = {K})")
        values = [format_decimal(c_lower(table.b, z, table, K).value) for z in zs]
        return self._series(label, zs, values)

    def volume_series(self, b: Fraction, zs: Sequence[Fraction], label: str = VOLUME_LABEL) -> CurveSeries:
        """V_b(z) = sqrt(z/(1-b^2))."""
        values = []
        for z in zs:
            bound = volume_bound(b, z)
            exact = bound.exact()
            if exact is not None:
                values.append(format_decimal(exact))
            else:
                with mpmath.workprec(VIEW_PRECISION_BITS):
                    root = mpmath.sqrt(bound.squared.to_mpf())
                values.append(format_decimal(ApproxReal(root, mpmath.mpf(0))))
        return self._series(label, zs, values)

    def acc_curve_series(self, b: Fraction, zs: Sequence[Fraction], label: str = ACC_CURVE_LABEL) -> CurveSeries:
        """
        The curve z = acc(b'), value V_{b'}(acc(b')), on the branch that contains b.

        Grid points outside the branch's range of accumulation points are left empty.
        """
        branch = branch_for_ratio(b)
        values: List[Optional[str]] = []
        for z in zs:
            point = as_surd(z)
            if point < MIN_ACCUMULATION or (branch == Branch.L and point > GOLDEN_FOURTH):
                values.append(None)
                continue
            values.append(format_decimal(self._volume_at(acc_inv(point, branch), point)))
        return self._series(label, zs, values)

    @staticmethod
    def _volume_at(b_prime: Union[Surd, ApproxReal], z: Surd) -> Union[Surd, ApproxReal]:
        if isinstance(b_prime, ApproxReal):
            with mpmath.workprec(VIEW_PRECISION_BITS):
                value = (1 + z.to_mpf()) / (3 - b_prime.value)
            return ApproxReal(value, b_prime.error_bound * 10)
        return (1 + z) / (3 - b_prime)

    def obstruction_series(self, c: AnyClass, b: Fraction, zs: Sequence[Fraction],
                           label: Optional[str] = None) -> CurveSeries:
        """mu_{c,b}(z) at each grid point."""
        values = [format_decimal(obstruction_value(c, b, z).value) for z in zs]
        return self._series(label or f"mu {c}", zs, values)

    def classes_for_index(self, k: int) -> List[AnyClass]:
        """Quasi-perfect classes whose capacity index is k."""
        classes = []
        for d, m in find_dm_from_k(k):
            for p, q in find_pq_from_dm(d, m):
                classes.append(make_quasi_perfect(d, m, p, q))
        if not classes:
            raise DomainError(f"no quasi-perfect class has index k = {k}")
        self.logger.info(f"Index k = {k} carries {len(classes)} quasi-perfect classes")
        return classes

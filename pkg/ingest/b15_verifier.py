"""
Finite-range verification of the counting identities for X = 5 H_{1/5}.

For t up to t_max this recomputes cap_X(t) from the exact capacity table,
the lattice count of t * Delta(1/2, 1/12), and the lattice points U and D
between that triangle and its tilted neighbour, and compares them with the
closed quasipolynomials.
"""

from fractions import Fraction
from typing import List, Optional, Sequence

from core.echcap import (
    CAP_FORMULA_START,
    DTILDE_OFFSETS,
    CapacityTable,
    boundary_count_d,
    cap_count,
    cap_formula,
    count_D,
    count_U,
    ehrhart_count,
    ehrhart_formula,
    subtraction_caps,
    toric_caps,
)
from core.errors import DomainError
from core.exactnum import format_rational
from utils.logger import get_logger

from .models import B15Report

B = Fraction(1, 5)
SCALE = Fraction(5)
TRIANGLE = (Fraction(1, 2), Fraction(1, 12))
CALIBRATION_T = 48
DEFAULT_Z_SAMPLES = (Fraction(601, 100), Fraction(121, 20), Fraction(6049, 1000))
# beyond this t the slices between the triangles get wider than one lattice step for these z
UD_T_LIMIT = 300
SUBTRACTION_CHECK_K = 400


class B15Verifier:
    """Runs the finite-range checks and collects failures in a B15Report."""

    def __init__(self):
        """Initialize the verifier."""
        self.logger = get_logger()
        self.table: Optional[CapacityTable] = None
        self.offset = 0

    def capacity_table(self, t_max: int) -> CapacityTable:
        """Capacities of 5 H_{1/5} reaching past t_max."""
        K = t_max * t_max // 48 + 2 * t_max + 50
        while True:
            table = toric_caps(B, SCALE, K)
            if table.caps[-1] > t_max:
                return table
            K *= 2

    def verify(self, t_max: int, z_samples: Sequence[Fraction] = DEFAULT_Z_SAMPLES,
               ud_t_max: Optional[int] = None) -> B15Report:
        if t_max < CAP_FORMULA_START:
            raise DomainError(f"t_max must be at least {CAP_FORMULA_START}, got {t_max}")
        z_samples = [Fraction(z) for z in z_samples]
        for z in z_samples:
            if z <= 6:
                raise DomainError(f"z samples must exceed 6, got {z}")
        ud_t_max = min(t_max, UD_T_LIMIT) if ud_t_max is None else ud_t_max

        report = B15Report(t_max=t_max, z_samples=[format_rational(z) for z in z_samples])
        self.logger.info(f"Verifying the counting identities for 5H_(1/5) up to t = {t_max}")
        self.table = self.capacity_table(t_max)
        self.logger.info(f"Capacity table holds k <= {self.table.count}")

        self._calibrate(report)
        self._check_cap_formula(report, t_max)
        self._check_ehrhart_formula(report, t_max)
        self._check_claim_ud(report, z_samples, ud_t_max)
        self._check_dtilde(report, t_max)
        self._check_small_t(report)
        self._check_subtraction(report)

        report.passed = report.convention != "uncalibrated" and not any((
            report.cap_mismatches, report.ehrhart_mismatches, report.claim_ud_failures,
            report.dtilde_failures, report.small_t_failures, report.subtraction_mismatches,
        ))
        report.stats = {
            'capacities': self.table.count + 1,
            'ud_t_max': ud_t_max,
            'failures': sum(len(items) for items in (
                report.cap_mismatches, report.ehrhart_mismatches, report.claim_ud_failures,
                report.dtilde_failures, report.small_t_failures, report.subtraction_mismatches,
            )),
        }
        status = "✓ passed" if report.passed else "✗ failed"
        self.logger.info(f"Verification {status} ({report.stats['failures']} failures)")
        return report

    def _calibrate(self, report: B15Report) -> None:
        """Fix the index origin of cap_count against the closed form at t = 48."""
        direct = cap_count(self.table, CALIBRATION_T)
        expected = cap_formula(CALIBRATION_T)
        report.calibration_count = direct
        if direct == expected:
            report.convention, self.offset = "k>=0", 0
        elif direct - 1 == expected:
            report.convention, self.offset = "k>=1", 1
        else:
            self.logger.error(f"cap count {direct} at t = 48 fits no index origin (formula {expected})")
        self.logger.info(f"Index convention: {report.convention}")

    def calibrated_count(self, t: int) -> int:
        return cap_count(self.table, t) - self.offset

    def _check_cap_formula(self, report: B15Report, t_max: int) -> None:
        for t in range(CAP_FORMULA_START, t_max + 1):
            if self.calibrated_count(t) != cap_formula(t):
                report.cap_mismatches.append(t)
        self.logger.debug(f"cap formula mismatches: {report.cap_mismatches}")

    def _check_ehrhart_formula(self, report: B15Report, t_max: int) -> None:
        for t in range(t_max + 1):
            if ehrhart_count(*TRIANGLE, t) != ehrhart_formula(t):
                report.ehrhart_mismatches.append(t)
        self.logger.debug(f"Ehrhart formula mismatches: {report.ehrhart_mismatches}")

    def _check_claim_ud(self, report: B15Report, z_samples: List[Fraction], ud_t_max: int) -> None:
        for z in z_samples:
            for t in range(ud_t_max + 1):
                upper, lower = count_U(t, z), count_D(t, z)
                bound = lower - 1 if t % 24 == 10 else lower
                if upper > bound:
                    report.claim_ud_failures.append(f"z={format_rational(z)} t={t}: U={upper} D={lower}")
        self.logger.debug(f"U <= D failures: {len(report.claim_ud_failures)}")

    def dtilde(self, t: int) -> int:
        """ehr(t) - cap(t), both counted directly."""
        return ehrhart_count(*TRIANGLE, t) - self.calibrated_count(t)

    def _check_dtilde(self, report: B15Report, t_max: int) -> None:
        for t in range(CAP_FORMULA_START, t_max + 1):
            expected = boundary_count_d(t) + DTILDE_OFFSETS[t % 24]
            actual = self.dtilde(t)
            if actual != expected:
                report.dtilde_failures.append(f"t={t}: d~={actual}, expected {expected}")

    def _check_small_t(self, report: B15Report) -> None:
        """d~ >= d for t <= 42, except d~ = d - 1 when t = 10 mod 24."""
        for t in range(CAP_FORMULA_START):
            actual, d = self.dtilde(t), boundary_count_d(t)
            if actual >= d or (t % 24 == 10 and actual == d - 1):
                continue
            report.small_t_failures.append(f"t={t}: d~={actual}, d={d}")

    def _check_subtraction(self, report: B15Report) -> None:
        K = min(self.table.count, SUBTRACTION_CHECK_K)
        reference = subtraction_caps(SCALE, B, K)
        report.subtraction_mismatches = [k for k in range(K + 1) if reference[k] != self.table.caps[k]]


def verify_b15(t_max: int, z_samples: Sequence[Fraction] = DEFAULT_Z_SAMPLES,
               ud_t_max: Optional[int] = None) -> B15Report:
    return B15Verifier().verify(t_max, z_samples, ud_t_max)


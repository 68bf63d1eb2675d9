"""
Verification of generated staircase families.

Checks the integrality and Diophantine identities of every generated class,
the three-term recursion, the limit identity acc(M/D) = P/Q, the liveness
inequality, independence of the ending, pairwise positivity and the Cremona
verdicts.
"""

from itertools import combinations
from typing import List, Optional, Tuple

from config.settings import get_settings
from core.classes import QuasiPerfectClass, check_diophantine, intersection
from core.cremona import Verdict, reduce_many
from core.errors import StaircaseError, StepLimitError
from core.exactnum import format_rational
from core.staircase import (
    Ending,
    StairFamilySpec,
    dmin1_check,
    prestaircase_generate,
    prestaircase_limits,
    prestaircase_steps,
)
from utils.logger import get_logger

from .models import DMinSummary, FamilyVerificationReport


class StaircaseValidator:
    """
    Validator for one family of pre-staircase classes.

    Failed checks never raise; they are collected as errors and warnings.
    """

    def __init__(self, check_cremona: bool = True):
        """Initialize the validator."""
        self.logger = get_logger()
        self.check_cremona = check_cremona
        self.validation_errors: List[str] = []
        self.warnings: List[str] = []
        self.report: Optional[FamilyVerificationReport] = None

    def validate_family(self, spec: StairFamilySpec, k_max: int) -> Tuple[bool, List[str], List[str]]:
        """
        Validate classes k = 0..k_max of the family.

        Returns:
            Tuple of (is_valid, errors, warnings)
        """
        self.logger.info(f"Starting verification of {spec} up to k = {k_max}")
        self.validation_errors.clear()
        self.warnings.clear()
        self.report = FamilyVerificationReport(spec=str(spec), k_max=k_max)

        try:
            classes = prestaircase_generate(spec, max(k_max, 1))
        except StaircaseError as e:
            self.validation_errors.append(f"Generation failed: {e}")
            return self._finish()

        self.report.classes = [str(c) for c in classes[:k_max + 1]]
        self._validate_identities(classes)
        self._validate_recursion(spec, classes)
        self._validate_limits(spec)
        self._validate_dmin(spec)
        self._validate_endings(spec)
        self._validate_positivity(classes[:k_max + 1])
        if self.check_cremona:
            self._validate_cremona(classes[:k_max + 1])
        return self._finish()

    def _finish(self) -> Tuple[bool, List[str], List[str]]:
        is_valid = len(self.validation_errors) == 0
        self.report.is_valid = is_valid
        self.report.errors = self.validation_errors.copy()
        self.report.warnings = self.warnings.copy()
        self.report.stats = {
            'classes': len(self.report.classes),
            'errors': len(self.validation_errors),
            'warnings': len(self.warnings),
        }
        self.logger.info(
            f"Verification completed: {len(self.validation_errors)} errors, {len(self.warnings)} warnings"
        )
        return is_valid, self.validation_errors.copy(), self.warnings.copy()

    def _validate_identities(self, classes: List[QuasiPerfectClass]) -> None:
        self.logger.info("Checking Diophantine identities...")
        for k, c in enumerate(classes):
            if not check_diophantine(c):
                self.validation_errors.append(f"k = {k}: {c} is not Diophantine")

    def _validate_recursion(self, spec: StairFamilySpec, classes: List[QuasiPerfectClass]) -> None:
        self.logger.info("Checking the recursion...")
        factor = spec.sigma + 2
        for k in range(1, len(classes) - 1):
            before, here, after = classes[k - 1], classes[k], classes[k + 1]
            for name in ("d", "m", "p", "q"):
                expected = factor * getattr(here, name) - getattr(before, name)
                if getattr(after, name) != expected:
                    self.validation_errors.append(
                        f"k = {k + 1}: {name} = {getattr(after, name)}, recursion gives {expected}"
                    )

    def _validate_limits(self, spec: StairFamilySpec) -> None:
        self.logger.info("Checking acc(M/D) = P/Q...")
        limits = prestaircase_limits(spec)
        self.report.b_inf = str(limits.b_inf)
        self.report.a_inf = str(limits.a_inf)
        if not limits.acc_verified:
            self.validation_errors.append(f"acc(M/D) != P/Q for {spec}")

    def _validate_dmin(self, spec: StairFamilySpec) -> None:
        result = dmin1_check(spec)
        ratio = spec.default_ratio
        self.report.dmin1 = DMinSummary(
            passed=result.passed,
            difference=result.difference,
            lhs=format_rational(result.lhs),
            rhs=str(result.rhs),
            monotonicity=result.monotonicity,
            case=result.case,
            ratio=format_rational(ratio),
        )
        if not result.passed:
            self.validation_errors.append(
                f"liveness inequality fails at r/s = {ratio}: {result.lhs} > {result.rhs}"
            )

    def _validate_endings(self, spec: StairFamilySpec) -> None:
        differences = []
        for ending in (Ending.SHORT, Ending.LONG):
            first, second = prestaircase_steps(spec.with_ending(ending), 1)
            differences.append(abs(second.m * first.d - first.m * second.d))
        if differences[0] != differences[1]:
            self.validation_errors.append(
                f"|m1 d0 - m0 d1| depends on the ending: short {differences[0]}, long {differences[1]}"
            )

    def _validate_positivity(self, classes: List[QuasiPerfectClass]) -> None:
        self.logger.info("Checking pairwise positivity...")
        for first, second in combinations(classes, 2):
            product = intersection(first, second)
            if product < 0:
                self.validation_errors.append(f"{first} . {second} = {product} < 0")

    def _validate_cremona(self, classes: List[QuasiPerfectClass]) -> None:
        self.logger.info(f"Reducing {len(classes)} classes by Cremona moves...")
        try:
            results = reduce_many(classes, get_settings().max_cremona_steps)
        except StepLimitError as e:
            self.warnings.append(f"Cremona reduction undecided: {e}")
            return
        for c, result in zip(classes, results):
            self.report.cremona[str(c)] = result.verdict.value
            if result.verdict != Verdict.EXCEPTIONAL:
                self.validation_errors.append(f"{c} is {result.verdict.value}: {result.reason}")


def staircase_verify(spec: StairFamilySpec, k_max: int, check_cremona: bool = True) -> FamilyVerificationReport:
    """Run every family check and return the report."""
    validator = StaircaseValidator(check_cremona=check_cremona)
    validator.validate_family(spec, k_max)
    return validator.report

"""
Error taxonomy for the exact core.

Every error carries the process exit code the CLI should use for it:
2 for mathematical domain errors, 1 for usage errors.
"""


class StaircaseError(Exception):
    """Base class for all errors raised by the staircase toolkit."""

    exit_code = 2


class DomainError(StaircaseError, ValueError):
    """An argument lies outside the domain of the operation."""


class MixedRadicandsError(StaircaseError, ArithmeticError):
    """Two surds with nonzero radical parts over different radicands were combined."""

    def __init__(self, left: int, right: int):
        super().__init__(f"cannot combine sqrt({left}) with sqrt({right})")
        self.left = left
        self.right = right


class NegativeOperandError(DomainError):
    pass


class NotCoprimeError(DomainError):
    pass


class NotDiophantineError(DomainError):
    """A candidate class fails one of the Diophantine identities."""

    def __init__(self, identity: str, detail: str = ""):
        message = f"identity {identity} fails"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
        self.identity = identity


class DegenerateDenominatorError(DomainError):
    pass


class OutOfWindowError(DomainError):
    pass


class CenterOutOfRangeError(DomainError):
    pass


class AmbiguousBranchError(DomainError):
    pass


class OutOfBranchRangeError(DomainError):
    pass


class NegativeSigmaError(DomainError):
    pass


class NotBlockingError(DomainError):
    pass


class DivisibilityFailureError(StaircaseError):
    pass


class InsufficientPathTableError(StaircaseError):
    pass


class TableTooShortError(StaircaseError):
    pass


class StepLimitError(StaircaseError):
    pass


class UndecidableComparisonError(StaircaseError):
    """A numeric fallback value is too close to the comparand to decide the order."""


class UsageError(StaircaseError):
    exit_code = 1

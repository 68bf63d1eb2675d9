"""
Cremona moves and the reduction test for exceptional classes.

A state (d; n_1 >= n_2 >= ...) moves to
(2d - (n1+n2+n3); d-(n2+n3), d-(n1+n3), d-(n1+n2), n4, ...), re-sorted with
zeros dropped. An exceptional class reduces to E_1 = (0; -1).
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

from utils.logger import get_logger
from utils.parallel import parallel_map

from .cfweights import format_run_lengths
from .classes import AnyClass, check_diophantine
from .errors import NotDiophantineError, StepLimitError

logger = get_logger()

DEFAULT_MAX_STEPS = 100_000


@dataclass(frozen=True)
class ReductionState:
    degree: int
    entries: Tuple[int, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted((int(x) for x in self.entries if x != 0), reverse=True))
        object.__setattr__(self, "entries", ordered)

    @property
    def linear_invariant(self) -> int:
        return 3 * self.degree - sum(self.entries)

    @property
    def quadratic_invariant(self) -> int:
        return self.degree * self.degree - sum(x * x for x in self.entries)

    def leading(self) -> Tuple[int, int, int]:
        padded = self.entries + (0, 0, 0)
        return padded[0], padded[1], padded[2]

    def defect(self) -> int:
        return self.degree - sum(self.leading())

    def is_terminal_exceptional(self) -> bool:
        return self.degree == 0 and self.entries == (-1,)

    def __str__(self) -> str:
        return f"({self.degree}; {format_run_lengths(self.entries) or '-'})"


def state_of(c: AnyClass) -> ReductionState:
    return ReductionState(c.d, (c.m,) + tuple(c.mvec))


def raw_cremona(degree: int, entries: Sequence[int]) -> Tuple[int, List[int]]:
    """The transformation on the first three entries, without reordering."""
    padded = list(entries) + [0] * max(0, 3 - len(entries))
    n1, n2, n3 = padded[:3]
    moved = [degree - (n2 + n3), degree - (n1 + n3), degree - (n1 + n2)]
    return 2 * degree - (n1 + n2 + n3), moved + padded[3:]


def cremona_move(state: ReductionState) -> ReductionState:
    degree, entries = raw_cremona(state.degree, state.entries)
    return ReductionState(degree, tuple(entries))


class Verdict(str, Enum):
    EXCEPTIONAL = "EXCEPTIONAL"
    FAKE = "FAKE"


@dataclass
class ReductionResult:
    verdict: Verdict
    reason: str
    move_log: List[ReductionState] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.move_log) - 1


def _stop_reason(state: ReductionState) -> Optional[Tuple[Verdict, str]]:
    if state.is_terminal_exceptional():
        return Verdict.EXCEPTIONAL, "reduced to E1 = (0; -1)"
    if state.entries and state.entries[-1] < -1:
        return Verdict.FAKE, f"entry {state.entries[-1]} < -1"
    if state.degree < 0:
        return Verdict.FAKE, f"degree {state.degree} < 0"
    if state.degree == 0:
        return Verdict.FAKE, f"degree 0 with entries {format_run_lengths(state.entries) or '-'}"
    if state.defect() >= 0:
        return Verdict.FAKE, f"stuck: defect d - (n1+n2+n3) = {state.defect()} >= 0 at {state}"
    return None


def reduce(c: Union[AnyClass, ReductionState], max_steps: int = DEFAULT_MAX_STEPS) -> ReductionResult:
    """
    Apply standard Cremona moves until E_1 or a fake criterion is reached.

    Raises:
        NotDiophantineError: if c fails the Diophantine identities
        StepLimitError: if more than max_steps moves would be needed
    """
    if isinstance(c, ReductionState):
        state = c
    else:
        if not check_diophantine(c):
            raise NotDiophantineError("3d - m - sum = 1 and d^2 - m^2 - sum^2 = -1", str(c))
        state = state_of(c)

    log = [state]
    while True:
        stop = _stop_reason(state)
        if stop is not None:
            verdict, reason = stop
            logger.debug(f"Cremona reduction of {log[0]}: {verdict.value} after {len(log) - 1} moves ({reason})")
            return ReductionResult(verdict, reason, log)
        if len(log) > max_steps:
            raise StepLimitError(f"no verdict for {log[0]} within {max_steps} Cremona moves")
        state = cremona_move(state)
        log.append(state)


def format_move_log(log: Sequence[ReductionState]) -> str:
    """Step table "k | d | entries" with run-length exponents."""
    lines = ["k | d | entries"]
    for step, state in enumerate(log):
        lines.append(f"{step} | {state.degree} | {format_run_lengths(state.entries) or '-'}")
    return "\n".join(lines)


def _reduce_task(task: Tuple[AnyClass, int]) -> ReductionResult:
    c, max_steps = task
    return reduce(c, max_steps)


def reduce_many(classes: Sequence[AnyClass], max_steps: int = DEFAULT_MAX_STEPS) -> List[ReductionResult]:
    """Reduce each class, in parallel when the batch is large; order is preserved."""
    return parallel_map(_reduce_task, [(c, max_steps) for c in classes])

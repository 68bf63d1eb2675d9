import pytest

from core.classes import ExClass, make_quasi_perfect, parse_class_spec
from core.cremona import (
    ReductionState,
    Verdict,
    cremona_move,
    format_move_log,
    raw_cremona,
    reduce,
    reduce_many,
    state_of,
)
from core.errors import NotDiophantineError, StepLimitError
from core.staircase import Direction, Ending, Family, StairFamilySpec, blocking_class, prestaircase_generate

CONIC_CLASS = ExClass(2, 0, (1,) * 5)


def test_state_and_single_move():
    state = state_of(CONIC_CLASS)
    assert state == ReductionState(2, (1, 1, 1, 1, 1))
    assert state.linear_invariant == 1
    assert state.quadratic_invariant == -1
    assert state.defect() == -1
    assert raw_cremona(2, [1, 1, 1, 1, 1]) == (1, [0, 0, 0, 1, 1])
    assert cremona_move(state) == ReductionState(1, (1, 1))


def test_conic_reduces_to_exceptional_curve():
    result = reduce(CONIC_CLASS)
    assert result.verdict == Verdict.EXCEPTIONAL
    assert result.steps == 2
    assert result.move_log[-1].is_terminal_exceptional()
    lines = format_move_log(result.move_log).splitlines()
    assert lines[0] == "k | d | entries"
    assert lines[1] == "0 | 2 | 1^5"
    assert lines[-1] == "2 | 0 | -1"


def test_moves_preserve_invariants():
    state = state_of(make_quasi_perfect(73, 20, 170, 29))
    for _ in range(5):
        moved = cremona_move(state)
        assert moved.linear_invariant == state.linear_invariant
        assert moved.quadratic_invariant == state.quadratic_invariant
        state = moved


def test_staircase_and_blocking_classes_are_exceptional():
    classes = [make_quasi_perfect(73, 20, 170, 29)]
    classes += [blocking_class(Family.U, n) for n in range(6)]
    classes += [blocking_class(Family.L, n) for n in range(1, 6)]
    classes += [blocking_class(Family.E, n) for n in range(6)]
    classes += prestaircase_generate(StairFamilySpec(Family.U, Direction.UPPER, 0), 3)
    for result in reduce_many(classes):
        assert result.verdict == Verdict.EXCEPTIONAL, result.reason


@pytest.mark.slow
@pytest.mark.parametrize("family", list(Family))
@pytest.mark.parametrize("direction", list(Direction))
@pytest.mark.parametrize("ending", list(Ending))
def test_every_family_class_is_exceptional(family, direction, ending):
    first_n = StairFamilySpec(family, direction, 0).shape.first_n
    classes = []
    for n in range(first_n, 4):
        classes += prestaircase_generate(StairFamilySpec(family, direction, n, ending), 4)
    for c, result in zip(classes, reduce_many(classes)):
        assert result.verdict == Verdict.EXCEPTIONAL, f"{c}: {result.reason}"


def test_fake_class():
    result = reduce(parse_class_spec("48,14;111/19"))
    assert result.verdict == Verdict.FAKE
    assert result.reason


def test_errors():
    with pytest.raises(NotDiophantineError):
        reduce(ExClass(2, 0, (1, 1, 1, 1)))
    with pytest.raises(StepLimitError):
        reduce(CONIC_CLASS, max_steps=0)

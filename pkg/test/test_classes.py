from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from core.classes import (
    CandidateStatus,
    ExClass,
    MuRegime,
    QuasiPerfectClass,
    Side,
    candidate_pairs,
    center_blocking_test,
    center_window,
    check_diophantine,
    classes_with_cf_in_range,
    dm_from_center,
    ech_index,
    estimate_mu,
    find_dm_from_k,
    find_pq_from_dm,
    intersection,
    is_b_perfect,
    live_condition,
    make_quasi_perfect,
    mu_at,
    mu_near_center,
    nontrivial_at,
    obstruction_value,
    overshadow_candidates,
    parse_class_spec,
    search_ending,
    volume_bound,
)
from core.errors import (
    CenterOutOfRangeError,
    DegenerateDenominatorError,
    DomainError,
    NotDiophantineError,
    OutOfWindowError,
)
from core.exactnum import Ordering, Surd
from core.staircase import Direction, Ending, Family, StairFamilySpec, prestaircase_generate

BLOCKING_U0 = QuasiPerfectClass(3, 2, 6, 1)


def test_make_quasi_perfect():
    c = make_quasi_perfect(14, 9, 29, 4)
    assert c.center == Fraction(29, 4)
    assert c.mvec == (4,) * 7 + (1,) * 4
    assert check_diophantine(c)
    assert str(c) == "(14,9;4w(29/4))"
    assert str(BLOCKING_U0) == "(3,2;w(6))"
    with pytest.raises(NotDiophantineError):
        make_quasi_perfect(3, 2, 7, 1)
    with pytest.raises(DomainError):
        make_quasi_perfect(3, 2, 1, 6)


def test_exclass_sorts_and_formats():
    c = ExClass(2, 0, (1, 0, 1, 1, 1, 1))
    assert c.mvec == (1, 1, 1, 1, 1)
    assert str(c) == "(2,0;1^5)"
    assert check_diophantine(c)
    assert not check_diophantine(ExClass(2, 0, (1, 1, 1, 1)))


def test_index_and_intersection():
    assert ech_index(BLOCKING_U0) == 6
    assert ech_index(make_quasi_perfect(14, 9, 29, 4)) == 74
    assert intersection(BLOCKING_U0, BLOCKING_U0) == -1
    assert intersection(BLOCKING_U0, BLOCKING_U0.as_exclass()) == -1


def test_class_search_by_index_and_center():
    assert find_dm_from_k(6) == [(3, 2), (6, 6)]
    assert find_pq_from_dm(3, 2) == [(6, 1)]
    assert find_pq_from_dm(6, 6) == []
    assert dm_from_center(29, 4) == [(14, 9)]
    assert dm_from_center(6, 1) == [(3, 2)]
    assert search_ending([5, 1], [6, 4]) == [(73, 20)]
    with pytest.raises(DomainError):
        find_dm_from_k(-1)


def test_classes_with_cf_in_range():
    records = classes_with_cf_in_range(5, 7, 1, 4)
    found = {(d, m, p, q) for d, m, p, q, _ in records}
    assert {(3, 2, 6, 1), (5, 0, 13, 2), (5, 2, 11, 2)} <= found
    centers = [Fraction(p, q) for _, _, p, q, _ in records]
    assert centers == sorted(centers)
    assert all(5 < center < 7 for center in centers)
    with pytest.raises(DomainError):
        classes_with_cf_in_range(7, 5, 1, 4)


def test_parse_class_spec():
    assert parse_class_spec("3,2;6") == BLOCKING_U0
    assert parse_class_spec("14,9;29/4") == QuasiPerfectClass(14, 9, 29, 4)
    explicit = parse_class_spec("2,0;[1^5]")
    assert explicit == ExClass(2, 0, (1,) * 5)
    with pytest.raises(ValueError):
        parse_class_spec("garbage")
    with pytest.raises(NotDiophantineError):
        parse_class_spec("3,2;7")


def test_center_window():
    assert center_window(6, 1) == (5, 7)
    assert center_window(29, 4) == (Fraction(36, 5), Fraction(22, 3))


def test_mu_at_rational_points():
    b = Fraction(2, 3)
    assert mu_at(BLOCKING_U0, b, 6) == Fraction(18, 5)
    assert mu_at(BLOCKING_U0, b, Fraction(11, 2)) == Fraction(33, 10)
    assert obstruction_value(BLOCKING_U0, 0, 6).value == 2
    with pytest.raises(DegenerateDenominatorError):
        mu_at(ExClass(1, 1, ()), 1, 2)


def test_mu_near_center_regimes():
    b = Fraction(2, 3)
    z = Surd(3, 2, 2)
    left = mu_near_center(BLOCKING_U0, b, z)
    assert left.regime == MuRegime.LEFT_LINEAR
    assert left.value == 3 * z / 5
    right = mu_near_center(BLOCKING_U0, b, Fraction(13, 2))
    assert right.regime == MuRegime.RIGHT_CONSTANT
    assert right.value == Fraction(18, 5)
    with pytest.raises(OutOfWindowError):
        mu_near_center(BLOCKING_U0, b, Fraction(9, 2))
    with pytest.raises(OutOfWindowError):
        mu_near_center(make_quasi_perfect(14, 9, 29, 4), b, Fraction(22, 3))
    with pytest.raises(OutOfWindowError):
        obstruction_value(BLOCKING_U0.as_exclass(), b, z)


@pytest.mark.parametrize("c, b, z, expected, regime", [
    (QuasiPerfectClass(3, 2, 6, 1), Fraction(5, 11), 6, Fraction(66, 23), MuRegime.RIGHT_CONSTANT),
    (QuasiPerfectClass(15, 4, 35, 6), Fraction(19, 61), Fraction(35, 6), Fraction(2135, 839), MuRegime.RIGHT_CONSTANT),
    (QuasiPerfectClass(2, 0, 5, 1), Fraction(1, 5), 6, Fraction(5, 2), MuRegime.RIGHT_CONSTANT),
])
def test_mu_near_center_examples(c, b, z, expected, regime):
    value = mu_near_center(c, b, z)
    assert value.value == expected
    assert value.regime == regime


def test_integer_center_constant_has_no_upper_end():
    c = QuasiPerfectClass(2, 0, 5, 1)
    for z in (5, 6, Fraction(61, 10), 40, Surd(3, 2, 2) + 5):
        assert mu_near_center(c, Fraction(1, 5), z).value == Fraction(5, 2)
        if not isinstance(z, Surd):
            assert mu_at(c, Fraction(1, 5), z) == Fraction(5, 2)
    assert mu_near_center(c, 0, Fraction(9, 2)).value == Fraction(9, 4)


def test_estimate_mu_at_a_surd():
    value = estimate_mu(BLOCKING_U0, 0, Surd(3, 2, 2))
    assert value.compare(Fraction(19, 10)) == Ordering.GREATER
    assert value.compare(Fraction(2)) == Ordering.LESS


def test_volume_bound():
    assert volume_bound(0, 4).exact() == 2
    assert volume_bound(0, 6).exact() is None
    assert volume_bound(0, 6).compare(Fraction(5, 2)) == Ordering.GREATER
    with pytest.raises(DomainError):
        volume_bound(1, 2)
    with pytest.raises(DomainError):
        volume_bound(0, Fraction(1, 2))


def test_nontrivial_and_perfect():
    assert not nontrivial_at(BLOCKING_U0, 0, 6)
    assert nontrivial_at(BLOCKING_U0, Fraction(2, 3), 6)
    assert is_b_perfect(BLOCKING_U0, Fraction(2, 3))
    assert not is_b_perfect(BLOCKING_U0, 0)


def test_live_condition():
    assert live_condition(BLOCKING_U0, Fraction(2, 3))
    assert live_condition(BLOCKING_U0, Fraction(1, 2))
    assert live_condition(BLOCKING_U0, Fraction(3, 4))
    assert not live_condition(BLOCKING_U0, Fraction(2, 5))
    assert not live_condition(BLOCKING_U0, Fraction(4, 5))
    assert live_condition(BLOCKING_U0, Fraction(2, 3), side=Side.ABOVE, r=1, s=1) is False


def test_center_blocking_test():
    assert center_blocking_test(BLOCKING_U0)
    with pytest.raises(CenterOutOfRangeError):
        center_blocking_test(QuasiPerfectClass(2, 1, 4, 1))


def test_overshadow_candidates():
    candidates = overshadow_candidates(Fraction(1, 5), 1, 3)
    pairs = candidate_pairs(candidates)
    assert pairs[(1, 1)] == CandidateStatus.NEEDS_REVIEW
    assert all(candidate.d < Fraction(15, 2) for candidate in candidates)
    assert all(Fraction(candidate.m, candidate.d) > Fraction(1, 3) for candidate in candidates)
    assert [c.d for c in candidates] == sorted((c.d for c in candidates), reverse=True)
    with pytest.raises(DomainError):
        overshadow_candidates(Fraction(1, 2), 1, 3)


def family_classes(n_max=3, k_max=4):
    classes = []
    for family in Family:
        for direction in Direction:
            for ending in Ending:
                for n in range(n_max + 1):
                    spec = StairFamilySpec(family, direction, n, ending)
                    if n >= spec.shape.first_n:
                        classes += prestaircase_generate(spec, k_max)
    return classes


@pytest.mark.slow
def test_family_classes_follow_the_center_formulas():
    classes = family_classes()
    assert len(classes) == 200
    for c in classes:
        z = c.center - Fraction(1, 3 * c.q * c.q)
        for b in (0, Fraction(1, 7), Fraction(1, 5), Fraction(3, 10), Fraction(1, 2)):
            scale = c.d - c.m * b
            assert mu_at(c, b, c.center) == c.p / scale
            assert mu_at(c, b, z) == c.q * z / scale
            assert mu_near_center(c, b, z).value == c.q * z / scale
        assert mu_at(c, c.ratio, c.center) == Fraction(c.p * c.d, c.d ** 2 - c.m ** 2)


SMALL_CLASSES = [
    QuasiPerfectClass(3, 2, 6, 1),
    QuasiPerfectClass(2, 0, 5, 1),
    QuasiPerfectClass(14, 9, 29, 4),
    QuasiPerfectClass(15, 4, 35, 6),
    QuasiPerfectClass(5, 0, 13, 2),
    QuasiPerfectClass(48, 5, 120, 19),
    QuasiPerfectClass(73, 20, 170, 29),
    ExClass(2, 0, (1,) * 5),
]


def assert_nontrivial_bounds(c, b, z):
    mu = mu_at(c, b, z)
    assert is_b_perfect(c, b)
    assert mu * mu <= z / (1 - b * b) * (1 + Fraction(1, c.d ** 2 - c.m ** 2))


def test_nontrivial_obstruction_bounds():
    assert nontrivial_at(BLOCKING_U0, Fraction(2, 3), 6)
    assert_nontrivial_bounds(BLOCKING_U0, Fraction(2, 3), Fraction(6))


@given(
    st.sampled_from(SMALL_CLASSES),
    st.fractions(min_value=0, max_value=Fraction(9, 10), max_denominator=60),
    st.fractions(min_value=Fraction(11, 10), max_value=12, max_denominator=60),
)
def test_nontrivial_obstruction_bounds_hold_everywhere(c, b, z):
    if nontrivial_at(c, b, z):
        assert_nontrivial_bounds(c, b, z)

from fractions import Fraction

import pytest

from config import Bounds
from errors import BallSpaceError, SizeBoundExceededError, UnsupportedCombinationError
from finite_core import new_space
from generators import random_rational_set, rational_sample
from symbolic import (
    GeometricFamily,
    Interval,
    NestDescriptor,
    NestKind,
    RationalSet,
    build_example_ball,
    canonical_rset,
    check_prefix_nested,
    coproduct_with_complete_component,
    example_certificate,
    family_intersection,
    final_segments,
    lex_ultra_nest,
    nest_intersection_empty,
    nth_prime,
    prime_gap_union,
    rset_contains,
    rset_equal,
    rset_from_points,
    rset_intersect,
    rset_is_empty,
    rset_open_interval,
    rset_subset,
    rset_union,
    verify_example_incomparable,
    verify_example_union,
)

HALF = Fraction(1, 2)
UNIT = rset_open_interval(0, 1)


def test_interval_membership():
    interval = Interval(0, True, "1/2", True)
    assert interval.contains(HALF)
    assert not interval.contains(Fraction(0))
    assert str(interval) == "(0, 1/2]"
    with pytest.raises(BallSpaceError):
        Interval(1, True, 1, True)


def test_removed_point_is_restored_by_adding_it():
    punctured = canonical_rset([Interval(0, True, 1, False)], removed_points=["1/2"])
    assert punctured.intervals == (Interval(0, True, "1/2", False), Interval("1/2", True, 1, False))
    assert not rset_contains(punctured, HALF)
    assert rset_union(punctured, rset_from_points(["1/2"])) == UNIT


def test_subset_examples():
    assert rset_subset(rset_open_interval(0, "1/3"), rset_open_interval(0, "1/2"))
    assert not rset_subset(rset_open_interval(0, "1/2"), rset_open_interval(0, "1/3"))
    assert rset_subset(RationalSet(), UNIT)


def test_touching_closed_intervals_meet_in_a_point():
    left = canonical_rset([Interval(0, True, "1/3", True)])
    right = canonical_rset([Interval("1/3", False, "1/2", False)])
    assert rset_intersect(left, right).added == (Fraction(1, 3),)
    assert rset_union(left, right) == rset_open_interval(0, "1/2")
    assert rset_is_empty(rset_intersect(rset_open_interval(0, "1/3"), rset_open_interval("1/3", "1/2")))
    assert rset_is_empty(RationalSet())


def test_family_membership_by_division():
    family = GeometricFamily(1, "1/2", 2)
    assert family.first == Fraction(1, 4)
    assert family.contains(Fraction(1, 8))
    assert not family.contains(HALF)
    assert not family.contains(Fraction(3, 16))
    assert family.is_below(Fraction(1, 3))
    assert family == GeometricFamily("1/4", "1/2")
    with pytest.raises(UnsupportedCombinationError):
        GeometricFamily(1, "1/2").contains(Fraction(1, 2 ** 10), Bounds(series_steps=3))


def test_family_intersections():
    assert family_intersection(GeometricFamily(1, "1/2", 2), GeometricFamily(1, "1/3", 1)) is None
    assert family_intersection(GeometricFamily(1, "1/2"), GeometricFamily(1, "1/3")) == Fraction(1)
    assert family_intersection(GeometricFamily(1, "1/2"), GeometricFamily(1, "1/4")) == GeometricFamily(1, "1/4")
    assert family_intersection(GeometricFamily(1, "1/2"), GeometricFamily("1/8", "1/4")) == GeometricFamily("1/8", "1/4")
    assert family_intersection(GeometricFamily("1/2", "1/4"), GeometricFamily("1/4", "1/4")) is None


def test_family_intersection_solves_the_exponent_congruence():
    # 2^-2j = 2^-(1+3k) for j = 2, 5, 8, ...
    common = family_intersection(GeometricFamily(1, "1/4"), GeometricFamily("1/2", "1/8"))
    assert common == GeometricFamily("1/16", "1/64")
    assert family_intersection(GeometricFamily(1, "1/4"), GeometricFamily("1/2", "1/16")) is None


def test_disjoint_families_removed_from_both_sides():
    twos = canonical_rset([Interval(0, True, 1, False)], [GeometricFamily(1, "1/2", 2)])
    threes = canonical_rset([Interval(0, True, 1, False)], [GeometricFamily(1, "1/3", 1)])
    assert rset_union(twos, threes) == UNIT
    meet = rset_intersect(twos, threes)
    assert meet.removed == (GeometricFamily(1, "1/3", 1), GeometricFamily(1, "1/2", 2))


def test_dependent_families_split_by_period():
    halves = canonical_rset([Interval(0, True, 1, False)], [GeometricFamily("1/2", "1/2")])
    quarters = canonical_rset([Interval(0, True, 1, False)], [GeometricFamily("1/4", "1/4")])
    assert rset_union(halves, quarters) == quarters
    assert rset_intersect(halves, quarters) == halves
    odd = canonical_rset([Interval(0, True, 1, False)], [GeometricFamily("1/2", "1/4")])
    assert rset_union(halves, odd) == odd


def test_gap_above_a_family_is_absorbed():
    split = canonical_rset([Interval(0, True, 1, False)], [GeometricFamily("1/4", "1/2")], ["1/2"])
    whole = canonical_rset([Interval(0, True, 1, False)], [GeometricFamily("1/2", "1/2")])
    assert split == whole
    assert len(split.intervals) == 1


def test_canonical_form_is_idempotent(rng):
    for _ in range(60):
        rset = random_rational_set(rng)
        assert canonical_rset(rset.intervals, rset.removed, (), rset.added) == rset


def test_equal_point_and_interval_sets_have_identical_forms(rng):
    for _ in range(60):
        first = random_rational_set(rng, max_families=0)
        second = random_rational_set(rng, max_families=0)
        assert rset_union(first, second) == rset_union(second, first)
        assert rset_intersect(first, second) == rset_intersect(second, first)


def test_operations_agree_with_membership(rng):
    for _ in range(60):
        first, second = random_rational_set(rng), random_rational_set(rng)
        union, meet = rset_union(first, second), rset_intersect(first, second)
        for x in rational_sample([first, second, union, meet]):
            in_first, in_second = rset_contains(first, x), rset_contains(second, x)
            assert rset_contains(union, x) == (in_first or in_second)
            assert rset_contains(meet, x) == (in_first and in_second)


def test_boolean_algebra_laws(rng):
    for _ in range(40):
        a, b, c = (random_rational_set(rng) for _ in range(3))
        assert rset_equal(rset_union(a, b), rset_union(b, a))
        assert rset_equal(rset_intersect(a, b), rset_intersect(b, a))
        assert rset_equal(rset_union(rset_union(a, b), c), rset_union(a, rset_union(b, c)))
        assert rset_equal(rset_intersect(rset_intersect(a, b), c), rset_intersect(a, rset_intersect(b, c)))
        assert rset_equal(rset_union(a, rset_intersect(a, b)), a)
        assert rset_equal(rset_intersect(a, rset_union(a, b)), a)


def test_subset_is_a_partial_order(rng):
    for _ in range(40):
        a, b = random_rational_set(rng), random_rational_set(rng)
        meet, union = rset_intersect(a, b), rset_union(a, b)
        assert rset_subset(a, a)
        assert rset_subset(meet, a) and rset_subset(a, union) and rset_subset(meet, union)
        if rset_subset(a, b) and rset_subset(b, a):
            assert rset_equal(a, b)
        if rset_subset(a, b):
            for x in rational_sample([a, b]):
                assert not rset_contains(a, x) or rset_contains(b, x)


def test_nth_prime_bounds():
    assert nth_prime(1) == 2 and nth_prime(5) == 11
    with pytest.raises(BallSpaceError):
        nth_prime(0)
    with pytest.raises(SizeBoundExceededError):
        nth_prime(5, Bounds(max_prime_index=3))


def test_build_example_balls():
    first = build_example_ball(1)
    assert first.intervals == (Interval(0, True, "1/2", False),)
    assert first.removed[0].start == 2 and first.removed[0].ratio == HALF
    assert first.removed[0].first == Fraction(1, 4)
    second = build_example_ball(2)
    assert second.intervals == (Interval(0, True, "1/3", False),)
    assert second.removed[0].start == 2 and second.removed[0].first == Fraction(1, 9)
    assert not rset_contains(first, Fraction(1, 8))
    assert rset_contains(first, Fraction(1, 3))


def test_removed_points_lie_below_the_next_ball():
    for i in range(1, 9):
        family = build_example_ball(i).removed[0]
        assert family.is_below(Fraction(1, nth_prime(i + 1)))


def test_example_balls_are_incomparable():
    report = verify_example_incomparable(1, 2)
    assert report.incomparable
    assert report.x == Fraction(1, 3) and report.y == Fraction(1, 4)
    later = verify_example_incomparable(2, 3)
    assert later.incomparable
    assert rset_contains(build_example_ball(2), later.x) and not rset_contains(build_example_ball(3), later.x)
    with pytest.raises(BallSpaceError):
        verify_example_incomparable(2, 2)


def test_example_union_identities():
    for i in range(1, 9):
        assert verify_example_union(i)
        ball = build_example_ball(i)
        interval = rset_open_interval(0, Fraction(1, nth_prime(i)))
        assert rset_subset(ball, interval) and not rset_equal(ball, interval)


def test_nest_certificates():
    prime_gap = nest_intersection_empty(prime_gap_union())
    assert prime_gap.empty and prime_gap.rule == "monotone-endpoint"
    assert all(prime_gap.details["union_identity"].values())
    assert nest_intersection_empty(final_segments()).empty
    finite_support = nest_intersection_empty(lex_ultra_nest([1, 1], [0]))
    assert not finite_support.empty
    assert finite_support.limit.support == (0, 1)
    assert nest_intersection_empty(lex_ultra_nest([], [1])).empty


@pytest.mark.parametrize(
    "descriptor",
    [prime_gap_union(), final_segments(3), lex_ultra_nest([1, 1], [0]), lex_ultra_nest(["1/2"], [1, 0, -2])],
)
def test_prefixes_are_nested(descriptor):
    assert check_prefix_nested(descriptor, 64)


def test_limit_lies_in_every_prefix_member():
    descriptor = lex_ultra_nest([1, "-1/3", 2], [0])
    limit = nest_intersection_empty(descriptor).limit
    assert all(descriptor.member(n).contains(limit) for n in range(65))


def test_descriptor_json_round_trip():
    for descriptor in (prime_gap_union(2), final_segments(), lex_ultra_nest([1, 1], [0, "1/2"])):
        assert NestDescriptor.from_json(descriptor.to_json()) == descriptor
    assert final_segments().kind == NestKind.FINAL_SEGMENTS
    with pytest.raises(BallSpaceError):
        NestDescriptor.from_json({"kind": "Omega1"})


def test_rational_set_json_round_trip():
    ball = build_example_ball(3)
    assert RationalSet.from_json(ball.to_json()) == ball


def test_coproduct_with_complete_component():
    report = coproduct_with_complete_component(final_segments(), new_space(1, [[0]]))
    assert not report.empty
    assert report.limit == (1, 0)
    assert report.prefix_consistent
    assert report.component_verdicts == (True, False)


def test_coproduct_of_incomplete_components():
    report = coproduct_with_complete_component(final_segments(), final_segments())
    assert report.empty
    assert report.prefix_consistent
    assert report.escapes["0"] == [2, 11, 101, 1001]


def test_example_certificate():
    certificate = example_certificate(3)
    assert certificate["holds"]
    assert len(certificate["incomparable"]) == 3
    assert certificate["unions"] == {"1": True, "2": True, "3": True}
    with pytest.raises(BallSpaceError):
        example_certificate(1)

import itertools

import pytest

from config import Bounds
from errors import (
    BallSpaceError,
    EmptyBallError,
    EmptyFamilyError,
    EnumerationBoundExceededError,
    NotASubfamilyError,
    NotCenteredError,
    NotMaximalError,
    OutOfRangePointError,
    UniverseMismatchError,
)
from finite_core import (
    CenteredSystem,
    FiniteBallSpace,
    Nest,
    centered_intersections,
    chain_intersections,
    classify,
    extend_to_maximal_centered,
    extract_base_subsystem,
    f_un_closure,
    intersection_of,
    is_centered,
    is_nest,
    is_pseudo_convex,
    largest_ball_in,
    mask_of,
    maximal_centered_systems,
    maximal_chains,
    new_space,
    points_of,
    pseudo_convex_closure,
    union_families,
)
from generators import random_nest, random_space


def m(*points):
    return mask_of(points)


def test_new_space_deduplicates_and_orders():
    space = new_space(3, [[1, 2], [0, 1], [2, 1]])
    assert space.balls == (m(0, 1), m(1, 2))
    assert len(space) == 2
    assert new_space(1, [[0]]).balls == (1,)


@pytest.mark.parametrize(
    "n, balls, error",
    [
        (2, [[]], EmptyBallError),
        (2, [], EmptyFamilyError),
        (2, [[0, 2]], OutOfRangePointError),
        (2, [[-1]], OutOfRangePointError),
    ],
)
def test_new_space_rejects_bad_input(n, balls, error):
    with pytest.raises(error):
        new_space(n, balls)


def test_space_json_round_trip(witness_space):
    payload = witness_space.to_json()
    assert payload == {"n": 3, "balls": [[0, 1], [1, 2]]}
    assert FiniteBallSpace.from_json(payload) == witness_space


def test_mask_helpers():
    assert points_of(m(0, 3, 4)) == (0, 3, 4)
    assert points_of(0) == ()
    assert intersection_of([m(0, 1), m(1, 2)]) == m(1)


def test_is_nest_and_is_centered():
    space = new_space(3, [[0], [0, 1], [1, 2]])
    assert is_nest(space, [m(0), m(0, 1)])
    assert not is_nest(space, [m(0, 1), m(1, 2)])
    assert is_nest(space, [m(1, 2)])
    assert is_centered(space, [m(0, 1), m(1, 2)])
    assert not is_centered(space, [m(0), m(1, 2)])
    with pytest.raises(NotASubfamilyError):
        is_nest(space, [m(2)])


def test_family_types_validate():
    with pytest.raises(NotCenteredError):
        CenteredSystem((m(0), m(1)))
    with pytest.raises(BallSpaceError):
        Nest((m(0, 1), m(1, 2)))
    assert Nest((m(0, 1), m(0))).intersection == m(0)


def test_nests_are_centered(rng):
    for _ in range(100):
        space = random_space(rng)
        assert is_centered(space, random_nest(rng, space))


def test_classify_witness_space(witness_space):
    report = classify(witness_space)
    assert (report.s1, report.s2, report.s3, report.s4) == (True, True, True, True)
    assert report.s1c
    assert not report.s2c
    assert not report.s3c
    assert not report.s4c
    assert intersection_of(report.witnesses["s2c"]) == m(1)
    assert report.is_consistent()


def test_classify_point_space(point_space):
    report = classify(point_space)
    assert all(report.flags().values())
    assert report.witnesses == {}


def test_classify_finite_triviality(rng):
    for _ in range(300):
        report = classify(random_space(rng, max_points=6, max_balls=8))
        assert report.s1 and report.s2 and report.s3 and report.s4 and report.s1c
        assert report.is_consistent()


def test_classify_respects_bounds(witness_space):
    with pytest.raises(EnumerationBoundExceededError):
        classify(witness_space, Bounds(max_balls=1))
    with pytest.raises(EnumerationBoundExceededError):
        classify(witness_space, Bounds(max_points=2))


def test_s3c_without_s4c():
    space = new_space(3, [[0], [0, 1, 2], [0, 1]])
    assert classify(space).s4c
    # {0} is the largest ball inside the meet {0,1} of the two big balls, which is no ball.
    space = new_space(4, [[0], [0, 1, 2], [0, 1, 3]])
    report = classify(space)
    assert report.s3c and not report.s4c


def test_maximal_chains():
    space = new_space(2, [[0], [1], [0, 1]])
    assert sorted(maximal_chains(space)) == [(m(0), m(0, 1)), (m(1), m(0, 1))]


def test_chain_intersections_are_chain_minima(rng):
    for _ in range(50):
        space = random_space(rng)
        meets = chain_intersections(space)
        assert set(meets) == set(space.balls)


def test_maximal_centered_systems_brute_force(rng):
    for _ in range(60):
        space = random_space(rng, max_points=4, max_balls=5)
        centered = [
            frozenset(family)
            for size in range(1, len(space.balls) + 1)
            for family in itertools.combinations(space.balls, size)
            if intersection_of(family)
        ]
        maximal = {family for family in centered if not any(family < other for other in centered)}
        assert {frozenset(family) for family in maximal_centered_systems(space)} == maximal


def test_centered_intersections_brute_force(rng):
    for _ in range(60):
        space = random_space(rng, max_points=4, max_balls=5)
        expected = set()
        for size in range(1, len(space.balls) + 1):
            for family in itertools.combinations(space.balls, size):
                if intersection_of(family):
                    expected.add(intersection_of(family))
        found = centered_intersections(space)
        assert set(found) == expected
        for meet, family in found.items():
            assert intersection_of(family) == meet


def test_largest_ball_in():
    assert largest_ball_in(new_space(2, [[0], [0, 1]]), m(0, 1)) == m(0, 1)
    assert largest_ball_in(new_space(3, [[0], [1]]), m(0, 1)) is None
    assert largest_ball_in(new_space(3, [[0], [1]]), m(2)) is None


def test_union_families():
    first = new_space(2, [[0]])
    second = new_space(2, [[1]])
    assert union_families(first, second).balls == (m(0), m(1))
    assert union_families(first, first) == first
    with pytest.raises(UniverseMismatchError):
        union_families(first, new_space(3, [[1]]))


def test_union_of_random_pairs_keeps_finite_properties(rng):
    for _ in range(100):
        first = random_space(rng, universe_size=4)
        second = random_space(rng, universe_size=4)
        report = classify(union_families(first, second))
        assert report.s1 and report.s2 and report.s4


def test_f_un_closure_examples():
    assert f_un_closure(new_space(2, [[0], [1]])).balls == (m(0), m(1), m(0, 1))
    chain = new_space(3, [[0], [0, 1], [0, 1, 2]])
    assert f_un_closure(chain) == chain


def test_closures_are_closure_operators(rng):
    for _ in range(60):
        space = random_space(rng, max_points=4, max_balls=5)
        for close in (f_un_closure, pseudo_convex_closure):
            closed = close(space)
            assert set(space.balls) <= set(closed.balls)
            assert close(closed) == closed
            subfamily = FiniteBallSpace(space.universe_size, space.balls[: max(1, len(space.balls) // 2)])
            assert set(close(subfamily).balls) <= set(closed.balls)


def test_extend_to_maximal_centered_is_deterministic():
    space = new_space(3, [[0, 1], [1, 2], [0]])
    extended = extend_to_maximal_centered(space, [m(0, 1)])
    assert extended.members == (m(0), m(0, 1))
    assert extend_to_maximal_centered(space, extended.members) == extended
    with pytest.raises(NotCenteredError):
        extend_to_maximal_centered(space, [m(0), m(1, 2)])


def test_extend_to_maximal_centered_is_maximal(rng):
    for _ in range(100):
        space = random_space(rng)
        seed = (space.balls[int(rng.integers(0, len(space.balls)))],)
        extended = extend_to_maximal_centered(space, seed)
        assert seed[0] in extended
        for ball in space.balls:
            if ball not in extended:
                assert extended.intersection & ball == 0


def test_extract_base_subsystem():
    base = new_space(3, [[0, 1], [1, 2]])
    closure = f_un_closure(base)
    system = (m(0, 1), m(1, 2), m(0, 1, 2))
    extracted = extract_base_subsystem(base, system, closure)
    assert extracted.members == (m(0, 1), m(1, 2))
    assert extracted.intersection == m(1)
    with pytest.raises(NotMaximalError):
        extract_base_subsystem(base, (m(0, 1), m(0, 1, 2)), closure)


def test_extract_base_subsystem_on_union_closed_base():
    base = new_space(2, [[0], [1], [0, 1]])
    assert extract_base_subsystem(base, (m(0), m(0, 1))).members == (m(0), m(0, 1))


def test_extract_base_subsystem_preserves_intersection(rng):
    checked = 0
    while checked < 500:
        base = random_space(rng, max_points=4, max_balls=4)
        closure = f_un_closure(base)
        for system in maximal_centered_systems(closure):
            extracted = extract_base_subsystem(base, system, closure)
            assert extracted.intersection == intersection_of(system)
            checked += 1


def test_is_pseudo_convex():
    space = new_space(4, [[0, 1], [1, 2], [2, 3], [0], [1]])
    assert is_pseudo_convex(space, [m(0, 1), m(1, 2), m(2, 3)])
    assert not is_pseudo_convex(space, [m(0), m(1)])
    assert is_pseudo_convex(space, [m(0)])
    with pytest.raises(NotASubfamilyError):
        is_pseudo_convex(space, [m(3)])


def test_pseudo_convex_closure_examples():
    chain = new_space(3, [[0], [0, 1], [0, 1, 2]])
    assert pseudo_convex_closure(chain) == f_un_closure(chain)
    disjoint = new_space(3, [[0], [2]])
    assert pseudo_convex_closure(disjoint) == disjoint

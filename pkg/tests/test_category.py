import pytest

from category import (
    AugmentedBallSpace,
    TaggedPoint,
    augment,
    augmented_coproduct,
    augmented_product,
    all_augmented_structures,
    check_augmented_coproduct,
    check_coproduct_universal_property,
    check_final_characterization,
    check_initial_characterization,
    check_product_universal_property,
    coproduct,
    decode_product_point,
    decode_tagged,
    empty_space,
    encode_product_point,
    encode_tagged,
    final_structure,
    initial_structure,
    injection,
    intersection_commutation_check,
    mediate_coproduct,
    mediate_product,
    naive_coproduct,
    product,
    projection,
    sweep_universal_properties,
    verify_topologicity,
)
from config import Bounds
from errors import ConeNotContinuousError, SizeBoundExceededError
from finite_core import classify, mask_of, new_space
from generators import random_nest, random_space
from maps import BallMap, identity, is_ball_continuous


def m(*points):
    return mask_of(points)


def aug(n, *members):
    return AugmentedBallSpace(n, tuple(mask_of(points) for points in members) + (0, (1 << n) - 1))


def test_augment_examples():
    assert augment(new_space(2, [[0]])).family == (0, m(0), m(0, 1))
    assert augment(new_space(1, [[0]])).family == (0, m(0))
    assert empty_space().family == (0,)
    augmented = augment(new_space(3, [[0], [1, 2]]))
    assert augment(augmented) is augmented


def test_augmented_space_requires_empty_set_and_universe():
    with pytest.raises(ValueError):
        AugmentedBallSpace(2, (0, m(0)))
    round_trip = AugmentedBallSpace.from_json(aug(2, [1]).to_json())
    assert round_trip == aug(2, [1])
    assert aug(2, [1]).to_json()["augmented"] is True


def test_point_encodings():
    sizes = [2, 3]
    assert encode_product_point(sizes, (1, 2)) == 5
    assert decode_product_point(sizes, 5) == (1, 2)
    assert encode_tagged(sizes, TaggedPoint(1, 0)) == 2
    assert decode_tagged(sizes, 4) == TaggedPoint(1, 2)


def test_product_example():
    first = new_space(2, [[0]])
    second = new_space(1, [[0]])
    assert product([first, second]).balls == (m(0), m(0, 1))


def test_product_with_point_space():
    space = new_space(2, [[0], [0, 1]])
    assert product([space, new_space(1, [[0]])]) == space


def test_product_size_bound():
    space = new_space(3, [[0]])
    with pytest.raises(SizeBoundExceededError):
        product([space, space, space], Bounds(max_product_points=20))


def test_projections_and_injections_are_continuous(rng):
    for _ in range(50):
        spaces = [random_space(rng, max_points=3, max_balls=3) for _ in range(2)]
        for k in range(2):
            assert is_ball_continuous(projection(spaces, k))
            assert is_ball_continuous(injection(spaces, k))


def test_coproduct_examples():
    point = new_space(1, [[0]])
    assert coproduct([point, point]).balls == (m(0, 1),)
    first = new_space(2, [[0], [1]])
    second = new_space(2, [[0], [1], [0, 1]])
    assert len(coproduct([first, second]).balls) == 6


def test_injection_preimages_are_component_balls():
    first = new_space(2, [[0], [1]])
    second = new_space(2, [[0], [1], [0, 1]])
    target = coproduct([first, second])
    inclusion = injection([first, second], 1)
    assert {inclusion.preimage(ball) for ball in target.balls} == set(second.balls)


def test_mediate_product_of_projections_is_identity():
    spaces = [new_space(2, [[0]]), new_space(2, [[1], [0, 1]])]
    cone = [projection(spaces, 0), projection(spaces, 1)]
    assert mediate_product(cone) == identity(product(spaces))


def test_mediate_product_single_factor():
    space = new_space(2, [[0], [0, 1]])
    f = BallMap(space, space, (0, 1))
    assert mediate_product([f]) == f


def test_mediate_product_rejects_discontinuous_leg():
    z = new_space(2, [[0, 1]])
    good = BallMap(z, new_space(1, [[0]]), (0, 0))
    bad = BallMap(z, new_space(2, [[1]]), (0, 0))
    with pytest.raises(ConeNotContinuousError) as excinfo:
        mediate_product([good, bad])
    assert excinfo.value.index == 1


def test_mediate_coproduct_of_injections_is_identity():
    spaces = [new_space(2, [[0], [0, 1]]), new_space(1, [[0]])]
    cocone = [injection(spaces, 0), injection(spaces, 1)]
    assert mediate_coproduct(cocone) == identity(coproduct(spaces))


def test_mediate_coproduct_single_component():
    space = new_space(2, [[0], [0, 1]])
    f = BallMap(space, space, (0, 1))
    assert mediate_coproduct([f]) == f


def test_universal_properties_small_instance():
    factors = [new_space(2, [[0], [0, 1]]), new_space(2, [[1], [0, 1]])]
    test_object = new_space(2, [[0], [0, 1]])
    product_report = check_product_universal_property(factors, test_object)
    coproduct_report = check_coproduct_universal_property(factors, test_object)
    assert product_report.holds and product_report.checked > 0
    assert coproduct_report.holds and coproduct_report.checked > 0


def test_universal_property_sweep_two_points():
    report = sweep_universal_properties(max_size=2, max_balls=2)
    assert report.holds
    assert report.counterexample is None
    assert report.details["spaces"] == 7


@pytest.mark.slow
def test_universal_property_sweep_three_points():
    assert sweep_universal_properties(max_size=3, max_balls=2).holds


def test_products_and_coproducts_of_finite_spaces_are_finite_spaces(rng):
    for _ in range(30):
        spaces = [random_space(rng, max_points=3, max_balls=3) for _ in range(2)]
        for built in (product(spaces), coproduct(spaces)):
            report = classify(built)
            assert report.s1 and report.s2 and report.s3 and report.s4


def test_augmented_constructions_contain_empty_set_and_universe():
    first = aug(2, [0])
    second = aug(1)
    for built in (augmented_product([first, second]), augmented_coproduct([first, second])):
        assert 0 in built and built.full in built


def test_naive_coproduct_fails_universal_property():
    first = aug(2, [0])
    second = aug(1)
    test_object = aug(2, [0])
    naive = naive_coproduct([first, second])
    assert naive.family == (0, m(0), m(2), m(0, 1), m(0, 1, 2))
    report = check_augmented_coproduct([first, second], naive, test_object)
    assert not report.holds
    assert report.counterexample["mediator"] == [0, 1, 0]
    assert report.counterexample["missing_preimage"] == [0, 2]
    assert check_augmented_coproduct([first, second], augmented_coproduct([first, second]), test_object).holds


def test_initial_structure_examples():
    target = aug(2, [0])
    assert initial_structure(2, [((0, 0), target)]).family == (0, m(0, 1))
    assert initial_structure(2, [((0, 1), target)]) == target
    assert initial_structure(2, []).family == (0, m(0, 1))


def test_initial_characterization():
    sinks = [((0, 1, 1), aug(2, [0])), ((1, 0, 0), aug(2, [1]))]
    report = check_initial_characterization(3, sinks, max_test_size=2)
    assert report.holds


def test_final_structure_examples():
    source = aug(2, [0])
    assert final_structure(2, [((0, 1), source)]) == source
    assert final_structure(2, [((0, 1), aug(2, [0])), ((0, 1), aug(2, [1]))]).family == (0, m(0, 1))
    with pytest.raises(SizeBoundExceededError):
        final_structure(5, [], Bounds(max_final_points=4))


def test_final_characterization():
    sources = [((0, 1), aug(2, [0])), ((2,), aug(1))]
    assert check_final_characterization(3, sources, max_test_size=2).holds


def test_structures_on_small_sets_are_unique():
    assert all_augmented_structures(0) == [empty_space()]
    assert [s.family for s in all_augmented_structures(1)] == [(0, m(0))]
    assert len(all_augmented_structures(2)) == 4


def test_verify_topologicity():
    report = verify_topologicity(max_size=2, max_codomain=2, max_sinks=2)
    assert report.holds
    assert report.details["fibre_counts"] == {0: 1, 1: 1, 2: 4}


def test_intersection_commutation(rng):
    point = new_space(1, [[0]])
    assert intersection_commutation_check([point, point], [[m(0)], [m(0)]])
    for _ in range(50):
        spaces = [random_space(rng, max_points=3, max_balls=4) for _ in range(2)]
        nests = [random_nest(rng, space) for space in spaces]
        length = min(len(nest) for nest in nests)
        assert intersection_commutation_check(spaces, [nest[:length] for nest in nests])

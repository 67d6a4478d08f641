import pytest

from errors import (
    BallNotSaturatedError,
    NotClosedError,
    NotContinuousError,
    NotSurjectiveError,
    SpaceMismatchError,
)
from finite_core import HierarchyReport, classify, is_nest, mask_of, new_space
from generators import random_closed_map, random_continuous_map, random_map, random_nest
from maps import (
    BallMap,
    check_quotient_extremality,
    compose,
    identity,
    is_ball_closed,
    is_ball_continuous,
    phi_family,
    phi_nest,
    psi_family,
    psi_nest,
    quotient,
    quotient_map,
    transfer_report,
)


def m(*points):
    return mask_of(points)


@pytest.fixture
def pair_space():
    return new_space(4, [[0, 1], [2, 3], [0, 1, 2, 3]])


def test_identity_is_continuous_and_closed(witness_space):
    f = identity(witness_space)
    assert is_ball_continuous(f)
    assert is_ball_closed(f)


def test_continuity_examples():
    space = new_space(2, [[0]])
    assert is_ball_continuous(BallMap(space, space, (0, 1)))
    constant = BallMap(new_space(2, [[0, 1]]), new_space(2, [[1]]), (0, 0))
    assert not is_ball_continuous(constant)
    assert transfer_report(constant).witnesses["continuous"] == m(1)


def test_closedness_examples():
    collapse = BallMap(new_space(2, [[0, 1]]), new_space(2, [[0]]), (0, 0))
    assert is_ball_closed(collapse)
    not_closed = BallMap(new_space(2, [[0, 1]]), new_space(2, [[0]]), (0, 1))
    assert not is_ball_closed(not_closed)
    assert transfer_report(not_closed).witnesses["closed"] == m(0, 1)


def test_map_json_round_trip(witness_space):
    f = BallMap(witness_space, new_space(2, [[0]]), (0, 0, 1))
    assert BallMap.from_json(f.to_json()) == f


def test_compose_identity_and_mismatch(rng):
    f = random_map(rng)
    assert compose(identity(f.codomain), f) == f
    assert compose(f, identity(f.domain)) == f
    other = new_space(f.codomain.universe_size + 1, [[0]])
    with pytest.raises(SpaceMismatchError):
        compose(identity(other), f)


def test_composition_preserves_continuity(rng):
    for _ in range(100):
        g = random_continuous_map(rng)
        f = random_continuous_map(rng, codomain=g.domain)
        assert is_ball_continuous(compose(g, f))


def test_composition_preserves_closedness(rng):
    for _ in range(100):
        f = random_closed_map(rng)
        g = random_closed_map(rng, domain=f.codomain)
        assert is_ball_closed(compose(g, f))


def test_image_and_preimage_families(pair_space):
    f = BallMap(pair_space, new_space(2, [[0]]), (0, 0, 1, 1))
    assert phi_family(f, pair_space.balls) == (m(0), m(1), m(0, 1))
    assert psi_family(f, [m(0), m(1)]) == (m(0, 1), m(2, 3))
    assert psi_family(BallMap(pair_space, new_space(3, [[0]]), (0, 0, 1, 1)), [m(2)]) == (0,)


def test_transfer_report_on_quotient(pair_space):
    report = transfer_report(quotient_map(pair_space, (0, 0, 1, 1)))
    assert report.cond_Beq and report.surjective
    assert report.cond_Bprime_eq and report.poset_iso
    assert report.finite_to_one and report.codomain_s2
    assert report.witnesses == {}


def test_codomain_s2_comes_from_classifying_the_codomain(pair_space, monkeypatch):
    f = quotient_map(pair_space, (0, 0, 1, 1))
    assert transfer_report(f).codomain_s2 == classify(f.codomain).s2

    def not_s2(space, bounds=None):
        return HierarchyReport(
            s1=True, s2=False, s3=False, s4=False, s1c=True, s2c=False, s3c=False, s4c=False,
            witnesses={name: (m(0, 1),) for name in ("s2", "s3", "s4", "s2c", "s3c", "s4c")},
        )

    monkeypatch.setattr("maps.classify", not_s2)
    report = transfer_report(f)
    assert not report.codomain_s2
    assert report.witnesses["codomain_s2"] == m(0, 1)


def test_transfer_report_on_identity(witness_space):
    assert all(transfer_report(identity(witness_space)).flags().values())


def test_transfer_report_on_injection():
    f = BallMap(new_space(1, [[0]]), new_space(2, [[0], [1]]), (0,))
    report = transfer_report(f)
    assert report.finite_to_one
    assert not report.surjective
    assert report.witnesses["surjective"] == m(1)


def test_transfer_report_implications(rng):
    for _ in range(400):
        f = random_map(rng, max_points=3, max_balls=4) if rng.random() < 0.5 else random_continuous_map(rng)
        report = transfer_report(f)
        if report.cond_Beq:
            assert report.continuous and report.cond_Brl
        if report.cond_Beq and report.surjective:
            assert report.cond_Bprime_eq and report.poset_iso
        assert set(report.witnesses) == {name for name, value in report.flags().items() if not value}


def test_quotient_examples(pair_space):
    assert quotient(pair_space, (0, 0, 1, 1)).balls == (m(0), m(1), m(0, 1))
    assert quotient(pair_space, (0, 1, 2, 3)) == pair_space
    with pytest.raises(BallNotSaturatedError) as excinfo:
        quotient(new_space(2, [[0]]), (0, 0))
    assert excinfo.value.ball == m(0)
    with pytest.raises(NotSurjectiveError):
        quotient(pair_space, (0, 0, 2, 2))


def test_quotient_is_coarsest(pair_space):
    assert check_quotient_extremality(pair_space, (0, 0, 1, 1)) == {
        "preimage_family_equal": True,
        "removal_breaks": True,
        "addition_breaks": True,
    }


def test_psi_and_phi_nest_examples(pair_space):
    f = quotient_map(pair_space, (0, 0, 1, 1))
    assert psi_nest(f, [m(0)]).members == (m(0, 1),)
    assert psi_nest(f, [m(0), m(0, 1)]).members == (m(0, 1), m(0, 1, 2, 3))
    assert phi_nest(f, [m(2, 3), m(0, 1, 2, 3)]).members == (m(1), m(0, 1))


def test_nest_maps_require_structure():
    not_continuous = BallMap(new_space(2, [[0, 1]]), new_space(2, [[1]]), (0, 0))
    with pytest.raises(NotContinuousError):
        psi_nest(not_continuous, [m(1)])
    not_closed = BallMap(new_space(2, [[0, 1]]), new_space(2, [[0]]), (0, 1))
    with pytest.raises(NotClosedError):
        phi_nest(not_closed, [m(0, 1)])


def test_random_nests_transfer(rng):
    for _ in range(100):
        f = random_continuous_map(rng)
        assert is_nest(f.domain, psi_nest(f, random_nest(rng, f.codomain)).members)
        g = random_closed_map(rng)
        assert is_nest(g.codomain, phi_nest(g, random_nest(rng, g.domain)).members)

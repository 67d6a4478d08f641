import pytest

from errors import BallSpaceError
from verifiers import (
    SWEEP_BALLS,
    SWEEP_SIZE,
    VERIFIERS,
    VerificationResult,
    VerifyOptions,
    list_verifiers,
    run_verifier,
    sweep_scale,
)

QUICK = {
    "finite-triviality": VerifyOptions(random=60),
    "prop-union": VerifyOptions(random=40),
    "fun-s1c": VerifyOptions(random=40),
    "bfb": VerifyOptions(random=60, seed=7),
    "transfer": VerifyOptions(random=40),
    "prodcoprod": VerifyOptions(random=20, max_size=2, max_balls=1),
    "topologicity": VerifyOptions(max_size=1),
    "example31": VerifyOptions(max_i=3),
    "omega-coproduct": VerifyOptions(),
    "ultrametric": VerifyOptions(random=1000),
    "barbell": VerifyOptions(random=20),
    "symbolic-nests": VerifyOptions(),
}


def test_registry_lists_every_id():
    assert list_verifiers() == sorted(QUICK)
    assert set(VERIFIERS) == set(QUICK)


@pytest.mark.parametrize("verify_id", sorted(QUICK))
def test_verifier_passes(verify_id):
    result = run_verifier(verify_id, QUICK[verify_id])
    assert result.passed, result.counterexample
    assert result.checked > 0
    assert result.to_json()["status"] == "pass"


def test_randomized_runs_are_reproducible():
    first = run_verifier("prop-union", VerifyOptions(random=15, seed=3))
    second = run_verifier("prop-union", VerifyOptions(random=15, seed=3))
    assert first == second


def test_example_certificate_is_reported():
    result = run_verifier("example31", VerifyOptions(max_i=3))
    assert result.details["holds"]
    assert result.checked == 3 + 3 + 3


def test_sweeps_default_to_the_exhaustive_scale():
    assert sweep_scale(VerifyOptions()) == (SWEEP_SIZE, SWEEP_BALLS) == (3, 3)
    assert sweep_scale(VerifyOptions(max_size=2, max_balls=1)) == (2, 1)


def test_unknown_id():
    with pytest.raises(BallSpaceError):
        run_verifier("riemann")


def test_failure_json():
    result = VerificationResult("bfb", False, 4, {"base": {"n": 1, "balls": [[0]]}})
    assert result.status == "fail"
    assert result.to_json() == {
        "id": "bfb",
        "status": "fail",
        "checked": 4,
        "counterexample": {"base": {"n": 1, "balls": [[0]]}},
        "details": {},
    }


@pytest.mark.slow
@pytest.mark.parametrize(
    "verify_id, options",
    [
        ("finite-triviality", VerifyOptions()),
        ("bfb", VerifyOptions(random=500, seed=7)),
        ("prodcoprod", VerifyOptions()),
        ("topologicity", VerifyOptions()),
        ("example31", VerifyOptions(max_i=8)),
        ("ultrametric", VerifyOptions()),
        ("barbell", VerifyOptions()),
    ],
)
def test_acceptance_scale(verify_id, options):
    assert run_verifier(verify_id, options).passed

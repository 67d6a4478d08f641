"""
Registry of theorem checks behind the `verify` command.

Every verifier takes VerifyOptions and returns a VerificationResult. Randomized
verifiers draw from a numpy Generator seeded with options.seed, so two runs with
the same options report the same instances.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from cache_manager import get_cache_manager
from category import (
    all_spaces,
    coproduct,
    intersection_commutation_check,
    product,
    sweep_universal_properties,
    verify_topologicity,
)
from config import Bounds, get_bounds
from errors import BallSpaceError, NotConvexError
from finite_core import (
    FiniteBallSpace,
    HierarchyReport,
    classify,
    extract_base_subsystem,
    intersection_of,
    maximal_centered_systems,
    union_families,
)
from generators import (
    make_rng,
    random_ball,
    random_closed_map,
    random_continuous_map,
    random_convex_union,
    random_element,
    random_map,
    random_mask,
    random_nest,
    random_nonconvex_union,
    random_space,
    random_surjection,
)
from maps import (
    BallMap,
    check_quotient_extremality,
    compose,
    is_ball_closed,
    is_ball_continuous,
    phi_nest,
    psi_nest,
    transfer_report,
)
from ordered import (
    INF,
    LexGroupElement,
    OrderInterval,
    check_barbell_properties,
    intersects,
    nat_valuation,
    normalize_to_barbell,
    ultra_subset,
    ultrametric,
    union_contains,
)
from symbolic import (
    check_prefix_nested,
    coproduct_with_complete_component,
    example_certificate,
    final_segments,
    lex_ultra_nest,
    nest_intersection_empty,
    prime_gap_union,
)

logger = logging.getLogger(__name__)

# exhaustive scale of the universal property and topologicity sweeps
SWEEP_SIZE = 3
SWEEP_BALLS = 3
# sink codomains of the topologicity sweep; every structure on at most two points
SINK_CODOMAIN = 2


@dataclass(frozen=True)
class VerifyOptions:
    """Run parameters shared by every verifier; None falls back to the verifier's default."""
    seed: int = 0
    random: Optional[int] = None
    max_size: Optional[int] = None
    max_balls: Optional[int] = None
    max_i: Optional[int] = None
    bounds: Optional[Bounds] = None

    def count(self, default: int) -> int:
        return default if self.random is None else self.random


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of one verifier: pass/fail, instances checked and the first counterexample."""
    verify_id: str
    passed: bool
    checked: int
    counterexample: Optional[Dict[str, Any]] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_json(self) -> Dict[str, Any]:
        return {
            "id": self.verify_id,
            "status": self.status,
            "checked": self.checked,
            "counterexample": self.counterexample,
            "details": self.details,
        }


Verifier = Callable[[VerifyOptions], VerificationResult]
VERIFIERS: Dict[str, Verifier] = {}


def register(verify_id: str) -> Callable[[Verifier], Verifier]:
    def wrap(function: Verifier) -> Verifier:
        VERIFIERS[verify_id] = function
        return function
    return wrap


def list_verifiers() -> List[str]:
    return sorted(VERIFIERS)


def run_verifier(verify_id: str, options: Optional[VerifyOptions] = None) -> VerificationResult:
    """
    Run one registered verifier.

    Args:
        verify_id: Registry key, e.g. "bfb"
        options: Seed, counts and size bounds

    Returns:
        VerificationResult

    Raises:
        BallSpaceError: If the id is unknown or a bound is exceeded
    """
    if verify_id not in VERIFIERS:
        raise BallSpaceError(f"unknown verify id {verify_id!r}; choose from {', '.join(list_verifiers())}")
    options = options or VerifyOptions()
    result = VERIFIERS[verify_id](options)
    logger.info("verify %s: %s after %d checks", verify_id, result.status, result.checked)
    return result


def _bounds(options: VerifyOptions) -> Bounds:
    return options.bounds or get_bounds()


def sweep_scale(options: VerifyOptions) -> Tuple[int, int]:
    """(max points, max balls) of the exhaustive sweeps, from the options or the defaults."""
    return options.max_size or SWEEP_SIZE, options.max_balls or SWEEP_BALLS


def _fail(verify_id: str, checked: int, **counterexample: Any) -> VerificationResult:
    return VerificationResult(verify_id, False, checked, counterexample)


def _holds(report: HierarchyReport, names: Sequence[str]) -> bool:
    flags = report.flags()
    return all(flags[name] for name in names)


@register("finite-triviality")
def verify_finite_triviality(options: VerifyOptions) -> VerificationResult:
    """S1-S4 and S1^c hold on random finite spaces; S2^c is nontrivial on three points."""
    rng = make_rng(options.seed)
    cache = get_cache_manager()
    bounds = _bounds(options)
    count = options.count(1000)
    for index in range(count):
        space = random_space(rng, max_points=6, max_balls=options.max_balls or 12)
        report = cache.classify(space, bounds)
        if not (_holds(report, ("s1", "s2", "s3", "s4", "s1c")) and report.is_consistent()):
            return _fail("finite-triviality", index + 1, space=space.to_json(), report=report.to_json())
    s2c = {classify(space, bounds).s2c for space in all_spaces(3, 3)}
    if s2c != {True, False}:
        return _fail("finite-triviality", count, reason="S2^c is not split on three points", seen=sorted(s2c))
    return VerificationResult("finite-triviality", True, count, details={"s2c_values_on_three_points": sorted(s2c)})


@register("prop-union")
def verify_prop_union(options: VerifyOptions) -> VerificationResult:
    """The union of two families of balls keeps S1, S2 and S4 on a common universe."""
    rng = make_rng(options.seed)
    cache = get_cache_manager()
    bounds = _bounds(options)
    count = options.count(200)
    for index in range(count):
        first = random_space(rng, max_points=6, max_balls=options.max_balls or 6)
        second = random_space(rng, max_balls=options.max_balls or 6, universe_size=first.universe_size)
        union = union_families(first, second)
        report = cache.classify(union, bounds)
        if not _holds(report, ("s1", "s2", "s4")):
            return _fail(
                "prop-union", index + 1,
                first=first.to_json(), second=second.to_json(), flags=report.flags(),
            )
    return VerificationResult("prop-union", True, count)


@register("fun-s1c")
def verify_fun_s1c(options: VerifyOptions) -> VerificationResult:
    """f-un closures are S1^c and the closure is extensive, idempotent and union closed."""
    rng = make_rng(options.seed)
    cache = get_cache_manager()
    bounds = _bounds(options)
    count = options.count(200)
    for index in range(count):
        space = random_space(rng, max_points=4, max_balls=options.max_balls or 4)
        closure = cache.f_un_closure(space, bounds)
        problems = []
        if not cache.classify(closure, bounds).s1c:
            problems.append("closure is not S1^c")
        if not space.ball_set <= closure.ball_set:
            problems.append("closure drops a ball")
        if cache.f_un_closure(closure, bounds) != closure:
            problems.append("closure is not idempotent")
        if any(left | right not in closure for left in closure.balls for right in closure.balls):
            problems.append("closure is not union closed")
        if problems:
            return _fail("fun-s1c", index + 1, space=space.to_json(), closure=closure.to_json(), problems=problems)
    return VerificationResult("fun-s1c", True, count)


@register("bfb")
def verify_bfb(options: VerifyOptions) -> VerificationResult:
    """
    Base subsystems of maximal centered systems of the f-un closure keep the intersection.

    Each instance draws a base space and one of the maximal centered systems of
    its closure, then compares the intersection of the extracted base balls with
    the intersection of the system.
    """
    rng = make_rng(options.seed)
    cache = get_cache_manager()
    bounds = _bounds(options)
    count = options.count(500)
    for index in range(count):
        base = random_space(rng, max_points=4, max_balls=options.max_balls or 5)
        closure = cache.f_un_closure(base, bounds)
        systems = maximal_centered_systems(closure)
        system = systems[int(rng.integers(0, len(systems)))]
        subsystem = extract_base_subsystem(base, system, closure)
        if intersection_of(subsystem) != intersection_of(system):
            return _fail(
                "bfb", index + 1,
                base=base.to_json(),
                system=list(system),
                subsystem=list(subsystem.members),
            )
    return VerificationResult("bfb", True, count)


def _transfer_problems(f: BallMap, rng) -> List[str]:
    report = transfer_report(f)
    problems = []
    if report.cond_Beq and not (report.continuous and report.cond_Brl):
        problems.append("(B=) without continuity")
    if report.cond_Bprime_eq and not report.closed:
        problems.append("(B'=) without closedness")
    if report.cond_Beq and report.surjective and not (report.poset_iso and report.closed):
        problems.append("surjective (B=) map is not a ball poset isomorphism")
    try:
        if report.continuous:
            psi_nest(f, random_nest(rng, f.codomain))
        if report.closed:
            phi_nest(f, random_nest(rng, f.domain))
    except BallSpaceError as exc:
        problems.append(f"nest transport failed: {exc}")
    return problems


@register("transfer")
def verify_transfer(options: VerifyOptions) -> VerificationResult:
    """
    Transfer conditions, composition lemmas, nest transport and quotient extremality.
    """
    rng = make_rng(options.seed)
    bounds = _bounds(options)
    count = options.count(200)
    for index in range(count):
        f = random_map(rng) if index % 2 else random_continuous_map(rng)
        problems = _transfer_problems(f, rng)

        inner = random_continuous_map(rng)
        outer = random_continuous_map(rng, codomain=inner.domain)
        if not is_ball_continuous(compose(inner, outer)):
            problems.append("composite of continuous maps is not continuous")
        first = random_closed_map(rng)
        second = random_closed_map(rng, domain=first.codomain)
        if not is_ball_closed(compose(second, first)):
            problems.append("composite of closed maps is not closed")

        n = int(rng.integers(1, 6))
        m = int(rng.integers(1, n + 1))
        table = random_surjection(rng, n, m)
        targets = [random_mask(rng, m) for _ in range(int(rng.integers(1, 4)))]
        saturated = FiniteBallSpace(
            n, tuple(sum(1 << point for point in range(n) if target >> table[point] & 1) for target in targets)
        )
        extremality = check_quotient_extremality(saturated, table, m, bounds)
        if not all(extremality.values()):
            problems.append(f"quotient is not extremal: {extremality}")
        if problems:
            return _fail("transfer", index + 1, map=f.to_json(), problems=problems)
    return VerificationResult("transfer", True, count)


@register("prodcoprod")
def verify_products_and_coproducts(options: VerifyOptions) -> VerificationResult:
    """Exhaustive universal properties, intersection identities and finite triviality of products."""
    bounds = _bounds(options)
    size, balls = sweep_scale(options)
    sweep = sweep_universal_properties(size, balls, bounds)
    if not sweep.holds:
        return VerificationResult("prodcoprod", False, sweep.checked, sweep.counterexample)
    rng = make_rng(options.seed)
    cache = get_cache_manager()
    count = options.count(100)
    for index in range(count):
        spaces = [random_space(rng, max_points=3, max_balls=3) for _ in range(2)]
        nests = [random_nest(rng, space) for space in spaces]
        length = max(len(nest) for nest in nests)
        padded = [nest + (nest[-1],) * (length - len(nest)) for nest in nests]
        if not intersection_commutation_check(spaces, padded):
            return _fail(
                "prodcoprod", sweep.checked + index + 1,
                spaces=[space.to_json() for space in spaces], nests=[list(nest) for nest in padded],
            )
        for built in (product(spaces, bounds), coproduct(spaces, bounds)):
            if not _holds(cache.classify(built, bounds), ("s1", "s2", "s3", "s4")):
                return _fail(
                    "prodcoprod", sweep.checked + index + 1,
                    spaces=[space.to_json() for space in spaces], construction=built.to_json(),
                )
    return VerificationResult(
        "prodcoprod", True, sweep.checked + count, details={"cones_and_cocones": sweep.checked}
    )


@register("topologicity")
def verify_topological_category(options: VerifyOptions) -> VerificationResult:
    size, _ = sweep_scale(options)
    report = verify_topologicity(size, min(size, SINK_CODOMAIN), 2, _bounds(options))
    return VerificationResult("topologicity", report.holds, report.checked, report.counterexample, report.details)


@register("example31")
def verify_prime_gap_example(options: VerifyOptions) -> VerificationResult:
    """The prime-gap certificate: incomparable balls, exact unions, empty nest, nonempty prefixes."""
    max_i = options.max_i or 8
    certificate = example_certificate(max_i, _bounds(options))
    checked = len(certificate["incomparable"]) + len(certificate["unions"]) + len(certificate["prefix_intersections"])
    if not certificate["holds"]:
        return VerificationResult("example31", False, checked, certificate)
    return VerificationResult("example31", True, checked, details=certificate)


@register("omega-coproduct")
def verify_omega_coproduct(options: VerifyOptions) -> VerificationResult:
    """
    A complete component keeps the coproduct nest nonempty; two final-segment
    components leave it empty.
    """
    bounds = _bounds(options)
    point = FiniteBallSpace(1, (1,))
    with_point = coproduct_with_complete_component(final_segments(), point, bounds=bounds)
    both_open = coproduct_with_complete_component(final_segments(), final_segments(), bounds=bounds)
    details = {"with_complete_component": with_point.to_json(), "two_final_segments": both_open.to_json()}
    passed = (
        not with_point.empty and with_point.prefix_consistent
        and both_open.empty and both_open.prefix_consistent
    )
    if not passed:
        return VerificationResult("omega-coproduct", False, 2, details)
    return VerificationResult("omega-coproduct", True, 2, details=details)


def _ultrametric_problem(x: LexGroupElement, y: LexGroupElement, z: LexGroupElement) -> Optional[str]:
    zero = LexGroupElement.zero()
    if (ultrametric(x, y) == INF) != (x == y):
        return "u(x, y) is infinite exactly when x = y"
    if ultrametric(x, y) != ultrametric(y, x):
        return "u is symmetric"
    if ultrametric(x, z) < min(ultrametric(x, y), ultrametric(y, z)):
        return "ultrametric triangle law"
    if (nat_valuation(x) == INF) != (x == zero):
        return "v(x) is infinite exactly when x = 0"
    if nat_valuation(x - y) < min(nat_valuation(x), nat_valuation(y)):
        return "v(x - y) >= min(v(x), v(y))"
    low, high = sorted((_absolute(x), _absolute(y)))
    if nat_valuation(low) < nat_valuation(high):
        return "0 <= a <= b implies v(a) >= v(b)"
    return None


def _absolute(x: LexGroupElement) -> LexGroupElement:
    return -x if x.sign() < 0 else x


@register("ultrametric")
def verify_ultrametric(options: VerifyOptions) -> VerificationResult:
    """Ultrametric and valuation laws on random triples; meeting balls are comparable."""
    rng = make_rng(options.seed)
    count = options.count(100_000)
    for index in range(count):
        x, y, z = (random_element(rng) for _ in range(3))
        problem = _ultrametric_problem(x, y, z)
        if problem is not None:
            return _fail("ultrametric", index + 1, law=problem, elements=[x.to_json(), y.to_json(), z.to_json()])
    pairs = max(1, count // 10)
    for index in range(pairs):
        first, second = random_ball(rng), random_ball(rng)
        if intersects(first, second) and not (ultra_subset(first, second) or ultra_subset(second, first)):
            return _fail("ultrametric", count + index + 1, law="meeting balls are comparable",
                         balls=[first.to_json(), second.to_json()])
    return VerificationResult("ultrametric", True, count + pairs, details={"triples": count, "ball_pairs": pairs})


def _lower_anchor(component) -> LexGroupElement:
    return component.lo if isinstance(component, OrderInterval) else component.center


def _upper_anchor(component) -> LexGroupElement:
    return component.hi if isinstance(component, OrderInterval) else component.center


@register("barbell")
def verify_barbell(options: VerifyOptions) -> VerificationResult:
    """Convex unions normalize to bar-bells; non-convex ones raise with a separating witness."""
    rng = make_rng(options.seed)
    count = options.count(200)
    convex = [random_convex_union(rng, max_components=6) for _ in range(count)]
    properties = check_barbell_properties(convex)
    if not (properties["at_most_three"] and properties["coincidences_are_singletons"]
            and properties["intersections_closed"]):
        return VerificationResult("barbell", False, count, {"properties": properties})
    for index in range(count):
        components = random_nonconvex_union(rng, max_components=6)
        try:
            barbell = normalize_to_barbell(components)
        except NotConvexError as exc:
            witness = exc.witness
            if (union_contains(components, witness)
                    or not _upper_anchor(exc.below) < witness < _lower_anchor(exc.above)):
                return _fail("barbell", count + index + 1, reason="witness does not separate",
                             witness=witness.to_json())
            continue
        return _fail("barbell", count + index + 1, reason="non-convex union was normalized",
                     barbell=barbell.to_json())
    return VerificationResult("barbell", True, 2 * count, details={"properties": properties})


@register("symbolic-nests")
def verify_symbolic_nests(options: VerifyOptions) -> VerificationResult:
    """Emptiness verdicts of the symbolic nests, prefix nesting and limit membership."""
    bounds = _bounds(options)
    expected = {
        "prime-gap": (prime_gap_union(), True),
        "final-segments": (final_segments(), True),
        "lex-all-ones": (lex_ultra_nest([], [1]), True),
        "lex-eventually-zero": (lex_ultra_nest([1, 1], [0]), False),
    }
    verdicts: Dict[str, Any] = {}
    for name, (descriptor, empty) in expected.items():
        certificate = nest_intersection_empty(descriptor, bounds)
        verdicts[name] = {"empty": certificate.empty, "rule": certificate.rule}
        if certificate.empty != empty or not check_prefix_nested(descriptor, 64, bounds):
            return _fail("symbolic-nests", len(verdicts), nest=name, certificate=certificate.to_json())
        if not empty and not all(descriptor.member(n).contains(certificate.limit) for n in range(64)):
            return _fail("symbolic-nests", len(verdicts), nest=name, reason="limit escapes a prefix ball")
    return VerificationResult("symbolic-nests", True, len(verdicts), details=verdicts)

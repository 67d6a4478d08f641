"""
Command-line front end of the ball space workbench.

Subcommands: classify, construct, verify, search, demo, corpus. Every subcommand
prints human status lines by default and a single JSON document with --json.
Exit codes: 0 pass, 1 failed verification or counterexample, 2 usage or input error.
"""
import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

from category import augment, coproduct, final_structure, initial_structure, product
from config import get_bounds
from corpus_manager import CorpusManager
from errors import BallSpaceError
from finite_core import FLAG_NAMES, classify, f_un_closure, points_of, union_families
from maps import quotient
from search import DEFAULT_BUDGET, list_searches, run_search
from space_io import (
    dumps,
    load_arrows,
    load_quotient_input,
    load_space,
    load_spaces,
    write_json,
)
from symbolic import example_certificate
from verifiers import VerifyOptions, list_verifiers, run_verifier

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

CONSTRUCT_KINDS = ("product", "coproduct", "f-un", "union", "quotient", "initial", "final", "augment")


def _print_json(payload: Any):
    print(json.dumps(payload, indent=2, sort_keys=True, default=str))


def _banner(title: str):
    print("=" * 60)
    print(title)
    print("=" * 60)


def _family_text(family) -> str:
    return json.dumps([list(points_of(member)) for member in family])


def cmd_classify(args: argparse.Namespace) -> int:
    bounds = get_bounds().override(max_balls=args.max_balls)
    space = load_space(args.file)
    report = classify(space, bounds)
    if args.json:
        _print_json({"file": args.file, "space": space.to_json(), **report.to_json()})
        return EXIT_OK
    _banner(f"Hierarchy of {args.file} ({space.universe_size} points, {len(space)} balls)")
    for name in FLAG_NAMES:
        if name in report.witnesses:
            print(f"FAILED: {name}  witness {_family_text(report.witnesses[name])}")
        else:
            print(f"OK: {name}")
    return EXIT_OK


def _exactly(kind: str, items: List[Any], count: int) -> List[Any]:
    if len(items) != count:
        raise BallSpaceError(f"construct {kind} needs exactly {count} input space(s), got {len(items)}")
    return items


def _single_input(kind: str, inputs: List[str]) -> str:
    if len(inputs) != 1:
        raise BallSpaceError(f"construct {kind} takes one input file, got {len(inputs)}")
    return inputs[0]


def build_construction(kind: str, inputs: List[str]) -> Any:
    """
    Build the requested object from input files.

    Args:
        kind: One of CONSTRUCT_KINDS
        inputs: Input file paths

    Returns:
        FiniteBallSpace or AugmentedBallSpace

    Raises:
        BallSpaceError: On a wrong number of inputs or invalid input
    """
    bounds = get_bounds()
    if kind in ("product", "coproduct", "union", "f-un"):
        spaces = [space for path in inputs for space in load_spaces(path)]
        if kind == "product":
            return product(spaces, bounds)
        if kind == "coproduct":
            return coproduct(spaces, bounds)
        if kind == "union":
            first, second = _exactly(kind, spaces, 2)
            return union_families(first, second)
        return f_un_closure(_exactly(kind, spaces, 1)[0], bounds)
    path = _single_input(kind, inputs)
    if kind == "augment":
        return augment(load_space(path))
    if kind == "quotient":
        space, table, target_size = load_quotient_input(path)
        return quotient(space, table, target_size)
    if kind == "initial":
        universe_size, sinks = load_arrows(path)
        return initial_structure(universe_size, sinks)
    if kind == "final":
        universe_size, sources = load_arrows(path)
        return final_structure(universe_size, sources, bounds)
    raise BallSpaceError(f"unknown construction {kind!r}; choose from {', '.join(CONSTRUCT_KINDS)}")


def cmd_construct(args: argparse.Namespace) -> int:
    try:
        result = build_construction(args.kind, args.inputs)
    except BallSpaceError as e:
        raise BallSpaceError(f"construct {args.kind}: {e}") from e
    if args.output:
        write_json(args.output, result)
        if args.json:
            _print_json({"output": args.output, "object": result.to_json()})
        else:
            print(f"OK: wrote {args.kind} to {args.output}")
        return EXIT_OK
    print(dumps(result))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    options = VerifyOptions(
        seed=args.seed,
        random=args.random,
        max_size=args.max_size,
        max_balls=args.max_balls,
        max_i=args.max_i,
    )
    result = run_verifier(args.verify_id, options)
    if args.json:
        _print_json(result.to_json())
    else:
        _banner(f"Verify: {args.verify_id}")
        if result.passed:
            print(f"OK: pass after {result.checked} checks")
        else:
            print(f"FAILED: counterexample after {result.checked} checks")
            _print_json(result.counterexample)
    return EXIT_OK if result.passed else EXIT_FAILURE


def cmd_search(args: argparse.Namespace) -> int:
    result = run_search(args.target, args.budget, args.seed, args.max_size)
    if args.json:
        _print_json(result.to_json())
        return EXIT_OK
    _banner(f"Search: {args.target}")
    if result.found:
        print(f"OK: witness found after {result.attempts} attempts")
        _print_json(result.witness)
    else:
        print(f"none found in budget ({result.attempts} attempts)")
    return EXIT_OK


def _print_certificate(certificate: Dict[str, Any]):
    _banner(f"Prime-gap balls B_1 .. B_{certificate['max_i']}")
    for index, ball in certificate["balls"].items():
        print(f"B_{index} = {ball['text']}")
    print()
    for report in certificate["incomparable"]:
        status = "OK" if report["incomparable"] else "FAILED"
        print(f"{status}: B_{report['i']} vs B_{report['j']}  x={report['x']}  y={report['y']}")
    for index, holds in certificate["unions"].items():
        print(f"{'OK' if holds else 'FAILED'}: B_{index} u B_{int(index) + 1} = (0, 1/p_{index})")
    nest = certificate["nest"]
    print(f"{'OK' if nest['empty'] else 'FAILED'}: nest intersection empty ({nest['rule']})")
    for index, entry in certificate["prefix_intersections"].items():
        status = "OK" if entry["nonempty"] and entry["matches"] else "FAILED"
        print(f"{status}: intersection of the first {index} members = {entry['set']}")


def cmd_demo(args: argparse.Namespace) -> int:
    certificate = example_certificate(args.max_i or 8)
    if args.json:
        _print_json(certificate)
    else:
        _print_certificate(certificate)
        print()
        print("OK: certificate holds" if certificate["holds"] else "FAILED: certificate does not hold")
    return EXIT_OK if certificate["holds"] else EXIT_FAILURE


def cmd_corpus(args: argparse.Namespace) -> int:
    corpus = CorpusManager(args.corpus_dir)
    health = corpus.check_corpus_health()
    stats = corpus.get_corpus_stats()
    if args.json:
        _print_json({"health": health, "stats": stats, "fixtures": corpus.list_fixtures()})
    else:
        _banner("Fixture Corpus")
        print(f"Directory: {stats['corpus_directory']}")
        print(f"Status: {health['status']} ({stats['fixture_count']} fixtures)")
        for name in corpus.list_fixtures():
            print(f"  {name}")
        for warning in health["warnings"]:
            print(f"WARNING: {warning}")
    return EXIT_OK if health["status"] == "healthy" else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print a single JSON document")
    common.add_argument("--verbose", action="store_true", help="Log progress at INFO level")

    parser = argparse.ArgumentParser(prog="ballspace", description="Executable workbench for ball spaces.")
    commands = parser.add_subparsers(dest="command", required=True)

    classify = commands.add_parser("classify", parents=[common], help="Hierarchy flags of a space file")
    classify.add_argument("file")
    classify.add_argument("--max-balls", type=int, help="Override the enumeration bound on balls")
    classify.set_defaults(handler=cmd_classify)

    construct = commands.add_parser("construct", parents=[common], help="Build a space from input files")
    construct.add_argument("kind", choices=CONSTRUCT_KINDS)
    construct.add_argument("inputs", nargs="+")
    construct.add_argument("--output", "-o", help="Write the result to this file")
    construct.set_defaults(handler=cmd_construct)

    verify = commands.add_parser("verify", parents=[common], help="Check a theorem on exhaustive or seeded instances")
    verify.add_argument("verify_id", choices=list_verifiers())
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--random", type=int, help="Number of random instances")
    verify.add_argument("--max-size", type=int)
    verify.add_argument("--max-balls", type=int)
    verify.add_argument("--max-i", type=int)
    verify.set_defaults(handler=cmd_verify)

    search = commands.add_parser("search", parents=[common], help="Search for a witness")
    search.add_argument("target", choices=list_searches())
    search.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    search.add_argument("--seed", type=int, default=0)
    search.add_argument("--max-size", type=int)
    search.set_defaults(handler=cmd_search)

    demo = commands.add_parser("demo", parents=[common], help="Print the prime-gap certificate")
    demo.add_argument("--max-i", type=int)
    demo.set_defaults(handler=cmd_demo)

    corpus = commands.add_parser("corpus", parents=[common], help="Fixture corpus status")
    corpus.add_argument("--corpus-dir")
    corpus.set_defaults(handler=cmd_corpus)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    handler: Callable[[argparse.Namespace], int] = args.handler
    try:
        return handler(args)
    except BallSpaceError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

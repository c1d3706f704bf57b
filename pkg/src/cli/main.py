"""The regmark command-line entry point."""

import argparse
import json
import logging
import sys
from typing import List, Optional, TextIO

from pydantic import ValidationError

from src.cli.commands import COMMANDS, EXIT_FAILED, EXIT_USAGE, UsageError
from src.cli.run_config import RunConfig
from src.core.config import settings
from src.core.errors import (
    GraphParseError,
    NumericalError,
    OrderingError,
    PartitionError,
    StatementError,
    UnknownNodeError,
)


logger = logging.getLogger(__name__)

USAGE_ERRORS = (GraphParseError, StatementError, UnknownNodeError, OrderingError, UsageError)
SEMANTIC_ERRORS = (PartitionError, NumericalError)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=["text", "json"], default="text", help="Output format")
    common.add_argument(
        "--ordering",
        default=None,
        help='Explicit component ordering, e.g. "1,2,3,4;5,7;6;8,9"',
    )
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    parser = argparse.ArgumentParser(
        prog="regmark",
        description="Regression graphs: validation, pairwise Markov properties, separation and graphoid checks.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_options()

    def add(name: str, description: str, graph: bool = True) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(name, parents=[common], description=description, help=description)
        if graph:
            sub.add_argument("graph", help="Graph file (text or JSON); - reads stdin")
        return sub

    add("validate", "Check regression-graph constraints")

    pairwise = add("pairwise", "List the statements of one pairwise property")
    pairwise.add_argument("--property", dest="prop", default="p1", choices=["p1", "p2", "p3", "p4"])

    separate = add("separate", "Separation query A | B | C")
    separate.add_argument("--a", required=True, help="Comma-separated node ids")
    separate.add_argument("--b", required=True, help="Comma-separated node ids")
    separate.add_argument("--c", default="", help="Comma-separated node ids (default: empty)")

    verify = add("verify", "Run a verification check")
    check = verify.add_mutually_exclusive_group(required=True)
    check.add_argument("--theorem1", dest="check", action="store_const", const="theorem1",
                       help="Compare the closures of the four pairwise properties")
    check.add_argument("--soundness", dest="check", action="store_const", const="soundness",
                       help="Check every pairwise statement by separation")
    check.add_argument("--gaussian", dest="check", action="store_const", const="gaussian",
                       help="Check every pairwise statement on a generated Gaussian model")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--tolerance", type=float, default=settings.CI_TOLERANCE)
    verify.add_argument("--threshold", type=float, default=settings.DEPENDENCE_THRESHOLD)
    verify.add_argument("--budget", type=int, default=settings.BUDGET, help="Max statements per closure")
    verify.add_argument("--max-iterations", type=int, default=settings.MAX_ITERATIONS)

    order = add("order", "Print a valid ordering of the components")
    order.add_argument("--all", dest="all_orderings", action="store_true",
                       help=f"List up to {settings.ORDERING_LIMIT} valid orderings")

    sets = add("sets", "Print par, ant and pst of a node pair")
    sets.add_argument("--pair", required=True, help="Two node ids, e.g. 2,4")

    add("saturate", "Emit the completed graph")

    random = add("random", "Emit a random regression graph", graph=False)
    random.add_argument("--nodes", type=int, required=True)
    random.add_argument("--seed", type=int, default=0)

    derive = add("derive", "Derive a statement from premises with the graphoid rules", graph=False)
    derive.add_argument("--goal", required=True, help='Statement such as "2|4|5,6,8,9"')
    derive.add_argument("--premises", required=True, help="Statement file; - reads stdin")
    derive.add_argument("--budget", dest="derive_budget", type=int, default=settings.DERIVE_BUDGET)

    add("report", "Table of the four conditioning sets for every missing edge")
    return parser


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else settings.LOG_LEVEL,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """
    Run one command.

    Returns:
        Exit code: 0 pass, 1 failed check or invalid graph, 2 usage or input
        error, 3 inconclusive
    """
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    _configure_logging(args.verbose)
    try:
        config = RunConfig(**{k: v for k, v in vars(args).items() if v is not None})
        result = COMMANDS[config.command](config)
    except ValidationError as exc:
        print(f"error: {exc.errors()[0]['msg']}", file=sys.stderr)
        return EXIT_USAGE
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SEMANTIC_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED

    if config.fmt == "json" and result.payload is not None:
        out.write(json.dumps(result.payload, sort_keys=True, indent=2) + "\n")
    else:
        out.write(result.text)
    logger.debug("%s exited with %d", config.command, result.code)
    return result.code

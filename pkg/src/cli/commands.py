"""
Command handlers. Each takes a RunConfig and returns a CommandResult;
printing and exit codes are handled by ``src.cli.main``.
"""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional

from src.analyzers.equivalence import get_equivalence_verifier
from src.analyzers.markov_properties import ALL_PROPERTIES, get_markov_generator, report_to_records, report_to_text
from src.analyzers.separation import get_separation_checker
from src.cli.run_config import RunConfig
from src.core.config import settings
from src.core.random_graphs import random_graph
from src.core.regression_graph import ComponentOrdering, RegressionGraph
from src.core.statements import format_node_set, sort_statements
from src.inference.graphoid_engine import get_graphoid_engine
from src.parsers.graph_parser import get_graph_parser
from src.parsers.statement_parser import format_statements, parse_ordering, parse_statement, read_statements
from src.stats.gaussian_oracle import get_gaussian_oracle


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


@dataclass
class CommandResult:
    """Exit code plus the JSON payload and text rendering of a command."""

    code: int
    payload: Any
    text: str


class UsageError(Exception):
    """Raised for arguments that are well-formed but unusable for the command."""


def _load_graph(config: RunConfig) -> RegressionGraph:
    graph = get_graph_parser().parse_file(config.graph)
    logger.info("loaded %s: %d node(s), %d edge(s)", config.graph, len(graph.nodes), len(graph.edges))
    return graph


def _invalid(graph: RegressionGraph) -> Optional[CommandResult]:
    violations = graph.validate()
    if not violations:
        return None
    text = "".join(f"{v.code}: {v}\n" for v in violations)
    return CommandResult(EXIT_FAILED, {"valid": False, "violations": [v.to_dict() for v in violations]}, text)


def _ordering(graph: RegressionGraph, config: RunConfig) -> ComponentOrdering:
    if config.ordering is None:
        return graph.valid_ordering()
    return graph.require_ordering(parse_ordering(config.ordering))


def cmd_validate(config: RunConfig) -> CommandResult:
    graph = _load_graph(config)
    return _invalid(graph) or CommandResult(EXIT_OK, {"valid": True, "violations": []}, "valid\n")


def cmd_pairwise(config: RunConfig) -> CommandResult:
    graph = _load_graph(config)
    invalid = _invalid(graph)
    if invalid:
        return invalid
    ordering = _ordering(graph, config)
    statements = get_markov_generator().pairwise_statements(graph, config.prop, ordering)
    text = format_statements(statements)
    payload = {
        "property": config.prop.value,
        "ordering": ordering.to_text(),
        "statements": [s.to_dict() for s in sort_statements(statements)],
    }
    return CommandResult(EXIT_OK, payload, text)


def cmd_separate(config: RunConfig) -> CommandResult:
    graph = _load_graph(config)
    invalid = _invalid(graph)
    if invalid:
        return invalid
    result = get_separation_checker().m_separated(graph, config.a, config.b, config.c)
    if result.separated:
        text = "separated\n"
    else:
        text = "connected\nwitness: " + " ".join(str(n) for n in result.witness) + "\n"
    payload = {
        "A": sorted(config.a),
        "B": sorted(config.b),
        "C": sorted(config.c),
        "separated": result.separated,
        "witness": list(result.witness or ()),
    }
    return CommandResult(EXIT_OK, payload, text)


def _verify_theorem1(graph: RegressionGraph, config: RunConfig) -> CommandResult:
    if len(graph.nodes) > settings.THEOREM_MAX_NODES:
        raise UsageError(
            f"--theorem1 is limited to {settings.THEOREM_MAX_NODES} nodes (graph has {len(graph.nodes)}); "
            "raise REGMARK_THEOREM_MAX_NODES to override"
        )
    orderings = [_ordering(graph, config)] if config.ordering else None
    report = get_equivalence_verifier().verify_equivalence(
        graph, orderings, max_statements=config.budget, max_iterations=config.max_iterations
    )
    lines = []
    for entry in report["orderings"]:
        sizes = " ".join(f"{p}={n}" for p, n in entry["sizes"].items())
        lines.append(f"ordering {entry['ordering']}: {sizes} equal={entry['equal']}")
    if report["inconclusive"]:
        lines.append("inconclusive")
        code = EXIT_INCONCLUSIVE
    elif report["equal"]:
        lines.append("closures equal")
        code = EXIT_OK
    else:
        lines.append("closures differ")
        code = EXIT_FAILED
    return CommandResult(code, {"check": "theorem1", **report}, "\n".join(lines) + "\n")


def _verify_soundness(graph: RegressionGraph, config: RunConfig) -> CommandResult:
    ordering = _ordering(graph, config)
    checker = get_separation_checker()
    reports = [checker.verify_soundness(graph, p, ordering) for p in ALL_PROPERTIES]
    failures = sum(len(r["failures"]) for r in reports)
    lines = [f"{r['property']}: {r['total'] - len(r['failures'])}/{r['total']} separated" for r in reports]
    for r in reports:
        for failure in r["failures"]:
            lines.append(f"  {r['property']} fails: {_format_failure(failure)}")
    lines.append("all pass" if not failures else f"{failures} failure(s)")
    payload = {"check": "soundness", "ordering": ordering.to_text(), "properties": reports, "passed": not failures}
    return CommandResult(EXIT_FAILED if failures else EXIT_OK, payload, "\n".join(lines) + "\n")


def _verify_gaussian(graph: RegressionGraph, config: RunConfig) -> CommandResult:
    ordering = _ordering(graph, config)
    oracle = get_gaussian_oracle()
    model = oracle.generate_model(graph, ordering, config.seed)
    generator = get_markov_generator()

    reports = {}
    for prop in ALL_PROPERTIES:
        statements = generator.pairwise_statements(graph, prop, ordering)
        reports[prop.value] = oracle.verify_statements(model, statements, config.tolerance)
    genericity = oracle.check_genericity(model, graph, config.threshold)
    failing = sum(r["failing"] for r in reports.values())

    lines = [f"{p}: {r['holding']}/{r['total']} hold" for p, r in reports.items()]
    for p, r in reports.items():
        for result in r["results"]:
            if not result["holds"]:
                lines.append(f"  {p} fails: {_format_failure(result)} max_abs={result['max_abs']:.3e}")
    lines.append(f"dependent coupled pairs: {genericity['dependent']}/{genericity['pairs']}")
    lines.append("all pass" if not failing else f"{failing} failure(s)")
    payload = {
        "check": "gaussian",
        "provenance": model.provenance,
        "properties": reports,
        "genericity": genericity,
        "passed": not failing,
    }
    return CommandResult(EXIT_FAILED if failing else EXIT_OK, payload, "\n".join(lines) + "\n")


def cmd_verify(config: RunConfig) -> CommandResult:
    graph = _load_graph(config)
    invalid = _invalid(graph)
    if invalid:
        return invalid
    checks: Dict[str, Callable[[RegressionGraph, RunConfig], CommandResult]] = {
        "theorem1": _verify_theorem1,
        "soundness": _verify_soundness,
        "gaussian": _verify_gaussian,
    }
    return checks[config.check](graph, config)


def cmd_order(config: RunConfig) -> CommandResult:
    graph = _load_graph(config)
    invalid = _invalid(graph)
    if invalid:
        return invalid
    if config.all_orderings:
        orderings = graph.valid_orderings(settings.ORDERING_LIMIT)
    else:
        orderings = [_ordering(graph, config)]
    text = "".join(o.to_text() + "\n" for o in orderings)
    payload = {
        "orderings": [o.to_list() for o in orderings],
        "node_order": list(orderings[0].node_order),
        "components": [c.to_dict() for c in graph.components()],
    }
    return CommandResult(EXIT_OK, payload, text)


def cmd_sets(config: RunConfig) -> CommandResult:
    graph = _load_graph(config)
    invalid = _invalid(graph)
    if invalid:
        return invalid
    i, j = config.pair
    try:
        sets = graph.pair_sets(i, j, _ordering(graph, config))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return CommandResult(EXIT_OK, {"pair": [i, j], **sets.to_dict()}, sets.format() + "\n")


def cmd_saturate(config: RunConfig) -> CommandResult:
    graph = _load_graph(config)
    invalid = _invalid(graph)
    if invalid:
        return invalid
    saturated = graph.saturate(_ordering(graph, config))
    return _graph_result(saturated, config)


def cmd_random(config: RunConfig) -> CommandResult:
    try:
        graph = random_graph(config.nodes, config.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return _graph_result(graph, config)


def cmd_derive(config: RunConfig) -> CommandResult:
    goal = parse_statement(config.goal)
    premises = read_statements(config.premises)
    trace = get_graphoid_engine().derive(goal, premises, budget=config.derive_budget)
    if trace is None:
        return CommandResult(EXIT_FAILED, {"goal": goal.format(), "derived": False, "steps": []}, "not derived\n")
    return CommandResult(EXIT_OK, {"goal": goal.format(), "derived": True, "steps": trace.to_list()}, trace.format())


def cmd_report(config: RunConfig) -> CommandResult:
    graph = _load_graph(config)
    invalid = _invalid(graph)
    if invalid:
        return invalid
    report = get_markov_generator().statement_report(graph, _ordering(graph, config))
    return CommandResult(EXIT_OK, report_to_records(report), report_to_text(report))


def _graph_result(graph: RegressionGraph, config: RunConfig) -> CommandResult:
    """Graphs are emitted in their own file format; ``--format json`` selects the JSON graph format."""
    parser = get_graph_parser()
    if config.fmt == "json":
        return CommandResult(EXIT_OK, None, parser.serialize(graph, "json") + "\n")
    return CommandResult(EXIT_OK, None, parser.serialize(graph, "text"))


def _format_failure(entry: dict) -> str:
    return f"{format_node_set(entry['A'])} | {format_node_set(entry['B'])} | {format_node_set(entry['C'])}"



COMMANDS: Dict[str, Callable[[RunConfig], CommandResult]] = {
    "validate": cmd_validate,
    "pairwise": cmd_pairwise,
    "separate": cmd_separate,
    "verify": cmd_verify,
    "order": cmd_order,
    "sets": cmd_sets,
    "saturate": cmd_saturate,
    "random": cmd_random,
    "derive": cmd_derive,
    "report": cmd_report,
}

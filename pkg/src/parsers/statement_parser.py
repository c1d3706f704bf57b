"""
Readers and writers for statement files and ordering overrides.
"""

import sys
from pathlib import Path
from typing import Iterable, List, Optional, Union

from src.core.errors import GraphParseError, StatementError
from src.core.regression_graph import ComponentOrdering
from src.core.statements import IndependenceStatement, sort_statements


def _parse_node_set(token: str, line: Optional[int] = None) -> frozenset:
    token = token.strip()
    if token in ("", "-"):
        return frozenset()
    try:
        nodes = frozenset(int(part) for part in token.split(","))
    except ValueError:
        raise GraphParseError(f"bad node set {token!r}", line) from None
    if any(n < 1 for n in nodes):
        raise GraphParseError(f"node ids must be positive in {token!r}", line)
    return nodes


def parse_node_set(token: str) -> frozenset:
    """Parse ``5,6,8`` (or ``-`` / empty for the empty set)."""
    return _parse_node_set(token)


def parse_statement(text: str, line: Optional[int] = None) -> IndependenceStatement:
    """
    Parse ``A | B | C`` into an oriented statement; C may be omitted.

    Raises:
        GraphParseError: on malformed input or invalid sets
    """
    parts = text.split("|")
    if len(parts) not in (2, 3):
        raise GraphParseError(f"expected 'A | B | C', got {text.strip()!r}", line)
    sets = [_parse_node_set(part, line) for part in parts]
    if len(sets) == 2:
        sets.append(frozenset())
    try:
        return IndependenceStatement(*sets)
    except StatementError as exc:
        raise GraphParseError(str(exc), line) from exc


def parse_statements(text: str) -> List[IndependenceStatement]:
    """Parse a statement file: one statement per line, ``#`` comments."""
    statements = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            statements.append(parse_statement(line, number))
    return statements


def read_statements(path: Union[str, Path]) -> List[IndependenceStatement]:
    """Read a statement file; ``-`` reads standard input."""
    if str(path) == "-":
        return parse_statements(sys.stdin.read())
    try:
        return parse_statements(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise GraphParseError(f"cannot read {path}: {exc.strerror}") from exc


def format_statements(statements: Iterable[IndependenceStatement]) -> str:
    """One canonical statement per line, in deterministic order."""
    ordered = sort_statements({s.canonical() for s in statements})
    return "".join(s.format() + "\n" for s in ordered)


def parse_ordering(text: str) -> ComponentOrdering:
    """Parse an ordering override such as ``1,2,3,4;5,7;6;8,9``."""
    components = []
    for part in text.split(";"):
        nodes = _parse_node_set(part)
        if not nodes:
            raise GraphParseError(f"empty component in ordering {text!r}")
        components.append(nodes)
    return ComponentOrdering(tuple(components))

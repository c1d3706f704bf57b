"""Helpers shared by test modules."""

from src.core.statements import IndependenceStatement
from src.parsers.statement_parser import parse_statement


def stmt(text: str) -> IndependenceStatement:
    """Shorthand for an oriented statement, e.g. ``stmt("2|4|5,6")``."""
    return parse_statement(text)

import pytest

from src.core.errors import GraphParseError, StatementError
from src.core.statements import IndependenceStatement, format_node_set
from src.parsers.statement_parser import (
    format_statements,
    parse_node_set,
    parse_ordering,
    parse_statement,
    parse_statements,
    read_statements,
)


def test_parse_statement():
    statement = parse_statement("2 | 4 | 5,6,8,9")
    assert statement == IndependenceStatement(frozenset({2}), frozenset({4}), frozenset({5, 6, 8, 9}))
    assert statement.format() == "2 | 4 | 5,6,8,9"


def test_parse_statement_keeps_orientation():
    statement = parse_statement("4|2,7|5,6,8,9")
    assert statement.a == {4} and statement.b == {2, 7}
    assert not statement.is_canonical
    assert statement.canonical() == parse_statement("2,7 | 4 | 5,6,8,9")


def test_empty_conditioning_set():
    assert parse_statement("1 | 2").c == frozenset()
    assert parse_statement("1 | 2 | -").c == frozenset()
    assert parse_statement("1 | 2 | -").format() == "1 | 2 | -"


@pytest.mark.parametrize("text", ["1 2 3", "1 | 2 | 3 | 4", "a | 2", "1 | 1 | 3", " | 2 | 3", "1 | 2 | 0"])
def test_malformed_statements(text):
    with pytest.raises(GraphParseError):
        parse_statement(text)


def test_statement_invariants():
    with pytest.raises(StatementError):
        IndependenceStatement(frozenset({1}), frozenset(), frozenset())
    with pytest.raises(StatementError):
        IndependenceStatement(frozenset({1}), frozenset({2}), frozenset({2}))
    assert IndependenceStatement.of({4}, {2}).same_as(IndependenceStatement.of({2}, {4}))


def test_statement_files(data_dir):
    statements = read_statements(data_dir / "p1_pair24.txt")
    assert [s.format() for s in statements] == ["2 | 4 | 5,6,7,8,9", "4 | 7 | 5,6,8,9"]


def test_parse_statements_reports_line():
    with pytest.raises(GraphParseError) as info:
        parse_statements("# header\n1 | 2\n1 | x\n")
    assert info.value.line == 3


def test_format_statements_is_canonical_and_sorted():
    text = format_statements([parse_statement("4 | 2 | 5"), parse_statement("1 | 3"), parse_statement("2 | 4 | 5")])
    assert text == "1 | 3 | -\n2 | 4 | 5\n"


def test_node_sets_and_orderings():
    assert parse_node_set("5,6,8") == {5, 6, 8}
    assert parse_node_set("") == frozenset()
    assert format_node_set([9, 5]) == "5,9"
    ordering = parse_ordering("1,2,3,4;5,7;6;8,9")
    assert ordering.to_text() == "1,2,3,4;5,7;6;8,9"
    with pytest.raises(GraphParseError):
        parse_ordering("1,2;;3")

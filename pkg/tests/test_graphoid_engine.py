import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from src.analyzers.equivalence import example_chains
from src.core.errors import StatementError
from src.inference.graphoid_engine import ALL_RULES, ProofTrace, Rule, get_graphoid_engine

from .strategies import statements
from .utils import stmt


@pytest.fixture
def engine():
    return get_graphoid_engine()


@pytest.mark.parametrize(
    "rule, premises, expected",
    [
        (Rule.SYMMETRY, ["1|2|3"], ["2|1|3"]),
        (Rule.DECOMPOSITION, ["1|2,3|4"], ["1|2|4", "1|3|4"]),
        (Rule.WEAK_UNION, ["1|2,3|4"], ["1|2|3,4", "1|3|2,4"]),
        (Rule.CONTRACTION, ["1|2|3,4", "1|3|4"], ["1|2,3|4"]),
        (Rule.INTERSECTION, ["1|2|3,4", "1|3|2,4"], ["1|2,3|4"]),
        (Rule.COMPOSITION, ["1|2|4", "1|3|4"], ["1|2,3|4"]),
    ],
)
def test_apply_rule(engine, rule, premises, expected):
    assert engine.apply_rule(rule, [stmt(p) for p in premises]) == {stmt(e) for e in expected}


def test_binary_rules_try_both_premise_orders(engine):
    assert engine.apply_rule(Rule.CONTRACTION, [stmt("1|3|4"), stmt("1|2|3,4")]) == {stmt("1|2,3|4")}


def test_apply_rule_shape_mismatch(engine):
    assert engine.apply_rule(Rule.CONTRACTION, [stmt("1|2"), stmt("3|4")]) == set()
    assert engine.apply_rule(Rule.DECOMPOSITION, [stmt("1|2|3")]) == set()
    with pytest.raises(StatementError):
        engine.apply_rule(Rule.COMPOSITION, [stmt("1|2")])
    with pytest.raises(StatementError):
        engine.apply_rule(Rule.SYMMETRY, [stmt("1|2"), stmt("1|3")])


def test_closure_of_nothing(engine):
    result = engine.closure([])
    assert len(result) == 0
    assert result.saturated
    assert result.iterations == 0


def test_closure_contains_both_orientations(engine):
    result = engine.closure([stmt("1|2,3|4")])
    assert result.saturated
    assert stmt("1|2|4") in result
    assert stmt("3|1|2,4") in result
    assert all(s.is_canonical for s in result.statements)


def test_closure_rejects_nodes_outside_universe(engine):
    with pytest.raises(StatementError):
        engine.closure([stmt("1|5")], universe={1, 2, 3})


def test_restricted_rule_set(engine):
    premises = [stmt("1|2|4"), stmt("1|3|4")]
    assert stmt("1|2,3|4") in engine.closure(premises)
    assert stmt("1|2,3|4") not in engine.closure(premises, rules=[Rule.DECOMPOSITION, Rule.WEAK_UNION])


def test_closure_budgets(engine):
    cut = engine.closure([stmt("1|2,3|4")], max_statements=2)
    assert not cut.saturated
    assert len(cut) == 2
    assert not engine.closure([stmt("1|2,3|4")], max_iterations=1).saturated


def test_implies(engine):
    assert engine.implies([stmt("1|2|3"), stmt("1|3")], stmt("1|2,3"))
    assert not engine.implies([stmt("1|2|3")], stmt("1|2"))


@given(st.lists(statements(), min_size=1, max_size=3))
@hypothesis_settings(max_examples=25)
def test_indexed_closure_matches_brute_force(premises):
    engine = get_graphoid_engine()
    result = engine.closure(premises)
    assert result.saturated
    assert result.statements == engine.naive_closure(premises)


@given(st.lists(statements(), min_size=1, max_size=3), statements())
@hypothesis_settings(max_examples=25)
def test_closure_is_idempotent_and_monotone(premises, extra):
    engine = get_graphoid_engine()
    universe = {1, 2, 3, 4}
    first = engine.closure(premises, universe)
    assert engine.closure(first.statements, universe).statements == first.statements
    assert first.statements <= engine.closure(premises + [extra], universe).statements


def test_derive_past_to_anteriors(engine):
    chain = next(c for c in example_chains() if c.name == "p1=>p2")
    trace = engine.derive(chain.goal, chain.premises)
    assert trace is not None
    assert trace.rules_used == [Rule.SYMMETRY, Rule.CONTRACTION, Rule.DECOMPOSITION]
    assert trace.steps[-1].conclusion.same_as(chain.goal)
    assert engine.replay(trace)
    assert trace.format().startswith("1. symmetry: 2 | 4 | 5,6,7,8,9  =>  4 | 2 | 5,6,7,8,9")
    assert trace.to_list()[1]["rule"] == "contraction"


def test_derive_goal_among_premises(engine):
    trace = engine.derive(stmt("2|1|3"), [stmt("1|2|3")])
    assert trace.steps == ()
    assert trace.format() == ""
    assert engine.replay(trace)


def test_derive_without_premises(engine):
    assert engine.derive(stmt("1|2"), []) is None


def test_derive_respects_rule_set(engine):
    premises = [stmt("1|2|4"), stmt("1|3|4")]
    assert engine.derive(stmt("1|2,3|4"), premises) is not None
    assert engine.derive(stmt("1|2,3|4"), premises, rules=[r for r in ALL_RULES if r is not Rule.COMPOSITION]) is None


def test_replay_rejects_tampered_traces(engine):
    chain = next(c for c in example_chains() if c.name == "p1=>p2")
    trace = engine.derive(chain.goal, chain.premises)
    assert not engine.replay(ProofTrace(trace.goal, trace.axioms, trace.steps[:-1]))
    assert not engine.replay(ProofTrace(trace.goal, (), trace.steps))


def test_singleton_transitivity(engine):
    assert engine.check_singleton_transitivity([]) == []
    violations = engine.check_singleton_transitivity([stmt("2|3"), stmt("2|3|1")])
    assert [v.to_dict() for v in violations] == [{"i": 1, "j": 2, "k": 3, "c": []}]
    assert engine.check_singleton_transitivity([stmt("2|3"), stmt("2|3|1"), stmt("1|2")]) == []


def test_contraction_on_example_pair(engine):
    found = engine.apply_rule(Rule.CONTRACTION, [stmt("4|2|5,6,7,8,9"), stmt("4|7|5,6,8,9")])
    assert found == {stmt("4|2,7|5,6,8,9")}


def test_repeated_intersection(engine):
    first = engine.apply_rule(Rule.INTERSECTION, [stmt("2|8|5,6,9"), stmt("2|9|5,6,8")])
    assert first == {stmt("2|8,9|5,6")}
    second = engine.apply_rule(Rule.INTERSECTION, [stmt("2|8,9|5,6"), stmt("2|6|5,8,9")])
    assert second == {stmt("2|6,8,9|5")}


def test_closure_of_single_statement(engine):
    result = engine.closure([stmt("2|1")], universe={1, 2})
    assert result.statements == frozenset({stmt("1|2")})

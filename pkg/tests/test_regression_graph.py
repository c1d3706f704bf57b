import pytest
from hypothesis import given

from src.core.errors import OrderingError, PartitionError, UnknownNodeError
from src.core.regression_graph import ComponentOrdering, Edge, EdgeType, RegressionGraph

from .strategies import regression_graphs


def codes(graph: RegressionGraph) -> set:
    return {v.code for v in graph.validate()}


def test_figure1_is_valid(figure1):
    assert figure1.validate() == []
    assert figure1.is_valid()


def test_figure1_partition_and_components(figure1):
    u, v = figure1.partition
    assert u == {1, 2, 3, 4, 5, 6, 7}
    assert v == {8, 9}
    found = [(sorted(c.nodes), c.kind, c.role) for c in figure1.components()]
    assert found == [
        ([1, 2, 3, 4], "dashed", "response"),
        ([5, 7], "dashed", "response"),
        ([6], "singleton", "response"),
        ([8, 9], "full", "context"),
    ]


def test_figure1_canonical_ordering(figure1):
    ordering = figure1.valid_ordering()
    assert ordering.to_text() == "1,2,3,4;5,7;6;8,9"
    assert ordering.node_order == (1, 2, 3, 4, 5, 7, 6, 8, 9)
    assert figure1.check_ordering(ordering) == []


def test_figure1_node_sets(figure1):
    assert figure1.par(2) == {5}
    assert figure1.par(4) == {6}
    assert figure1.ant(2) == {5, 6, 8, 9}
    assert figure1.ant(4) == {6, 8, 9}
    assert figure1.ancestors(2) == {5, 6, 9}
    assert figure1.pst(2) == {5, 6, 7, 8, 9}
    assert figure1.pst(5) == {6, 8, 9}
    assert figure1.pst(8) == set()


def test_figure1_pair_sets(figure1):
    sets = figure1.pair_sets(2, 4)
    assert sets.par == {5, 6}
    assert sets.ant == {5, 6, 8, 9}
    assert sets.pst == {5, 6, 7, 8, 9}
    assert sets.format() == "par={5,6} ant={5,6,8,9} pst={5,6,7,8,9}"
    assert figure1.pair_sets(4, 2) == sets


def test_pair_sets_rejects_bad_queries(figure1):
    with pytest.raises(ValueError):
        figure1.pair_sets(2, 2)
    with pytest.raises(UnknownNodeError):
        figure1.pair_sets(2, 42)
    with pytest.raises(UnknownNodeError):
        figure1.par(0)


def test_edge_normalization():
    assert Edge.dashed(3, 1) == Edge.dashed(1, 3)
    assert (Edge.full(9, 8).a, Edge.full(9, 8).b) == (8, 9)
    arrow = Edge.arrow(5, 2)
    assert (arrow.a, arrow.b) == (5, 2)
    assert arrow.has_head_at(2) and not arrow.has_head_at(5)
    assert Edge.dashed(1, 2).has_head_at(1)
    assert not Edge.full(1, 2).has_head_at(2)
    assert str(arrow) == "5 -> 2"


def test_arrow_into_full_line_node():
    graph = RegressionGraph.from_edges([Edge.full(1, 2), Edge.arrow(3, 1)])
    assert "arrow_into_full" in codes(graph)


def test_dashed_line_adjacent_to_full_line():
    graph = RegressionGraph.from_edges([Edge.full(1, 2), Edge.dashed(2, 3)])
    assert {"full_dashed_adjacent", "mixed_component"} <= codes(graph)


def test_arrow_inside_component():
    graph = RegressionGraph.from_edges([Edge.dashed(1, 2), Edge.dashed(2, 3), Edge.arrow(1, 3)])
    assert "arrow_inside_component" in codes(graph)


def test_component_cycle():
    graph = RegressionGraph.from_edges([Edge.dashed(1, 2), Edge.dashed(3, 4), Edge.arrow(3, 1), Edge.arrow(2, 4)])
    assert "component_cycle" in codes(graph)
    with pytest.raises(OrderingError):
        graph.valid_ordering()


def test_self_loop_and_multiple_edges():
    assert "self_loop" in codes(RegressionGraph(frozenset({1}), frozenset({Edge.arrow(1, 1)})))
    doubled = RegressionGraph.from_edges([Edge.dashed(1, 2), Edge.arrow(1, 2)])
    assert "multiple_edges" in codes(doubled)


def test_empty_and_single_node_graphs():
    empty = RegressionGraph(frozenset(), frozenset())
    assert empty.is_valid()
    assert empty.valid_ordering().components == ()
    single = RegressionGraph.from_edges([], nodes=[1])
    assert single.is_valid()
    assert single.partition == (frozenset(), frozenset({1}))


def test_response_declaration_for_isolated_node():
    graph = RegressionGraph.from_edges([], nodes=[1, 2], response=[1])
    assert graph.partition == (frozenset({1}), frozenset({2}))
    assert graph.valid_ordering().to_text() == "1;2"


def test_context_declaration():
    graph = RegressionGraph.from_edges([Edge.arrow(2, 1)], nodes=[3], context=[2])
    assert graph.is_valid()
    assert graph.partition == (frozenset({1, 3}), frozenset({2}))


def test_contradicting_context_declaration():
    graph = RegressionGraph.from_edges([Edge.arrow(2, 1)], context=[1])
    assert "context_declared_arrowhead" in codes(graph)
    with pytest.raises(PartitionError):
        graph.resolve_partition()


def test_valid_orderings_enumerates_alternatives():
    graph = RegressionGraph.from_edges([Edge.arrow(3, 1), Edge.arrow(3, 2)])
    orderings = [o.to_text() for o in graph.valid_orderings()]
    assert orderings == ["1;2;3", "2;1;3"]
    assert graph.valid_orderings(limit=1)[0].to_text() == "1;2;3"


def test_check_ordering_reports_bad_orderings(figure1):
    reversed_order = ComponentOrdering(tuple(reversed(figure1.valid_ordering().components)))
    assert {"arrow_against_order", "response_after_context"} <= {v.code for v in figure1.check_ordering(reversed_order)}

    wrong = ComponentOrdering((frozenset({1, 2}), frozenset({3, 4}), frozenset({5, 7}), frozenset({6}), frozenset({8, 9})))
    assert [v.code for v in figure1.check_ordering(wrong)] == ["not_components"]
    with pytest.raises(OrderingError):
        figure1.require_ordering(wrong)


def test_uncoupled_pairs(figure1):
    pairs = figure1.uncoupled_pairs()
    assert len(pairs) == 36 - 12
    assert (2, 4) in pairs and (1, 2) not in pairs
    assert not figure1.is_complete()


def test_saturate_figure1(figure1):
    saturated = figure1.saturate()
    assert saturated.is_valid()
    assert saturated.is_complete()
    assert figure1.edges <= saturated.edges
    assert saturated.valid_ordering() == figure1.valid_ordering()
    assert saturated.saturate() == saturated
    assert saturated.edge_between(2, 4).kind is EdgeType.DASHED
    assert saturated.edge_between(2, 7) == Edge.arrow(7, 2)


def test_saturate_merges_context_components():
    graph = RegressionGraph.from_edges([Edge.arrow(1, 3)], nodes=[2])
    assert [sorted(c.nodes) for c in graph.components() if c.role == "context"] == [[1], [2]]
    saturated = graph.saturate()
    assert saturated.is_valid()
    assert Edge.full(1, 2) in saturated.edges
    assert Edge.arrow(2, 3) in saturated.edges


@given(regression_graphs(max_nodes=8))
def test_generated_graphs_are_valid(graph):
    assert graph.validate() == []
    ordering = graph.valid_ordering()
    assert graph.check_ordering(ordering) == []
    u, v = graph.partition
    assert u | v == graph.nodes and not u & v


@given(regression_graphs(max_nodes=7))
def test_pair_sets_are_defined_for_every_pair(graph):
    nodes = sorted(graph.nodes)
    for i in nodes:
        assert i not in graph.ant(i)
        for j in nodes:
            if i < j:
                sets = graph.pair_sets(i, j)
                assert sets.par <= sets.ant
                assert not sets.pst & {i, j}


@given(regression_graphs(max_nodes=7))
def test_saturation_completes_and_keeps_response_order(graph):
    saturated = graph.saturate()
    assert saturated.is_valid()
    assert saturated.is_complete()
    assert saturated.saturate() == saturated

    def responses(g):
        return [c for c in g.valid_ordering().components if not c <= g.context_set]

    assert responses(saturated) == responses(graph)


def test_singleton_and_full_components():
    isolated = RegressionGraph.from_edges([], nodes=[1, 2, 3])
    assert [(sorted(c.nodes), c.kind) for c in isolated.components()] == [([1], "singleton"), ([2], "singleton"), ([3], "singleton")]
    chain = RegressionGraph.from_edges([Edge.full(1, 2), Edge.full(2, 3)])
    assert [(sorted(c.nodes), c.kind) for c in chain.components()] == [([1, 2, 3], "full")]


def test_outgoing_arrow_only_is_context():
    graph = RegressionGraph.from_edges([Edge.arrow(2, 1)])
    assert graph.partition == (frozenset({1}), frozenset({2}))


def test_forced_ordering():
    graph = RegressionGraph.from_edges([Edge.dashed(1, 2), Edge.arrow(3, 1), Edge.full(3, 4)])
    assert graph.valid_ordering().to_text() == "1,2;3,4"


def test_saturate_adds_arrows_from_context():
    graph = RegressionGraph.from_edges([Edge.dashed(1, 2)], nodes=[3])
    saturated = graph.saturate()
    assert saturated.edges == {Edge.dashed(1, 2), Edge.arrow(3, 1), Edge.arrow(3, 2)}

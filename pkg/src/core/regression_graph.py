"""
Regression graph model.
Mixed graphs with arrows, dashed lines and full lines, their structural checks,
connected components, valid orderings and the par/ant/pst node-set functions.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations, islice
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple

import networkx as nx

from src.core.errors import OrderingError, PartitionError, UnknownNodeError


logger = logging.getLogger(__name__)

NodeSet = FrozenSet[int]


class EdgeType(str, Enum):
    """The three edge types of a regression graph."""

    ARROW = "arrow"  # directed dependence of a response on a regressor
    DASHED = "dashed"  # undirected dependence within a joint response
    FULL = "full"  # undirected dependence among context variables


@dataclass(frozen=True)
class Edge:
    """
    One edge. For arrows ``a`` is the tail (regressor) and ``b`` the head
    (response); undirected edges are normalized so that ``a < b``.
    """

    kind: EdgeType
    a: int
    b: int

    def __post_init__(self):
        object.__setattr__(self, "kind", EdgeType(self.kind))
        if self.kind is not EdgeType.ARROW and self.a > self.b:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @classmethod
    def arrow(cls, tail: int, head: int) -> "Edge":
        return cls(EdgeType.ARROW, tail, head)

    @classmethod
    def dashed(cls, a: int, b: int) -> "Edge":
        return cls(EdgeType.DASHED, a, b)

    @classmethod
    def full(cls, a: int, b: int) -> "Edge":
        return cls(EdgeType.FULL, a, b)

    @property
    def pair(self) -> NodeSet:
        return frozenset((self.a, self.b))

    @property
    def is_undirected(self) -> bool:
        return self.kind is not EdgeType.ARROW

    def other(self, node: int) -> int:
        return self.b if node == self.a else self.a

    def has_head_at(self, node: int) -> bool:
        """True when the edge carries an arrowhead at ``node``."""
        if self.kind is EdgeType.ARROW:
            return node == self.b
        return self.kind is EdgeType.DASHED

    def sort_key(self) -> Tuple[str, int, int]:
        return (self.kind.value, self.a, self.b)

    def __str__(self) -> str:
        symbol = {EdgeType.ARROW: "->", EdgeType.DASHED: "~~", EdgeType.FULL: "--"}[self.kind]
        return f"{self.a} {symbol} {self.b}"


@dataclass(frozen=True)
class Violation:
    """A violated structural constraint, reported as data."""

    code: str
    message: str
    nodes: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "nodes": list(self.nodes)}

    def __str__(self) -> str:
        where = ",".join(str(n) for n in self.nodes)
        return f"{self.message} [{where}]" if where else self.message


@dataclass(frozen=True)
class Component:
    """A connected component of the graph with all arrows removed."""

    nodes: NodeSet
    kind: str  # "dashed", "full" or "singleton"
    role: str  # "response" or "context"

    @property
    def key(self) -> int:
        return min(self.nodes)

    def to_dict(self) -> dict:
        return {"nodes": sorted(self.nodes), "kind": self.kind, "role": self.role}


@dataclass(frozen=True)
class ComponentOrdering:
    """An ordered sequence g_1, ..., g_Q of components; responses first."""

    components: Tuple[NodeSet, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(frozenset(c) for c in self.components))

    @cached_property
    def order_index(self) -> Dict[int, int]:
        return {node: q for q, comp in enumerate(self.components) for node in comp}

    @cached_property
    def node_order(self) -> Tuple[int, ...]:
        """Complete valid node ordering: components in order, ids ascending inside."""
        return tuple(node for comp in self.components for node in sorted(comp))

    @cached_property
    def _node_position(self) -> Dict[int, int]:
        return {node: k for k, node in enumerate(self.node_order)}

    def position(self, node: int) -> int:
        if node not in self._node_position:
            raise UnknownNodeError(node)
        return self._node_position[node]

    def component_of(self, node: int) -> NodeSet:
        if node not in self.order_index:
            raise UnknownNodeError(node)
        return self.components[self.order_index[node]]

    def precedes(self, i: int, j: int) -> bool:
        """True when ``i`` comes before ``j`` in the complete node ordering."""
        return self.position(i) < self.position(j)

    def after(self, q: int) -> NodeSet:
        """Union of all components strictly after position ``q``."""
        return frozenset().union(*self.components[q + 1:])

    def to_text(self) -> str:
        return ";".join(",".join(str(n) for n in sorted(c)) for c in self.components)

    def to_list(self) -> List[List[int]]:
        return [sorted(c) for c in self.components]


@dataclass(frozen=True)
class PairSets:
    """par(i,j), ant(i,j) and pst(i,j) of a node pair."""

    par: NodeSet
    ant: NodeSet
    pst: NodeSet

    def to_dict(self) -> dict:
        return {"par": sorted(self.par), "ant": sorted(self.ant), "pst": sorted(self.pst)}

    def format(self) -> str:
        def braces(nodes: NodeSet) -> str:
            return "{" + ",".join(str(n) for n in sorted(nodes)) + "}"

        return f"par={braces(self.par)} ant={braces(self.ant)} pst={braces(self.pst)}"


@dataclass(frozen=True)
class RegressionGraph:
    """
    Simple mixed graph over node ids with arrows, dashed lines and full lines.

    ``context_decl`` is an optional explicit context set; ``response_decl``
    forces otherwise ambiguous nodes into the response set. Instances are
    immutable; derived structures are cached on first use. An empty context
    declaration is stored as None.
    """

    nodes: NodeSet
    edges: FrozenSet[Edge]
    context_decl: Optional[NodeSet] = None
    response_decl: NodeSet = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        context_decl = frozenset(self.context_decl) if self.context_decl is not None else frozenset()
        object.__setattr__(self, "context_decl", context_decl or None)
        object.__setattr__(self, "response_decl", frozenset(self.response_decl))

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[Edge],
        nodes: Iterable[int] = (),
        context: Optional[Iterable[int]] = None,
        response: Iterable[int] = (),
    ) -> "RegressionGraph":
        """Build a graph whose node set is ``nodes`` plus every edge endpoint."""
        edges = frozenset(edges)
        all_nodes = set(nodes)
        for edge in edges:
            all_nodes.update((edge.a, edge.b))
        return cls(
            frozenset(all_nodes),
            edges,
            None if context is None else frozenset(context),
            frozenset(response),
        )

    # ------------------------------------------------------------------
    # Adjacency
    # ------------------------------------------------------------------

    @cached_property
    def _by_pair(self) -> Dict[NodeSet, List[Edge]]:
        index: Dict[NodeSet, List[Edge]] = defaultdict(list)
        for edge in sorted(self.edges, key=Edge.sort_key):
            index[edge.pair].append(edge)
        return dict(index)

    @cached_property
    def _incident(self) -> Dict[int, Tuple[Edge, ...]]:
        incident: Dict[int, List[Edge]] = {node: [] for node in self.nodes}
        for edge in self.edges:
            if edge.a == edge.b:
                continue
            for node in (edge.a, edge.b):
                incident.setdefault(node, []).append(edge)
        return {
            node: tuple(sorted(found, key=lambda e: (e.other(node), e.sort_key())))
            for node, found in incident.items()
        }

    @cached_property
    def _parents(self) -> Dict[int, NodeSet]:
        parents: Dict[int, Set[int]] = {node: set() for node in self.nodes}
        for edge in self.edges:
            if edge.kind is EdgeType.ARROW and edge.a != edge.b:
                parents.setdefault(edge.b, set()).add(edge.a)
        return {node: frozenset(p) for node, p in parents.items()}

    @cached_property
    def _full_neighbors(self) -> Dict[int, NodeSet]:
        neighbors: Dict[int, Set[int]] = {node: set() for node in self.nodes}
        for edge in self.edges:
            if edge.kind is EdgeType.FULL and edge.a != edge.b:
                neighbors.setdefault(edge.a, set()).add(edge.b)
                neighbors.setdefault(edge.b, set()).add(edge.a)
        return {node: frozenset(n) for node, n in neighbors.items()}

    def check_node(self, node: int) -> None:
        if node not in self.nodes:
            raise UnknownNodeError(node)

    def edge_between(self, i: int, j: int) -> Optional[Edge]:
        found = self._by_pair.get(frozenset((i, j)))
        return found[0] if found else None

    def adjacent(self, i: int, j: int) -> bool:
        return i != j and frozenset((i, j)) in self._by_pair

    def incident_edges(self, node: int) -> Tuple[Edge, ...]:
        """Edges at ``node``, sorted by neighbor id for deterministic traversal."""
        self.check_node(node)
        return self._incident.get(node, ())

    def edges_of(self, kind: EdgeType) -> List[Edge]:
        return sorted((e for e in self.edges if e.kind is kind), key=Edge.sort_key)

    def uncoupled_pairs(self) -> List[Tuple[int, int]]:
        """All node pairs ``(i, j)`` with ``i < j`` that share no edge."""
        return [(i, j) for i, j in combinations(sorted(self.nodes), 2) if not self.adjacent(i, j)]

    def is_complete(self) -> bool:
        return not self.uncoupled_pairs()

    # ------------------------------------------------------------------
    # Structure checks
    # ------------------------------------------------------------------

    def validate(self) -> List[Violation]:
        """
        Check every regression-graph constraint.

        Returns:
            List of violations; empty iff the graph is a regression graph
            admitting a valid ordering.
        """
        violations: List[Violation] = []

        for edge in sorted(self.edges, key=Edge.sort_key):
            missing = sorted({edge.a, edge.b} - self.nodes)
            if missing:
                violations.append(Violation("unknown_node", f"edge {edge} uses an unknown node", tuple(missing)))
            if edge.a == edge.b:
                violations.append(Violation("self_loop", f"self-loop {edge}", (edge.a,)))

        for pair, found in sorted(self._by_pair.items(), key=lambda item: sorted(item[0])):
            if len(found) > 1:
                violations.append(Violation("multiple_edges", "more than one edge for a node pair", tuple(sorted(pair))))

        full_nodes = self._endpoints(EdgeType.FULL)
        dashed_nodes = self._endpoints(EdgeType.DASHED)
        heads = self._arrow_heads()

        for node in sorted(full_nodes & dashed_nodes):
            violations.append(Violation("full_dashed_adjacent", "dashed line is adjacent to a full line", (node,)))
        for node in sorted(full_nodes & heads):
            violations.append(Violation("arrow_into_full", "arrow points to a full-line node", (node,)))

        skeleton = self._undirected_skeleton()
        component_of: Dict[int, int] = {}
        for comp in nx.connected_components(skeleton):
            comp_key = min(comp)
            kinds = {e.kind for e in self.edges if e.is_undirected and e.a in comp and e.b in comp}
            if len(kinds) > 1:
                violations.append(Violation("mixed_component", "component mixes dashed and full lines", tuple(sorted(comp))))
            for node in comp:
                component_of[node] = comp_key

        arrow_dag = nx.DiGraph()
        arrow_dag.add_nodes_from(sorted(set(component_of.values())))
        for edge in self.edges_of(EdgeType.ARROW):
            if edge.a == edge.b or edge.a not in component_of or edge.b not in component_of:
                continue
            tail_comp, head_comp = component_of[edge.a], component_of[edge.b]
            if tail_comp == head_comp:
                violations.append(Violation("arrow_inside_component", "arrow inside one component", (edge.a, edge.b)))
            else:
                arrow_dag.add_edge(head_comp, tail_comp)
        if not nx.is_directed_acyclic_graph(arrow_dag):
            cycle = nx.find_cycle(arrow_dag)
            violations.append(Violation("component_cycle", "components form a directed cycle", tuple(u for u, _ in cycle)))

        violations.extend(self._declaration_violations(full_nodes, dashed_nodes, heads))

        if violations:
            logger.debug("graph has %d violation(s)", len(violations))
        return violations

    def is_valid(self) -> bool:
        return not self.validate()

    def _declaration_violations(self, full_nodes: Set[int], dashed_nodes: Set[int], heads: Set[int]) -> List[Violation]:
        violations = []
        if self.context_decl is not None:
            for node in sorted(full_nodes - self.context_decl):
                violations.append(Violation("context_full_undeclared", "full-line node not declared as context", (node,)))
            for node in sorted(self.context_decl & dashed_nodes):
                violations.append(Violation("context_declared_dashed", "context node has a dashed line", (node,)))
            for node in sorted(self.context_decl & heads):
                violations.append(Violation("context_declared_arrowhead", "context node has an incoming arrow", (node,)))
            for node in sorted(self.context_decl & self.response_decl):
                violations.append(Violation("declared_both", "node declared both context and response", (node,)))
        for node in sorted(self.response_decl & full_nodes):
            violations.append(Violation("response_declared_full", "response node has a full line", (node,)))
        return violations

    def _endpoints(self, kind: EdgeType) -> Set[int]:
        return {n for e in self.edges if e.kind is kind for n in (e.a, e.b)}

    def _arrow_heads(self) -> Set[int]:
        return {e.b for e in self.edges if e.kind is EdgeType.ARROW and e.a != e.b}

    def _undirected_skeleton(self) -> nx.Graph:
        skeleton = nx.Graph()
        skeleton.add_nodes_from(sorted(self.nodes))
        for edge in self.edges:
            if edge.is_undirected and edge.a != edge.b:
                skeleton.add_edge(edge.a, edge.b)
        return skeleton

    # ------------------------------------------------------------------
    # Partition and components
    # ------------------------------------------------------------------

    @cached_property
    def partition(self) -> Tuple[NodeSet, NodeSet]:
        return self.resolve_partition()

    def resolve_partition(self) -> Tuple[NodeSet, NodeSet]:
        """
        Split the node set into the response set u and the context set v.

        Nodes with no dashed line and no incoming arrow are context by default;
        an explicit context declaration wins for such ambiguous nodes.

        Returns:
            Tuple ``(u, v)``.
        """
        full_nodes = self._endpoints(EdgeType.FULL)
        dashed_nodes = self._endpoints(EdgeType.DASHED)
        heads = self._arrow_heads()

        conflicting = self.response_decl & full_nodes
        if conflicting:
            raise PartitionError(f"response nodes with full lines: {sorted(conflicting)}")

        if self.context_decl is not None:
            conflicting = self.context_decl & (dashed_nodes | heads)
            if conflicting:
                raise PartitionError(
                    f"declared context nodes with dashed lines or incoming arrows: {sorted(conflicting)}"
                )
            context = full_nodes | self.context_decl
        else:
            ambiguous = self.nodes - full_nodes - dashed_nodes - heads
            context = full_nodes | (ambiguous - self.response_decl)

        context = frozenset(context & self.nodes)
        return frozenset(self.nodes - context), context

    @property
    def context_set(self) -> NodeSet:
        return self.partition[1]

    @cached_property
    def _components(self) -> Tuple[Component, ...]:
        _, context = self.partition
        found = []
        for comp in nx.connected_components(self._undirected_skeleton()):
            comp = frozenset(comp)
            if len(comp) == 1:
                kind = "singleton"
            else:
                kinds = {e.kind for e in self.edges if e.is_undirected and e.pair <= comp}
                kind = "full" if kinds == {EdgeType.FULL} else "dashed"
            role = "context" if comp <= context else "response"
            found.append(Component(comp, kind, role))
        return tuple(sorted(found, key=lambda c: c.key))

    def components(self) -> List[Component]:
        """Connected components after removing all arrows, sorted by smallest node."""
        return list(self._components)

    def _component_dag(self) -> nx.DiGraph:
        """Precedence graph over components: an edge runs from earlier to later."""
        comps = self._components
        key_of = {node: c.key for c in comps for node in c.nodes}
        dag = nx.DiGraph()
        dag.add_nodes_from(c.key for c in comps)
        for edge in self.edges_of(EdgeType.ARROW):
            if key_of[edge.a] != key_of[edge.b]:
                dag.add_edge(key_of[edge.b], key_of[edge.a])
        responses = [c.key for c in comps if c.role == "response"]
        contexts = [c.key for c in comps if c.role == "context"]
        for r in responses:
            for v in contexts:
                dag.add_edge(r, v)
        return dag

    def _ordering_from_keys(self, keys: Iterable[int]) -> ComponentOrdering:
        nodes_of = {c.key: c.nodes for c in self._components}
        return ComponentOrdering(tuple(nodes_of[k] for k in keys))

    @cached_property
    def _canonical_ordering(self) -> ComponentOrdering:
        dag = self._component_dag()
        if not nx.is_directed_acyclic_graph(dag):
            raise OrderingError("components form a directed cycle; no valid ordering exists")
        return self._ordering_from_keys(nx.lexicographical_topological_sort(dag, key=lambda k: k))

    def valid_ordering(self) -> ComponentOrdering:
        """
        Canonical valid ordering: topological order of the component DAG with
        context components last, ties broken by the smallest contained node.
        """
        return self._canonical_ordering

    def valid_orderings(self, limit: int = 8) -> List[ComponentOrdering]:
        """Up to ``limit`` distinct valid orderings, canonical one first."""
        canonical = self.valid_ordering()
        found = [canonical]
        if limit <= 1:
            return found
        for keys in nx.all_topological_sorts(self._component_dag()):
            ordering = self._ordering_from_keys(keys)
            if ordering != canonical:
                found.append(ordering)
            if len(found) >= limit:
                break
        return found

    def check_ordering(self, ordering: ComponentOrdering) -> List[Violation]:
        """Violations of an explicitly supplied component ordering."""
        violations = []
        expected = {c.nodes for c in self._components}
        given = list(ordering.components)
        if len(set(given)) != len(given) or set(given) != expected:
            violations.append(Violation("not_components", "ordering does not list the connected components"))
            return violations
        index = ordering.order_index
        for edge in self.edges_of(EdgeType.ARROW):
            if index[edge.b] >= index[edge.a]:
                violations.append(
                    Violation("arrow_against_order", "arrow points to a component that is not earlier", (edge.a, edge.b))
                )
        _, context = self.partition
        seen_context = False
        for comp in given:
            if comp <= context:
                seen_context = True
            elif seen_context:
                violations.append(
                    Violation("response_after_context", "response component after a context component", tuple(sorted(comp)))
                )
        return violations

    def require_ordering(self, ordering: Optional[ComponentOrdering]) -> ComponentOrdering:
        if ordering is None:
            return self.valid_ordering()
        violations = self.check_ordering(ordering)
        if violations:
            raise OrderingError("; ".join(str(v) for v in violations))
        return ordering

    # ------------------------------------------------------------------
    # Node-set functions
    # ------------------------------------------------------------------

    def par(self, node: int) -> NodeSet:
        """Parents: tails of the arrows pointing to ``node``."""
        self.check_node(node)
        return self._parents.get(node, frozenset())

    def ant(self, node: int) -> NodeSet:
        """
        Anteriors: nodes with an anterior path to ``node``, that is arrows
        pointing towards it preceded by full lines. Never contains ``node``.
        """
        self.check_node(node)
        found: Set[int] = set()
        stack = [node]
        while stack:
            current = stack.pop()
            for nxt in self._parents.get(current, frozenset()) | self._full_neighbors.get(current, frozenset()):
                if nxt != node and nxt not in found:
                    found.add(nxt)
                    stack.append(nxt)
        return frozenset(found)

    def ant_of_set(self, nodes: Iterable[int]) -> NodeSet:
        """Union of ant(i) over ``nodes``."""
        return frozenset().union(*(self.ant(n) for n in nodes))

    def ancestors(self, node: int) -> NodeSet:
        """Nodes with a direction-preserving path to ``node``."""
        self.check_node(node)
        found: Set[int] = set()
        stack = [node]
        while stack:
            for nxt in self._parents.get(stack.pop(), frozenset()):
                if nxt != node and nxt not in found:
                    found.add(nxt)
                    stack.append(nxt)
        return frozenset(found)

    def pst(self, node: int, ordering: Optional[ComponentOrdering] = None) -> NodeSet:
        """Past: all nodes in components strictly after the component of ``node``."""
        self.check_node(node)
        ordering = ordering or self.valid_ordering()
        if node not in ordering.order_index:
            raise UnknownNodeError(node)
        return ordering.after(ordering.order_index[node])

    def pair_sets(self, i: int, j: int, ordering: Optional[ComponentOrdering] = None) -> PairSets:
        """
        par(i,j), ant(i,j) and pst(i,j), each with {i, j} removed.

        Raises:
            OrderingError: if pst(i,j) differs from pst(lower) minus the higher node.
        """
        if i == j:
            raise ValueError("pair_sets needs two distinct nodes")
        self.check_node(i)
        self.check_node(j)
        ordering = ordering or self.valid_ordering()
        pair = {i, j}
        par = (self.par(i) | self.par(j)) - pair
        ant = (self.ant(i) | self.ant(j)) - pair
        pst = (self.pst(i, ordering) | self.pst(j, ordering)) - pair

        lower, higher = (i, j) if ordering.precedes(i, j) else (j, i)
        if pst != self.pst(lower, ordering) - {higher}:
            raise OrderingError(f"pst({i},{j}) differs from pst({lower}) without {higher}")
        return PairSets(frozenset(par), frozenset(ant), frozenset(pst))

    # ------------------------------------------------------------------
    # Completion
    # ------------------------------------------------------------------

    def saturate(self, ordering: Optional[ComponentOrdering] = None) -> "RegressionGraph":
        """
        Complete the graph while keeping its valid ordering: missing full lines
        among context nodes, dashed lines inside each response component, and an
        arrow pointing to i from j for every remaining pair with i before j.
        """
        ordering = self.require_ordering(ordering)
        _, context = self.partition
        index = ordering.order_index
        added = set()
        for i, j in combinations(ordering.node_order, 2):
            if self.adjacent(i, j):
                continue
            if i in context and j in context:
                added.add(Edge.full(i, j))
            elif index[i] == index[j]:
                added.add(Edge.dashed(i, j))
            else:
                added.add(Edge.arrow(j, i))
        logger.debug("saturation added %d edge(s)", len(added))
        return RegressionGraph(self.nodes, self.edges | added, self.context_decl, self.response_decl)

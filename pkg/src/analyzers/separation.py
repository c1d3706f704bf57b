"""
Path-based separation for regression graphs.

An inner path node is a collider when both incident path edges carry an
arrowhead at it (arrow heads and dashed-line ends; full lines carry none).
A collider is open when it lies in C or ant(C), a non-collider when it is
outside C. Two sets are separated given C when no path between them is open
at every inner node.
"""

import logging
from collections import deque
from dataclasses import dataclass
from itertools import chain, combinations
from typing import AbstractSet, Dict, Iterable, Iterator, List, Optional, Set, Tuple

from src.analyzers.markov_properties import PairwiseProperty, get_markov_generator
from src.core.errors import StatementError
from src.core.regression_graph import ComponentOrdering, Edge, RegressionGraph
from src.core.statements import IndependenceStatement, sort_statements


logger = logging.getLogger(__name__)

State = Tuple[int, bool]  # (node, entered through an arrowhead at node)


@dataclass(frozen=True)
class SeparationResult:
    """Outcome of one separation query."""

    separated: bool
    witness: Optional[Tuple[int, ...]] = None  # node sequence of a connecting path

    def __bool__(self) -> bool:
        return self.separated


class SeparationChecker:
    """Answers separation queries and checks statement lists against them."""

    def _check_query(self, graph: RegressionGraph, a: AbstractSet[int], b: AbstractSet[int], c: AbstractSet[int]) -> None:
        for node in chain(a, b, c):
            graph.check_node(node)
        if not a or not b:
            raise StatementError("separation query needs nonempty A and B")
        if a & b or a & c or b & c:
            raise StatementError("separation query sets must be disjoint")

    def m_separated(
        self,
        graph: RegressionGraph,
        a: Iterable[int],
        b: Iterable[int],
        c: Iterable[int] = (),
    ) -> SeparationResult:
        """
        Decide whether ``a`` and ``b`` are separated given ``c``.

        Breadth-first reachability over (node, arrowhead-on-entry) states, so each
        node is expanded at most twice.

        Returns:
            SeparationResult; when connected, ``witness`` is the first connecting
            route found in traversal order
        """
        a, b, c = frozenset(a), frozenset(b), frozenset(c)
        self._check_query(graph, a, b, c)
        opens_colliders = c | graph.ant_of_set(c)

        parent: Dict[State, Optional[State]] = {}
        queue: deque = deque()
        for start in sorted(a):
            for edge in graph.incident_edges(start):
                state = (edge.other(start), edge.has_head_at(edge.other(start)))
                if state[0] in a or state in parent:
                    continue
                parent[state] = (start, False)
                parent.setdefault((start, False), None)
                if state[0] in b:
                    return SeparationResult(False, self._route(parent, state))
                queue.append(state)

        while queue:
            state = queue.popleft()
            node, head_in = state
            for edge in graph.incident_edges(node):
                head_out = edge.has_head_at(node)
                if head_in and head_out:
                    if node not in opens_colliders:
                        continue
                elif node in c:
                    continue
                nxt = edge.other(node)
                next_state = (nxt, edge.has_head_at(nxt))
                if nxt in a or next_state in parent:
                    continue
                parent[next_state] = state
                if nxt in b:
                    return SeparationResult(False, self._route(parent, next_state))
                queue.append(next_state)

        return SeparationResult(True)

    def _route(self, parent: Dict[State, Optional[State]], state: State) -> Tuple[int, ...]:
        route = []
        current: Optional[State] = state
        while current is not None:
            route.append(current[0])
            current = parent.get(current)
        return tuple(reversed(route))

    def m_separated_by_paths(
        self,
        graph: RegressionGraph,
        a: Iterable[int],
        b: Iterable[int],
        c: Iterable[int] = (),
    ) -> bool:
        """Exhaustive simple-path version of ``m_separated``; exponential, for testing."""
        a, b, c = frozenset(a), frozenset(b), frozenset(c)
        self._check_query(graph, a, b, c)
        opens_colliders = c | graph.ant_of_set(c)
        for start in sorted(a):
            for path in self._simple_paths(graph, start, b):
                if self._is_connecting(path, c, opens_colliders):
                    return False
        return True

    def _simple_paths(self, graph: RegressionGraph, start: int, targets: AbstractSet[int]) -> Iterator[List[Tuple[int, Edge]]]:
        """Yield simple paths from ``start`` to any target as (node, entering edge) lists."""
        stack = [(start, [(start, None)], {start})]
        while stack:
            node, path, visited = stack.pop()
            for edge in graph.incident_edges(node):
                nxt = edge.other(node)
                if nxt in visited:
                    continue
                extended = path + [(nxt, edge)]
                if nxt in targets:
                    yield extended
                else:
                    stack.append((nxt, extended, visited | {nxt}))

    def _is_connecting(self, path: List[Tuple[int, Edge]], c: AbstractSet[int], opens_colliders: AbstractSet[int]) -> bool:
        for k in range(1, len(path) - 1):
            node = path[k][0]
            entering, leaving = path[k][1], path[k + 1][1]
            if entering.has_head_at(node) and leaving.has_head_at(node):
                if node not in opens_colliders:
                    return False
            elif node in c:
                return False
        return True

    def check_statements(
        self,
        graph: RegressionGraph,
        statements: Iterable[IndependenceStatement],
        label: str = "statements",
    ) -> dict:
        """
        Check every statement by separation.

        Returns:
            Report ``{property, total, failures: [{A, B, C, witness}]}``
        """
        statements = sort_statements(s.canonical() for s in statements)
        failures = []
        for statement in statements:
            result = self.m_separated(graph, statement.a, statement.b, statement.c)
            if not result.separated:
                failures.append({**statement.to_dict(), "witness": list(result.witness or ())})
        if failures:
            logger.warning("%s: %d of %d statement(s) not separated", label, len(failures), len(statements))
        return {"property": label, "total": len(statements), "failures": failures}

    def verify_soundness(
        self,
        graph: RegressionGraph,
        prop: PairwiseProperty,
        ordering: Optional[ComponentOrdering] = None,
    ) -> dict:
        """Check every statement of one pairwise property by separation."""
        prop = PairwiseProperty(prop)
        statements = get_markov_generator().pairwise_statements(graph, prop, ordering)
        return self.check_statements(graph, statements, prop.value)

    def independence_model(self, graph: RegressionGraph, max_conditioning: Optional[int] = None) -> Set[IndependenceStatement]:
        """
        Every separation statement with singleton A and B.

        Args:
            graph: A valid regression graph
            max_conditioning: Largest conditioning set enumerated (all when None)

        Returns:
            Set of canonical statements ``i | j | C`` that hold by separation
        """
        nodes = sorted(graph.nodes)
        found = set()
        for i, j in combinations(nodes, 2):
            rest = [n for n in nodes if n not in (i, j)]
            limit = len(rest) if max_conditioning is None else min(max_conditioning, len(rest))
            for size in range(limit + 1):
                for cond in combinations(rest, size):
                    if self.m_separated(graph, {i}, {j}, cond).separated:
                        found.add(IndependenceStatement.of({i}, {j}, cond))
        return found


# Global checker instance
_checker_instance = None


def get_separation_checker() -> SeparationChecker:
    """Get the global separation checker instance (singleton pattern)."""
    global _checker_instance
    if _checker_instance is None:
        _checker_instance = SeparationChecker()
    return _checker_instance

"""
Equivalence of the four pairwise Markov properties.

Compares the graphoid closures of the P1-P4 statement lists of a graph for one
or more valid orderings, and carries the worked derivation chains for the
pair (2, 4) of the nine-node example graph.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from src.analyzers.markov_properties import ALL_PROPERTIES, PairwiseProperty, get_markov_generator
from src.core.config import settings
from src.core.regression_graph import ComponentOrdering, RegressionGraph
from src.core.statements import IndependenceStatement
from src.inference.graphoid_engine import ProofTrace, get_graphoid_engine


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChainExample:
    """A worked derivation: the goal statement and the premises it is derived from."""

    name: str
    premises: Tuple[IndependenceStatement, ...]
    goal: IndependenceStatement


def _s(a: Sequence[int], b: Sequence[int], c: Sequence[int] = ()) -> IndependenceStatement:
    return IndependenceStatement(frozenset(a), frozenset(b), frozenset(c))


def example_chains() -> List[ChainExample]:
    """The four derivation chains for the pair (2, 4) of ``data/figure1.rg``."""
    return [
        ChainExample(
            "p1=>p2",
            (_s([2], [4], [5, 6, 7, 8, 9]), _s([4], [7], [5, 6, 8, 9])),
            _s([2], [4], [5, 6, 8, 9]),
        ),
        ChainExample(
            "p2=>p3",
            (
                _s([2], [8], [5, 6, 9]),
                _s([2], [9], [5, 6, 8]),
                _s([2], [6], [5, 8, 9]),
                _s([2], [4], [5, 6, 8, 9]),
            ),
            _s([2], [4], [5, 6]),
        ),
        ChainExample(
            "p3=>p4",
            (_s([2], [4], [5, 6]), _s([2], [9], [5]), _s([2], [6], [5, 9])),
            _s([2], [4], [5]),
        ),
        ChainExample(
            "p4=>p1",
            (_s([2], [4], [5]), _s([2], [6], [5]), _s([2], [7], [5]), _s([2], [8], [5]), _s([2], [9], [5])),
            _s([2], [4], [5, 6, 7, 8, 9]),
        ),
    ]


def solve_chains(budget: Optional[int] = None) -> Dict[str, Optional[ProofTrace]]:
    """Run derive on every example chain; a None value means no trace within the budget."""
    engine = get_graphoid_engine()
    return {chain.name: engine.derive(chain.goal, chain.premises, budget=budget) for chain in example_chains()}


class EquivalenceVerifier:
    """Checks closure(P1) = closure(P2) = closure(P3) = closure(P4) for concrete graphs."""

    def __init__(self):
        self.engine = get_graphoid_engine()
        self.generator = get_markov_generator()

    def verify_ordering(
        self,
        graph: RegressionGraph,
        ordering: ComponentOrdering,
        max_statements: Optional[int] = None,
        max_iterations: Optional[int] = None,
    ) -> dict:
        """
        Closures of the four statement lists under one ordering.

        Returns:
            Dictionary with the ordering, closure sizes, saturation flags, the
            implication matrix (row property's closure contains every statement
            of the column property) and the equality flag
        """
        premises = {p: self.generator.pairwise_statements(graph, p, ordering) for p in ALL_PROPERTIES}
        closures = {
            p: self.engine.closure(premises[p], graph.nodes, max_statements=max_statements, max_iterations=max_iterations)
            for p in ALL_PROPERTIES
        }

        implication = {
            row.value: {col.value: premises[col] <= closures[row].statements for col in ALL_PROPERTIES}
            for row in ALL_PROPERTIES
        }
        first = closures[PairwiseProperty.P1_PAST].statements
        equal = all(closures[p].statements == first for p in ALL_PROPERTIES)
        saturated = {p.value: closures[p].saturated for p in ALL_PROPERTIES}

        return {
            "ordering": ordering.to_text(),
            "sizes": {p.value: len(closures[p]) for p in ALL_PROPERTIES},
            "saturated": saturated,
            "implication": implication,
            "equal": equal,
            "inconclusive": not all(saturated.values()),
        }

    def verify_equivalence(
        self,
        graph: RegressionGraph,
        orderings: Optional[List[ComponentOrdering]] = None,
        max_statements: Optional[int] = None,
        max_iterations: Optional[int] = None,
    ) -> dict:
        """
        Compare the four closures for every given ordering.

        Args:
            graph: A valid regression graph
            orderings: Orderings to check; up to ORDERING_LIMIT valid orderings when omitted
            max_statements, max_iterations: Closure budgets; settings when omitted

        Returns:
            Report with one entry per ordering plus overall ``equal`` and
            ``inconclusive`` flags
        """
        orderings = orderings or graph.valid_orderings(settings.ORDERING_LIMIT)
        results = []
        for ordering in orderings:
            result = self.verify_ordering(graph, ordering, max_statements, max_iterations)
            logger.info("ordering %s: sizes %s, equal=%s", result["ordering"], result["sizes"], result["equal"])
            results.append(result)

        inconclusive = any(r["inconclusive"] for r in results)
        if inconclusive:
            logger.warning("closure budget exhausted; equivalence check is inconclusive")
        return {
            "nodes": len(graph.nodes),
            "orderings": results,
            "equal": all(r["equal"] for r in results),
            "inconclusive": inconclusive,
        }


# Global verifier instance
_verifier_instance = None


def get_equivalence_verifier() -> EquivalenceVerifier:
    """Get the global equivalence verifier instance (singleton pattern)."""
    global _verifier_instance
    if _verifier_instance is None:
        _verifier_instance = EquivalenceVerifier()
    return _verifier_instance

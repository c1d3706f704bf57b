"""
Pairwise Markov properties of regression graphs.
Turns every missing edge into an independence statement under (P1)-(P4).
"""

import logging
from enum import Enum
from typing import Dict, List, Optional, Set, Tuple

import pandas as pd

from src.core.errors import OrderingError
from src.core.regression_graph import ComponentOrdering, RegressionGraph, Violation
from src.core.statements import IndependenceStatement, format_node_set


logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


class PairwiseProperty(str, Enum):
    """Choice of conditioning set for a missing edge i, j with i the lower node."""

    P1_PAST = "p1"
    P2_ANTERIORS = "p2"
    P3_JOINT_PARENTS = "p3"
    P4_PARENTS_OF_LOWER = "p4"

    @property
    def label(self) -> str:
        return {
            "p1": "past",
            "p2": "anteriors",
            "p3": "joint parents",
            "p4": "parents of the lower node",
        }[self.value]

    @classmethod
    def parse(cls, value: str) -> "PairwiseProperty":
        return cls(value.lower())


ALL_PROPERTIES = tuple(PairwiseProperty)

REPORT_COLUMNS = ["i", "j", "kind", "past", "anteriors", "joint_parents", "parents_of_lower"]


class MarkovPropertyGenerator:
    """
    Generates pairwise independence statements for a graph and valid ordering.
    Context pairs condition on the rest of the context set under every property.
    """

    def pairwise_statement_map(
        self,
        graph: RegressionGraph,
        prop: PairwiseProperty,
        ordering: Optional[ComponentOrdering] = None,
        use_par_j: bool = False,
    ) -> Dict[Pair, IndependenceStatement]:
        """
        Statements keyed by uncoupled pair ``(min, max)``.

        Args:
            graph: A valid regression graph
            prop: Pairwise property selecting the conditioning set
            ordering: Valid ordering; the canonical one when omitted
            use_par_j: Under P4, condition on par(j) when i and j share a component

        Returns:
            Dictionary mapping each uncoupled pair to its canonical statement
        """
        ordering = ordering or graph.valid_ordering()
        prop = PairwiseProperty(prop)
        _, context = graph.partition
        statements: Dict[Pair, IndependenceStatement] = {}

        for x, y in graph.uncoupled_pairs():
            if x in context and y in context:
                statements[(x, y)] = IndependenceStatement.of({x}, {y}, context - {x, y})
                continue

            i, j = (x, y) if ordering.precedes(x, y) else (y, x)
            sets = graph.pair_sets(i, j, ordering)
            if not sets.ant <= sets.pst:
                raise OrderingError(f"ant({i},{j}) is not contained in pst({i},{j})")

            if prop is PairwiseProperty.P1_PAST:
                conditioning = sets.pst
            elif prop is PairwiseProperty.P2_ANTERIORS:
                conditioning = sets.ant
            elif prop is PairwiseProperty.P3_JOINT_PARENTS:
                conditioning = sets.par
            elif use_par_j and ordering.order_index[i] == ordering.order_index[j]:
                conditioning = graph.par(j)
            else:
                conditioning = graph.par(i)
            statements[(x, y)] = IndependenceStatement.of({i}, {j}, conditioning)

        return statements

    def pairwise_statements(
        self,
        graph: RegressionGraph,
        prop: PairwiseProperty,
        ordering: Optional[ComponentOrdering] = None,
        use_par_j: bool = False,
    ) -> Set[IndependenceStatement]:
        """All statements of one pairwise property, one per uncoupled pair."""
        statements = set(self.pairwise_statement_map(graph, prop, ordering, use_par_j).values())
        logger.debug("%s: %d statement(s)", PairwiseProperty(prop).value, len(statements))
        return statements

    def statement_report(self, graph: RegressionGraph, ordering: Optional[ComponentOrdering] = None) -> pd.DataFrame:
        """
        One row per uncoupled pair with the four conditioning sets.

        Returns:
            DataFrame with columns i, j, kind, past, anteriors, joint_parents,
            parents_of_lower; set columns hold sorted id lists
        """
        ordering = ordering or graph.valid_ordering()
        maps = {p: self.pairwise_statement_map(graph, p, ordering) for p in ALL_PROPERTIES}
        _, context = graph.partition

        rows = []
        for pair in graph.uncoupled_pairs():
            i, j = pair if ordering.precedes(*pair) else (pair[1], pair[0])
            rows.append({
                "i": i,
                "j": j,
                "kind": "context" if set(pair) <= context else "response",
                "past": sorted(maps[PairwiseProperty.P1_PAST][pair].c),
                "anteriors": sorted(maps[PairwiseProperty.P2_ANTERIORS][pair].c),
                "joint_parents": sorted(maps[PairwiseProperty.P3_JOINT_PARENTS][pair].c),
                "parents_of_lower": sorted(maps[PairwiseProperty.P4_PARENTS_OF_LOWER][pair].c),
            })
        return pd.DataFrame(rows, columns=REPORT_COLUMNS)

    def check_nesting(self, graph: RegressionGraph, ordering: Optional[ComponentOrdering] = None) -> List[Violation]:
        """Violations of par(i) <= par(i,j) <= ant(i,j) <= pst(i,j) over uncoupled pairs."""
        ordering = ordering or graph.valid_ordering()
        _, context = graph.partition
        violations = []
        for x, y in graph.uncoupled_pairs():
            if x in context and y in context:
                continue
            i, j = (x, y) if ordering.precedes(x, y) else (y, x)
            sets = graph.pair_sets(i, j, ordering)
            if not (graph.par(i) <= sets.par <= sets.ant <= sets.pst):
                violations.append(Violation("nesting", "conditioning sets are not nested", (i, j)))
        return violations


def report_to_text(report: pd.DataFrame) -> str:
    """Aligned text rendering of a statement report."""
    if report.empty:
        return ""
    shown = report.copy()
    for column in REPORT_COLUMNS[3:]:
        shown[column] = shown[column].map(format_node_set)
    return shown.to_string(index=False) + "\n"


def report_to_records(report: pd.DataFrame) -> List[dict]:
    """JSON-ready rows of a statement report."""
    return [
        {column: (int(row[column]) if column in ("i", "j") else row[column]) for column in REPORT_COLUMNS}
        for row in report.to_dict(orient="records")
    ]


# Global generator instance
_generator_instance = None


def get_markov_generator() -> MarkovPropertyGenerator:
    """Get the global pairwise-property generator (singleton pattern)."""
    global _generator_instance
    if _generator_instance is None:
        _generator_instance = MarkovPropertyGenerator()
    return _generator_instance

"""
Gaussian oracle for regression graphs.

Generates regular Gaussian covariance matrices Markov to a graph through its
sequence of regressions and tests independence statements numerically via
conditional cross-covariances.
"""

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

import numpy as np

from src.core.config import settings
from src.core.errors import NumericalError, StatementError, UnknownNodeError
from src.core.regression_graph import ComponentOrdering, Edge, EdgeType, RegressionGraph
from src.core.statements import IndependenceStatement, sort_statements
from src.parsers.graph_parser import graph_hash


logger = logging.getLogger(__name__)


@dataclass
class GaussianModel:
    """
    Covariance matrix over ``nodes`` (ascending ids) with its generating pieces.

    ``coefficients[h, t]`` is the regression coefficient of the arrow pointing
    to h from t; ``residual`` is block diagonal with the context covariance and
    one residual covariance per response component.
    """

    nodes: Tuple[int, ...]
    sigma: np.ndarray
    coefficients: np.ndarray
    residual: np.ndarray
    graph_hash: str
    ordering: ComponentOrdering
    seed: int

    def index(self, nodes: Iterable[int]) -> List[int]:
        position = {node: k for k, node in enumerate(self.nodes)}
        found = []
        for node in sorted(nodes):
            if node not in position:
                raise UnknownNodeError(node)
            found.append(position[node])
        return found

    @property
    def provenance(self) -> dict:
        return {"graph_hash": self.graph_hash, "ordering": self.ordering.to_text(), "seed": self.seed}


class GaussianOracle:
    """Builds Gaussian models Markov to a regression graph and checks statements on them."""

    def __init__(self):
        self.tolerance = settings.CI_TOLERANCE
        self.dependence_threshold = settings.DEPENDENCE_THRESHOLD

    def _signed_uniform(self, rng: np.random.Generator, bounds: Tuple[float, float]) -> float:
        low, high = bounds
        return float(rng.uniform(low, high) * rng.choice([-1.0, 1.0]))

    def _dominant(self, matrix: np.ndarray) -> np.ndarray:
        """Set the diagonal to the absolute off-diagonal row sum plus one."""
        np.fill_diagonal(matrix, 0.0)
        np.fill_diagonal(matrix, np.abs(matrix).sum(axis=1) + 1.0)
        return matrix

    def generate_model(
        self,
        graph: RegressionGraph,
        ordering: Optional[ComponentOrdering] = None,
        seed: int = 0,
    ) -> GaussianModel:
        """
        Generate a covariance matrix through the graph's sequence of regressions.

        The context block is the inverse of a diagonally dominant concentration
        matrix with nonzeros at full lines. Each response component, from the
        last to the first in the ordering, regresses on its past with nonzero
        coefficients at arrows and residual covariances at dashed lines.

        Args:
            graph: A valid regression graph
            ordering: Valid ordering; the canonical one when omitted
            seed: Seed for ``numpy.random.default_rng``

        Returns:
            GaussianModel with a symmetric positive definite ``sigma``

        Raises:
            NumericalError: if a block cannot be inverted or sigma is not positive definite
        """
        ordering = graph.require_ordering(ordering)
        rng = np.random.default_rng(seed)
        nodes = tuple(sorted(graph.nodes))
        position = {node: k for k, node in enumerate(nodes)}
        d = len(nodes)

        sigma = np.zeros((d, d))
        coefficients = np.zeros((d, d))
        residual = np.zeros((d, d))

        _, context = graph.partition
        v = [position[n] for n in sorted(context)]
        if v:
            concentration = np.zeros((len(v), len(v)))
            local = {node: k for k, node in enumerate(sorted(context))}
            for edge in graph.edges_of(EdgeType.FULL):
                value = self._signed_uniform(rng, settings.CONCENTRATION_RANGE)
                concentration[local[edge.a], local[edge.b]] = value
                concentration[local[edge.b], local[edge.a]] = value
            self._dominant(concentration)
            try:
                block = np.linalg.inv(concentration)
            except np.linalg.LinAlgError as exc:
                raise NumericalError("concentration matrix of the context set is singular") from exc
            sigma[np.ix_(v, v)] = block
            residual[np.ix_(v, v)] = block

        arrows = graph.edges_of(EdgeType.ARROW)
        dashed = graph.edges_of(EdgeType.DASHED)
        for q in reversed(range(len(ordering.components))):
            component = ordering.components[q]
            if component <= context:
                continue
            response = [position[n] for n in sorted(component)]
            past = [position[n] for n in sorted(ordering.after(q))]

            for edge in arrows:
                if edge.b in component:
                    coefficients[position[edge.b], position[edge.a]] = self._signed_uniform(
                        rng, settings.REGRESSION_RANGE
                    )
            lam = np.zeros((len(response), len(response)))
            within = {node: k for k, node in enumerate(sorted(component))}
            for edge in dashed:
                if edge.a in component:
                    value = self._signed_uniform(rng, settings.RESIDUAL_RANGE)
                    lam[within[edge.a], within[edge.b]] = value
                    lam[within[edge.b], within[edge.a]] = value
            self._dominant(lam)
            residual[np.ix_(response, response)] = lam

            b = coefficients[np.ix_(response, past)]
            sigma_pp = sigma[np.ix_(past, past)]
            sigma[np.ix_(response, response)] = b @ sigma_pp @ b.T + lam
            cross = b @ sigma_pp
            sigma[np.ix_(response, past)] = cross
            sigma[np.ix_(past, response)] = cross.T

        sigma = (sigma + sigma.T) / 2.0
        if d and np.linalg.eigvalsh(sigma).min() <= 0:
            raise NumericalError("generated covariance matrix is not positive definite")

        model = GaussianModel(nodes, sigma, coefficients, residual, graph_hash(graph), ordering, seed)
        logger.debug("generated model over %d node(s), ordering %s, seed %d", d, model.ordering.to_text(), seed)
        return model

    def reconstruct(self, model: GaussianModel) -> np.ndarray:
        """Sigma recomputed as (I - B)^-1 Omega (I - B)^-T from the generating pieces."""
        identity = np.eye(len(model.nodes))
        try:
            inverse = np.linalg.inv(identity - model.coefficients)
        except np.linalg.LinAlgError as exc:
            raise NumericalError("coefficient matrix is not invertible") from exc
        return inverse @ model.residual @ inverse.T

    def ci_holds(
        self,
        model: GaussianModel,
        a: Iterable[int],
        b: Iterable[int],
        c: Iterable[int] = (),
        tol: Optional[float] = None,
    ) -> Tuple[bool, float]:
        """
        Test ``a`` independent of ``b`` given ``c``.

        Returns:
            Tuple ``(holds, max_abs)`` where max_abs is the largest absolute entry
            of the conditional cross-covariance of a and b given c
        """
        a, b, c = frozenset(a), frozenset(b), frozenset(c)
        if not a or not b:
            raise StatementError("independence query needs nonempty A and B")
        if a & b or a & c or b & c:
            raise StatementError("independence query sets must be disjoint")
        tol = tol if tol is not None else self.tolerance

        ia, ib, ic = model.index(a), model.index(b), model.index(c)
        sigma = model.sigma
        cross = sigma[np.ix_(ia, ib)]
        if ic:
            try:
                adjustment = sigma[np.ix_(ia, ic)] @ np.linalg.solve(sigma[np.ix_(ic, ic)], sigma[np.ix_(ic, ib)])
            except np.linalg.LinAlgError as exc:
                raise NumericalError(f"singular conditioning block for {sorted(c)}") from exc
            cross = cross - adjustment
        max_abs = float(np.abs(cross).max())
        return max_abs < tol, max_abs

    def verify_statements(
        self,
        model: GaussianModel,
        statements: Iterable[IndependenceStatement],
        tol: Optional[float] = None,
    ) -> dict:
        """
        Check each statement on the model.

        Returns:
            Report ``{total, holding, failing, results: [{A, B, C, holds, max_abs}]}``
        """
        results = []
        for statement in sort_statements(s.canonical() for s in statements):
            holds, max_abs = self.ci_holds(model, statement.a, statement.b, statement.c, tol)
            results.append({**statement.to_dict(), "holds": holds, "max_abs": max_abs})
        holding = sum(1 for r in results if r["holds"])
        if holding < len(results):
            logger.warning("%d of %d statement(s) fail on the model", len(results) - holding, len(results))
        return {"total": len(results), "holding": holding, "failing": len(results) - holding, "results": results}

    def check_genericity(self, model: GaussianModel, graph: RegressionGraph, threshold: Optional[float] = None) -> dict:
        """
        Fraction of coupled pairs that are dependent given the parents of the earlier node.

        For an edge between i and j with i first in the model's ordering, the
        pair counts as dependent when the conditional cross-covariance given
        par(i) without j exceeds ``threshold``.
        """
        threshold = threshold if threshold is not None else self.dependence_threshold
        pairs = 0
        dependent = 0
        for edge in sorted(graph.edges, key=Edge.sort_key):
            i, j = (edge.a, edge.b) if model.ordering.precedes(edge.a, edge.b) else (edge.b, edge.a)
            _, max_abs = self.ci_holds(model, {i}, {j}, graph.par(i) - {j})
            pairs += 1
            if max_abs > threshold:
                dependent += 1
        fraction = dependent / pairs if pairs else 1.0
        return {"pairs": pairs, "dependent": dependent, "fraction": fraction, "threshold": threshold}

    def export_model(self, model: GaussianModel) -> dict:
        """JSON-ready model: node ids, row-major sigma and provenance."""
        return {
            "nodes": list(model.nodes),
            "sigma": model.sigma.tolist(),
            "provenance": model.provenance,
        }


# Global oracle instance
_oracle_instance = None


def get_gaussian_oracle() -> GaussianOracle:
    """Get the global Gaussian oracle instance (singleton pattern)."""
    global _oracle_instance
    if _oracle_instance is None:
        _oracle_instance = GaussianOracle()
    return _oracle_instance

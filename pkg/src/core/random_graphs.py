"""
Seeded generator of valid regression graphs for property tests and the cli.
"""

import logging
from itertools import combinations
from typing import List, Optional

import numpy as np

from src.core.config import settings
from src.core.regression_graph import Edge, RegressionGraph


logger = logging.getLogger(__name__)


def random_graph(
    n: int,
    seed: int,
    dashed_density: Optional[float] = None,
    full_density: Optional[float] = None,
    arrow_density: Optional[float] = None,
) -> RegressionGraph:
    """
    Sample a valid regression graph on nodes 1..n.

    A random block partition is drawn and ordered; the last block is the
    context block (possibly empty). Full lines are placed inside the context
    block, dashed lines inside response blocks, and arrows only point to a
    block from a later block, so every sample passes ``validate``.

    Args:
        n: Number of nodes (>= 1)
        seed: Seed for the numpy generator; equal arguments give equal graphs
        dashed_density, full_density, arrow_density: Edge probabilities per kind

    Returns:
        A valid RegressionGraph
    """
    if n < 1:
        raise ValueError("random_graph needs at least one node")
    dashed_density = settings.DASHED_DENSITY if dashed_density is None else dashed_density
    full_density = settings.FULL_DENSITY if full_density is None else full_density
    arrow_density = settings.ARROW_DENSITY if arrow_density is None else arrow_density

    rng = np.random.default_rng(seed)
    order = [int(x) + 1 for x in rng.permutation(n)]

    n_context = int(rng.integers(0, n + 1))
    responses, context = order[: n - n_context], order[n - n_context:]

    blocks: List[List[int]] = []
    if responses:
        cuts: List[int] = []
        if len(responses) > 1:
            n_cuts = int(rng.integers(0, len(responses)))
            cuts = sorted(int(c) for c in rng.choice(np.arange(1, len(responses)), size=n_cuts, replace=False))
        bounds = [0, *cuts, len(responses)]
        blocks = [responses[lo:hi] for lo, hi in zip(bounds, bounds[1:])]

    edges = set()
    for i, j in combinations(sorted(context), 2):
        if rng.random() < full_density:
            edges.add(Edge.full(i, j))
    for block in blocks:
        for i, j in combinations(sorted(block), 2):
            if rng.random() < dashed_density:
                edges.add(Edge.dashed(i, j))

    # Arrows point to a response block from any later block or from the context.
    later_blocks = blocks + ([context] if context else [])
    for q, block in enumerate(blocks):
        for head in sorted(block):
            for source in later_blocks[q + 1:]:
                for tail in sorted(source):
                    if rng.random() < arrow_density:
                        edges.add(Edge.arrow(tail, head))

    graph = RegressionGraph(frozenset(range(1, n + 1)), frozenset(edges))
    logger.debug("random graph n=%d seed=%d with %d edge(s)", n, seed, len(edges))
    return graph

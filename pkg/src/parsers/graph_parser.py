"""
Graph file parser and canonical serializer.
Reads the line-oriented graph format or its JSON equivalent.
"""

import hashlib
import json
import logging
import re
import sys
from pathlib import Path
from typing import Dict, List, Literal, Optional, Set, Union

from pydantic import BaseModel, Field, PositiveInt, ValidationError

from src.core.errors import GraphParseError
from src.core.regression_graph import Edge, EdgeType, RegressionGraph


logger = logging.getLogger(__name__)

_NODE_LINE = re.compile(r"^node\s+(\d+)(?:\s+(context|response))?$")
_EDGE_LINE = re.compile(r"^(\d+)\s*(--|~~|->)\s*(\d+)$")
_SYMBOLS = {"--": EdgeType.FULL, "~~": EdgeType.DASHED, "->": EdgeType.ARROW}


class EdgeDocument(BaseModel):
    """One JSON edge; for arrows ``a`` is the tail and ``b`` the head."""

    kind: Literal["full", "dashed", "arrow"]
    a: PositiveInt
    b: PositiveInt


class GraphDocument(BaseModel):
    """JSON schema of a graph file."""

    nodes: List[PositiveInt] = Field(default_factory=list)
    context: Optional[List[PositiveInt]] = None
    response: List[PositiveInt] = Field(default_factory=list)
    edges: List[EdgeDocument] = Field(default_factory=list)


class GraphParser:
    """
    Reads and writes regression graphs.
    Parsing normalizes edges but does not check regression-graph constraints.
    """

    def parse(self, text: str) -> RegressionGraph:
        """Parse text in either supported format (JSON when it starts with ``{``)."""
        if text.lstrip().startswith("{"):
            return self.parse_json(text)
        return self.parse_text(text)

    def parse_text(self, text: str) -> RegressionGraph:
        """
        Parse the line-oriented graph format.

        Args:
            text: Graph file content

        Returns:
            RegressionGraph with normalized edges

        Raises:
            GraphParseError: on a syntax error, a self-loop or a second edge for a pair
        """
        nodes: Set[int] = set()
        context: Set[int] = set()
        response: Set[int] = set()
        edges: Dict[frozenset, Edge] = {}

        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue

            node_match = _NODE_LINE.match(line)
            if node_match:
                node = self._node_id(node_match.group(1), number)
                nodes.add(node)
                role = node_match.group(2)
                if role == "context":
                    context.add(node)
                elif role == "response":
                    response.add(node)
                continue

            edge_match = _EDGE_LINE.match(line)
            if not edge_match:
                raise GraphParseError(f"cannot parse {line!r}", number)
            a = self._node_id(edge_match.group(1), number)
            b = self._node_id(edge_match.group(3), number)
            edge = self._make_edge(_SYMBOLS[edge_match.group(2)], a, b, number)
            if edge.pair in edges:
                raise GraphParseError(f"duplicate edge for pair {sorted(edge.pair)}", number)
            edges[edge.pair] = edge

        graph = RegressionGraph.from_edges(
            edges.values(), nodes, context=context if context else None, response=response
        )
        logger.debug("parsed %d node(s), %d edge(s)", len(graph.nodes), len(graph.edges))
        return graph

    def parse_json(self, text: str) -> RegressionGraph:
        """Parse the JSON graph format (``a -> b`` for arrows)."""
        try:
            document = GraphDocument.model_validate_json(text)
        except ValidationError as exc:
            raise GraphParseError(f"invalid graph JSON: {exc.errors()[0]['msg']}") from exc

        edges: Dict[frozenset, Edge] = {}
        for position, item in enumerate(document.edges, start=1):
            edge = self._make_edge(EdgeType(item.kind), item.a, item.b, None, position)
            if edge.pair in edges:
                raise GraphParseError(f"duplicate edge for pair {sorted(edge.pair)} (edge #{position})")
            edges[edge.pair] = edge
        return RegressionGraph.from_edges(edges.values(), document.nodes, document.context, document.response)

    def parse_file(self, path: Union[str, Path]) -> RegressionGraph:
        """Read a graph from ``path``; ``-`` reads standard input."""
        if str(path) == "-":
            return self.parse(sys.stdin.read())
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise GraphParseError(f"cannot read {path}: {exc.strerror}") from exc
        return self.parse(text)

    def _node_id(self, token: str, line: int) -> int:
        node = int(token)
        if node < 1:
            raise GraphParseError(f"node ids must be positive, got {node}", line)
        return node

    def _make_edge(self, kind: EdgeType, a: int, b: int, line: Optional[int], position: Optional[int] = None) -> Edge:
        if a == b:
            where = f" (edge #{position})" if position else ""
            raise GraphParseError(f"self-loop at node {a}{where}", line)
        return Edge(kind, a, b)

    def serialize(self, graph: RegressionGraph, fmt: str = "text") -> str:
        """
        Canonical serialization: nodes ascending, edges sorted by (kind, a, b).

        Args:
            graph: Graph to write
            fmt: "text" or "json"
        """
        edges = sorted(graph.edges, key=Edge.sort_key)
        if fmt == "json":
            document = {"nodes": sorted(graph.nodes)}
            if graph.context_decl is not None:
                document["context"] = sorted(graph.context_decl)
            if graph.response_decl:
                document["response"] = sorted(graph.response_decl)
            document["edges"] = [{"kind": e.kind.value, "a": e.a, "b": e.b} for e in edges]
            return json.dumps(document, sort_keys=True)

        lines = []
        for node in sorted(graph.nodes):
            if graph.context_decl is not None and node in graph.context_decl:
                lines.append(f"node {node} context")
            elif node in graph.response_decl:
                lines.append(f"node {node} response")
            else:
                lines.append(f"node {node}")
        lines.extend(str(edge) for edge in edges)
        return "\n".join(lines) + "\n"


def graph_hash(graph: RegressionGraph) -> str:
    """sha256 of the canonical JSON serialization."""
    return hashlib.sha256(get_graph_parser().serialize(graph, "json").encode("utf-8")).hexdigest()


# Global parser instance
_parser_instance = None


def get_graph_parser() -> GraphParser:
    """Get the global graph parser instance (singleton pattern)."""
    global _parser_instance
    if _parser_instance is None:
        _parser_instance = GraphParser()
    return _parser_instance

"""Exception types shared across the toolkit."""

from typing import Optional


class RegressionGraphError(Exception):
    """Base class for all toolkit errors."""


class GraphParseError(RegressionGraphError):
    """Raised when a graph or statement file cannot be read."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownNodeError(RegressionGraphError):
    """Raised when an operation refers to a node outside the graph."""

    def __init__(self, node: int):
        self.node = node
        super().__init__(f"unknown node {node}")


class StatementError(RegressionGraphError):
    """Raised for independence statements with empty or overlapping sets."""


class OrderingError(RegressionGraphError):
    """Raised for an ordering that is not a valid ordering of the graph."""


class PartitionError(RegressionGraphError):
    """Raised when a context declaration contradicts the edges of the graph."""


class NumericalError(RegressionGraphError):
    """Raised when a matrix that must be invertible is not."""

"""
Conditional independence statements over node sets.
A statement <A, B, C> reads "A is independent of B given C".
"""

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Tuple

from src.core.errors import StatementError


NodeSet = FrozenSet[int]


def _ids(nodes: Iterable[int]) -> Tuple[int, ...]:
    return tuple(sorted(nodes))


def format_node_set(nodes: Iterable[int]) -> str:
    """Comma-separated ascending ids; the empty set is written as ``-``."""
    ids = _ids(nodes)
    return ",".join(str(i) for i in ids) if ids else "-"


@dataclass(frozen=True)
class IndependenceStatement:
    """
    Oriented independence statement.

    Statements are symmetric in A and B; ``canonical()`` stores the
    lexicographically smaller side first and is the form used for set membership.
    """

    a: NodeSet
    b: NodeSet
    c: NodeSet = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "a", frozenset(self.a))
        object.__setattr__(self, "b", frozenset(self.b))
        object.__setattr__(self, "c", frozenset(self.c))
        if not self.a or not self.b:
            raise StatementError(f"empty side in statement {self.format()}")
        if self.a & self.b or self.a & self.c or self.b & self.c:
            raise StatementError(f"sets are not disjoint in statement {self.format()}")

    @classmethod
    def of(cls, a: Iterable[int], b: Iterable[int], c: Iterable[int] = ()) -> "IndependenceStatement":
        """Build the canonical statement for the given sets."""
        return cls(frozenset(a), frozenset(b), frozenset(c)).canonical()

    @property
    def nodes(self) -> NodeSet:
        return self.a | self.b | self.c

    @property
    def is_canonical(self) -> bool:
        return _ids(self.a) <= _ids(self.b)

    def swapped(self) -> "IndependenceStatement":
        return IndependenceStatement(self.b, self.a, self.c)

    def canonical(self) -> "IndependenceStatement":
        return self if self.is_canonical else self.swapped()

    def same_as(self, other: "IndependenceStatement") -> bool:
        """Equality up to symmetry."""
        return self.canonical() == other.canonical()

    def sort_key(self) -> Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...]]:
        return (_ids(self.a), _ids(self.b), _ids(self.c))

    def format(self) -> str:
        """Serialize as ``A | B | C``, e.g. ``2 | 4 | 5,6,8,9``."""
        return f"{format_node_set(self.a)} | {format_node_set(self.b)} | {format_node_set(self.c)}"

    def to_dict(self) -> dict:
        return {"A": list(_ids(self.a)), "B": list(_ids(self.b)), "C": list(_ids(self.c))}

    def __str__(self) -> str:
        return self.format()


def sort_statements(statements: Iterable[IndependenceStatement]) -> list:
    """Deterministic order used by every report and serializer."""
    return sorted(statements, key=IndependenceStatement.sort_key)

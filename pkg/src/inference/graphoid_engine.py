"""
Symbolic inference over independence statements.

Implements the compositional graphoid rules (symmetry, decomposition, weak
union, contraction, intersection, composition) as a forward-chaining Horn
fixpoint with indexed premise lookup, breadth-first proof search, and a
checker for singleton transitivity (a disjunctive property, so never a rule).
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import AbstractSet, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from src.core.config import settings
from src.core.errors import StatementError
from src.core.statements import IndependenceStatement, NodeSet, sort_statements


logger = logging.getLogger(__name__)


class Rule(str, Enum):
    """The six compositional graphoid rules."""

    SYMMETRY = "symmetry"
    DECOMPOSITION = "decomposition"
    WEAK_UNION = "weak_union"
    CONTRACTION = "contraction"
    INTERSECTION = "intersection"
    COMPOSITION = "composition"

    @property
    def arity(self) -> int:
        return 1 if self in (Rule.SYMMETRY, Rule.DECOMPOSITION, Rule.WEAK_UNION) else 2


ALL_RULES: Tuple[Rule, ...] = tuple(Rule)

Statement = IndependenceStatement


def _proper_subsets(nodes: NodeSet) -> Iterator[NodeSet]:
    ordered = sorted(nodes)
    for size in range(1, len(ordered)):
        for subset in combinations(ordered, size):
            yield frozenset(subset)


# One-step rule functions on oriented statements. Binary functions return None
# when the premises do not have the required shape.

def _symmetry(s: Statement) -> List[Statement]:
    return [s.swapped()]


def _decomposition(s: Statement) -> List[Statement]:
    return [Statement(s.a, sub, s.c) for sub in _proper_subsets(s.b)]


def _weak_union(s: Statement) -> List[Statement]:
    return [Statement(s.a, s.b - d, s.c | d) for d in _proper_subsets(s.b)]


def _contraction(first: Statement, second: Statement) -> Optional[Statement]:
    # a | b | d+c  and  a | d | c  give  a | b+d | c
    if first.a != second.a or second.b | second.c != first.c:
        return None
    return Statement(first.a, first.b | second.b, second.c)


def _intersection(first: Statement, second: Statement) -> Optional[Statement]:
    # a | d | b+c  and  a | b | d+c  give  a | b+d | c
    if first.a != second.a or first.b & second.b:
        return None
    if first.b | first.c != second.b | second.c:
        return None
    return Statement(first.a, first.b | second.b, first.c - second.b)


def _composition(first: Statement, second: Statement) -> Optional[Statement]:
    # a | d | c  and  a | b | c  give  a | b+d | c
    if first.a != second.a or first.c != second.c or first.b & second.b:
        return None
    return Statement(first.a, first.b | second.b, first.c)


_UNARY = {Rule.SYMMETRY: _symmetry, Rule.DECOMPOSITION: _decomposition, Rule.WEAK_UNION: _weak_union}
_BINARY = {Rule.CONTRACTION: _contraction, Rule.INTERSECTION: _intersection, Rule.COMPOSITION: _composition}


@dataclass(frozen=True)
class ProofStep:
    """One rule application."""

    rule: Rule
    premises: Tuple[Statement, ...]
    conclusion: Statement

    def to_dict(self) -> dict:
        return {
            "rule": self.rule.value,
            "premises": [p.format() for p in self.premises],
            "conclusion": self.conclusion.format(),
        }


@dataclass(frozen=True)
class ProofTrace:
    """Derivation of ``goal`` from ``axioms``; premises of each step are axioms or earlier conclusions."""

    goal: Statement
    axioms: Tuple[Statement, ...]
    steps: Tuple[ProofStep, ...]

    @property
    def rules_used(self) -> List[Rule]:
        return [step.rule for step in self.steps]

    def to_list(self) -> List[dict]:
        return [step.to_dict() for step in self.steps]

    def format(self) -> str:
        lines = []
        for number, step in enumerate(self.steps, start=1):
            premises = "; ".join(p.format() for p in step.premises)
            lines.append(f"{number}. {step.rule.value}: {premises}  =>  {step.conclusion.format()}")
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class ClosureResult:
    """Closure of a premise set; ``saturated`` is False when a budget was hit."""

    statements: FrozenSet[Statement]
    saturated: bool
    iterations: int

    def __contains__(self, statement: Statement) -> bool:
        return statement.canonical() in self.statements

    def __len__(self) -> int:
        return len(self.statements)


@dataclass(frozen=True)
class TransitivityViolation:
    """Instance where j|k|c and j|k|ic hold but neither i|j|c nor i|k|c does."""

    i: int
    j: int
    k: int
    c: NodeSet

    def to_dict(self) -> dict:
        return {"i": self.i, "j": self.j, "k": self.k, "c": sorted(self.c)}


class _StatementStore:
    """Canonical statements plus oriented indices keyed by (A, C) and (A, B+C)."""

    def __init__(self):
        self.canonical: Set[Statement] = set()
        self.by_condition: Dict[Tuple[NodeSet, NodeSet], List[Statement]] = defaultdict(list)
        self.by_union: Dict[Tuple[NodeSet, NodeSet], List[Statement]] = defaultdict(list)

    def __contains__(self, statement: Statement) -> bool:
        return statement in self.canonical

    def __len__(self) -> int:
        return len(self.canonical)

    def add(self, statement: Statement) -> None:
        self.canonical.add(statement)
        for oriented in (statement, statement.swapped()):
            self.by_condition[(oriented.a, oriented.c)].append(oriented)
            self.by_union[(oriented.a, oriented.b | oriented.c)].append(oriented)


Derivation = Tuple[Rule, Tuple[Statement, ...], Statement]


class GraphoidEngine:
    """
    Forward-chaining closure and proof search under the graphoid rules.
    Budgets default to the values in settings.
    """

    def __init__(self):
        self.max_statements = settings.BUDGET
        self.max_iterations = settings.MAX_ITERATIONS
        self.derive_budget = settings.DERIVE_BUDGET
        self.set_size_cap = settings.SET_SIZE_CAP

    def apply_rule(self, rule: Rule, premises: Sequence[Statement]) -> Set[Statement]:
        """
        All conclusions of one application of ``rule`` to ``premises``.

        Premises are taken with the orientation given; binary rules try both
        premise orders.

        Raises:
            StatementError: wrong number of premises
        """
        rule = Rule(rule)
        if len(premises) != rule.arity:
            raise StatementError(f"{rule.value} takes {rule.arity} premise(s), got {len(premises)}")
        if rule.arity == 1:
            return set(_UNARY[rule](premises[0]))
        first, second = premises
        found = {_BINARY[rule](first, second), _BINARY[rule](second, first)}
        found.discard(None)
        return found

    def _consequences(self, statement: Statement, store: _StatementStore, rules: AbstractSet[Rule]) -> Iterator[Derivation]:
        """One-step derivations using ``statement`` (canonical) and anything in ``store``."""
        for oriented in (statement, statement.swapped()):
            for rule in (Rule.DECOMPOSITION, Rule.WEAK_UNION):
                if rule in rules:
                    for conclusion in _UNARY[rule](oriented):
                        yield rule, (oriented,), conclusion

            if Rule.CONTRACTION in rules:
                for partner in store.by_union.get((oriented.a, oriented.c), ()):
                    conclusion = _contraction(oriented, partner)
                    if conclusion is not None:
                        yield Rule.CONTRACTION, (oriented, partner), conclusion
                for partner in store.by_condition.get((oriented.a, oriented.b | oriented.c), ()):
                    conclusion = _contraction(partner, oriented)
                    if conclusion is not None:
                        yield Rule.CONTRACTION, (partner, oriented), conclusion

            if Rule.INTERSECTION in rules:
                for partner in store.by_union.get((oriented.a, oriented.b | oriented.c), ()):
                    conclusion = _intersection(oriented, partner)
                    if conclusion is not None:
                        yield Rule.INTERSECTION, (oriented, partner), conclusion

            if Rule.COMPOSITION in rules:
                for partner in store.by_condition.get((oriented.a, oriented.c), ()):
                    conclusion = _composition(oriented, partner)
                    if conclusion is not None:
                        yield Rule.COMPOSITION, (oriented, partner), conclusion

    def _prepare(self, premises: Iterable[Statement], universe: Optional[AbstractSet[int]]) -> Tuple[List[Statement], FrozenSet[int], int]:
        premises = sort_statements({s.canonical() for s in premises})
        nodes = frozenset().union(*(s.nodes for s in premises)) if premises else frozenset()
        universe = frozenset(universe) if universe is not None else nodes
        if not nodes <= universe:
            raise StatementError(f"premises use nodes outside the universe: {sorted(nodes - universe)}")
        cap = self.set_size_cap or len(universe)
        return premises, universe, cap

    def _run(
        self,
        premises: List[Statement],
        rules: AbstractSet[Rule],
        cap: int,
        max_statements: int,
        max_iterations: int,
        goal: Optional[Statement] = None,
    ) -> Tuple[_StatementStore, Dict[Statement, Optional[Derivation]], bool, int]:
        store = _StatementStore()
        origins: Dict[Statement, Optional[Derivation]] = {}
        for statement in premises:
            store.add(statement)
            origins[statement] = None

        frontier = premises
        saturated = True
        rounds = 0
        while frontier and (goal is None or goal not in store):
            if rounds >= max_iterations:
                saturated = False
                break
            rounds += 1
            fresh: Dict[Statement, Derivation] = {}
            for statement in frontier:
                for rule, used, conclusion in self._consequences(statement, store, rules):
                    key = conclusion.canonical()
                    if key in store or key in fresh:
                        continue
                    if len(key.a) > cap or len(key.b) > cap:
                        saturated = False
                        continue
                    fresh[key] = (rule, used, conclusion)

            frontier = sort_statements(fresh)
            room = max_statements - len(store)
            if len(frontier) > room:
                frontier = frontier[:max(room, 0)]
                saturated = False
            for statement in frontier:
                store.add(statement)
                origins[statement] = fresh[statement]
            if not saturated and len(store) >= max_statements:
                logger.warning("statement budget of %d exhausted after %d round(s)", max_statements, rounds)
                break

        return store, origins, saturated, rounds

    def closure(
        self,
        premises: Iterable[Statement],
        universe: Optional[AbstractSet[int]] = None,
        rules: Iterable[Rule] = ALL_RULES,
        max_statements: Optional[int] = None,
        max_iterations: Optional[int] = None,
    ) -> ClosureResult:
        """
        Least fixpoint of the rules over ``premises``.

        Args:
            premises: Statements over ``universe``
            universe: Node set; defaults to the nodes used by the premises
            rules: Rules to apply (all six by default)
            max_statements, max_iterations: Budgets; settings when omitted

        Returns:
            ClosureResult of canonical statements; ``saturated`` is False when a
            budget or the set-size cap cut the fixpoint short
        """
        premises, universe, cap = self._prepare(premises, universe)
        store, _, saturated, rounds = self._run(
            premises,
            frozenset(Rule(r) for r in rules),
            cap,
            max_statements or self.max_statements,
            max_iterations or self.max_iterations,
        )
        logger.debug("closure of %d premise(s): %d statement(s), %d round(s)", len(premises), len(store), rounds)
        return ClosureResult(frozenset(store.canonical), saturated, rounds)

    def implies(self, premises: Iterable[Statement], goal: Statement, universe: Optional[AbstractSet[int]] = None) -> bool:
        """True when ``goal`` lies in the closure of ``premises``."""
        premises = list(premises)
        universe = frozenset(universe) if universe is not None else frozenset().union(goal.nodes, *(s.nodes for s in premises))
        return goal in self.closure(premises, universe)

    def derive(
        self,
        goal: Statement,
        premises: Iterable[Statement],
        rules: Iterable[Rule] = ALL_RULES,
        budget: Optional[int] = None,
    ) -> Optional[ProofTrace]:
        """
        Breadth-first proof search.

        Explores rule applications round by round until ``goal`` appears, so the
        trace has minimal derivation depth. Premises used in the opposite
        orientation are introduced by an explicit symmetry step.

        Returns:
            ProofTrace, or None when the goal is not reached within the budget
        """
        premises = list(premises)
        established: Dict[Statement, Statement] = {}
        for statement in premises:
            established.setdefault(statement.canonical(), statement)

        universe = frozenset().union(goal.nodes, *(s.nodes for s in premises))
        ordered, universe, cap = self._prepare(premises, universe)
        target = goal.canonical()
        store, origins, _, rounds = self._run(
            ordered,
            frozenset(Rule(r) for r in rules),
            cap,
            budget or self.derive_budget,
            self.max_iterations,
            goal=target,
        )
        if target not in store:
            logger.info("no derivation of %s within %d statement(s)", goal.format(), len(store))
            return None

        for key, origin in origins.items():
            if origin is not None:
                established[key] = origin[2]
        steps = self._trace_steps(target, origins, established)
        logger.debug("derived %s in %d step(s), %d round(s)", goal.format(), len(steps), rounds)
        return ProofTrace(goal, tuple(premises), tuple(steps))

    def _trace_steps(
        self,
        target: Statement,
        origins: Dict[Statement, Optional[Derivation]],
        established: Dict[Statement, Statement],
    ) -> List[ProofStep]:
        steps: List[ProofStep] = []
        available: Dict[Statement, Set[Statement]] = {}

        def build(key: Statement) -> None:
            if key in available:
                return
            origin = origins[key]
            if origin is not None:
                rule, used, conclusion = origin
                for premise in used:
                    need(premise)
                steps.append(ProofStep(rule, used, conclusion))
            available[key] = {established[key]}

        def need(oriented: Statement) -> None:
            key = oriented.canonical()
            build(key)
            if oriented not in available[key]:
                steps.append(ProofStep(Rule.SYMMETRY, (established[key],), oriented))
                available[key].add(oriented)

        build(target)
        return steps

    def replay(self, trace: ProofTrace) -> bool:
        """Re-apply every step from the axioms; True when the goal is reproduced."""
        known = {s.canonical() for s in trace.axioms}
        for step in trace.steps:
            if any(p.canonical() not in known for p in step.premises):
                return False
            if step.conclusion not in self.apply_rule(step.rule, step.premises):
                return False
            known.add(step.conclusion.canonical())
        return trace.goal.canonical() in known

    def naive_closure(self, premises: Iterable[Statement], rules: Iterable[Rule] = ALL_RULES) -> FrozenSet[Statement]:
        """Brute-force fixpoint over apply_rule on every premise and premise pair."""
        rules = [Rule(r) for r in rules]
        known = {s.canonical() for s in premises}
        changed = True
        while changed:
            changed = False
            oriented = sort_statements(o for s in known for o in (s, s.swapped()))
            found: Set[Statement] = set()
            for rule in rules:
                if rule.arity == 1:
                    for s in oriented:
                        found |= self.apply_rule(rule, [s])
                else:
                    for first, second in combinations(oriented, 2):
                        found |= self.apply_rule(rule, [first, second])
            fresh = {s.canonical() for s in found} - known
            if fresh:
                known |= fresh
                changed = True
        return frozenset(known)

    def check_singleton_transitivity(
        self,
        statements: Iterable[Statement],
        universe: Optional[AbstractSet[int]] = None,
    ) -> List[TransitivityViolation]:
        """
        Instances refuting singleton transitivity within ``statements``.

        For each j|k|c and j|k|ic in the set, at least one of i|j|c and i|k|c
        must also be in the set.
        """
        known = {s.canonical() for s in statements}
        universe = frozenset(universe) if universe is not None else frozenset().union(*(s.nodes for s in known))
        conditions: Dict[Tuple[int, int], Set[NodeSet]] = defaultdict(set)
        for s in known:
            if len(s.a) == 1 and len(s.b) == 1:
                conditions[(min(s.a), min(s.b))].add(s.c)

        violations = []
        for (j, k), conds in sorted(conditions.items()):
            for c in sorted(conds, key=lambda nodes: sorted(nodes)):
                for i in sorted(universe - c - {j, k}):
                    if c | {i} not in conds:
                        continue
                    if Statement.of({i}, {j}, c) in known or Statement.of({i}, {k}, c) in known:
                        continue
                    violations.append(TransitivityViolation(i, j, k, c))
        return violations


# Global engine instance
_engine_instance = None


def get_graphoid_engine() -> GraphoidEngine:
    """Get the global graphoid engine instance (singleton pattern)."""
    global _engine_instance
    if _engine_instance is None:
        _engine_instance = GraphoidEngine()
    return _engine_instance

"""
Validated run configuration for one cli invocation.
"""

from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, PositiveFloat, PositiveInt, field_validator, model_validator

from src.analyzers.markov_properties import PairwiseProperty
from src.core.config import settings


GRAPH_COMMANDS = ("validate", "pairwise", "separate", "verify", "order", "sets", "saturate", "report")


def _id_list(value) -> List[int]:
    if value is None:
        return []
    if isinstance(value, str):
        value = value.strip()
        if value in ("", "-"):
            return []
        return [int(part) for part in value.split(",")]
    return [int(v) for v in value]


class RunConfig(BaseModel):
    """Arguments of one command after parsing; command-specific fields are checked together."""

    command: Literal[
        "validate", "pairwise", "separate", "verify", "order", "sets", "saturate", "random", "derive", "report"
    ]
    graph: Optional[str] = None
    ordering: Optional[str] = None
    fmt: Literal["text", "json"] = "text"
    verbose: bool = False

    prop: PairwiseProperty = PairwiseProperty.P1_PAST
    a: List[PositiveInt] = Field(default_factory=list)
    b: List[PositiveInt] = Field(default_factory=list)
    c: List[PositiveInt] = Field(default_factory=list)
    pair: Optional[Tuple[PositiveInt, PositiveInt]] = None

    check: Optional[Literal["theorem1", "soundness", "gaussian"]] = None
    all_orderings: bool = False
    seed: int = 0
    nodes: Optional[PositiveInt] = None
    goal: Optional[str] = None
    premises: Optional[str] = None

    tolerance: PositiveFloat = settings.CI_TOLERANCE
    threshold: PositiveFloat = settings.DEPENDENCE_THRESHOLD
    budget: PositiveInt = settings.BUDGET
    max_iterations: PositiveInt = settings.MAX_ITERATIONS
    derive_budget: PositiveInt = settings.DERIVE_BUDGET

    @field_validator("a", "b", "c", mode="before")
    @classmethod
    def parse_id_list(cls, value):
        return _id_list(value)

    @field_validator("pair", mode="before")
    @classmethod
    def parse_pair(cls, value):
        if value is None:
            return None
        ids = _id_list(value)
        if len(ids) != 2 or ids[0] == ids[1]:
            raise ValueError("--pair needs two distinct node ids, e.g. 2,4")
        return tuple(ids)

    @field_validator("prop", mode="before")
    @classmethod
    def parse_property(cls, value):
        return PairwiseProperty.parse(value) if isinstance(value, str) else value

    @model_validator(mode="after")
    def check_required(self) -> "RunConfig":
        if self.command in GRAPH_COMMANDS and not self.graph:
            raise ValueError(f"{self.command} needs a graph file")
        if self.command == "separate" and (not self.a or not self.b):
            raise ValueError("separate needs --a and --b")
        if self.command == "sets" and self.pair is None:
            raise ValueError("sets needs --pair")
        if self.command == "verify" and self.check is None:
            raise ValueError("verify needs one of --theorem1, --soundness, --gaussian")
        if self.command == "random" and self.nodes is None:
            raise ValueError("random needs --nodes")
        if self.command == "derive" and (not self.goal or not self.premises):
            raise ValueError("derive needs --goal and --premises")
        return self

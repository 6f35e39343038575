from enum import Enum
from typing import Dict, List, Literal, Optional, Set, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

# JSON encoding of an extended cost: a nonnegative integer or "inf".
CostValue = Union[int, Literal["inf"]]


class Owner(str, Enum):
    """Player owning a state."""

    SYS = "sys"
    ENV = "env"

    @property
    def other(self) -> "Owner":
        return Owner.ENV if self is Owner.SYS else Owner.SYS


class StateSpec(BaseModel):
    """Schema for one state of a game file."""

    id: int = Field(..., description="Dense state id", ge=0)
    owner: Owner = Field(..., description="Owning player")
    goal: bool = Field(False, description="Whether the state is a goal")
    name: Optional[str] = Field(None, description="Optional human-readable label")


class EdgeSpec(BaseModel):
    """Schema for one labelled transition of a game file."""

    model_config = ConfigDict(populate_by_name=True)

    source: int = Field(..., alias="from", description="Source state id", ge=0)
    action: int = Field(..., description="Action id, dense per source state", ge=0)
    to: int = Field(..., description="Successor state id", ge=0)
    cost: int = Field(..., description="Energy cost of the action", ge=0)


class GameSpec(BaseModel):
    """Schema for a game file."""

    states: List[StateSpec] = Field(..., description="States of the game", min_length=1)
    initial: int = Field(..., description="Initial state id", ge=0)
    edges: List[EdgeSpec] = Field(default_factory=list, description="Transitions")

    @model_validator(mode="after")
    def validate_dense_ids(self) -> "GameSpec":
        """Validate that state ids are 0..n-1 and action ids are dense per state."""
        ids = sorted(state.id for state in self.states)
        if ids != list(range(len(self.states))):
            raise ValueError("State ids must be unique and numbered 0..n-1")
        actions: Dict[int, Set[int]] = {}
        for edge in self.edges:
            seen = actions.setdefault(edge.source, set())
            if edge.action in seen:
                raise ValueError(
                    f"Action {edge.action} is declared twice on state {edge.source}"
                )
            seen.add(edge.action)
        for source, seen in actions.items():
            if sorted(seen) != list(range(len(seen))):
                raise ValueError(
                    f"Action ids of state {source} must be numbered 0..k-1"
                )
        return self


class StateValueRecord(BaseModel):
    """Schema for the solved values of one state."""

    state: int = Field(..., description="State id")
    owner: Owner = Field(..., description="Owning player")
    goal: bool = Field(..., description="Whether the state is a goal")
    aval: CostValue = Field(..., description="Optimal adversarial value")
    cval: CostValue = Field(..., description="Optimal cooperative value")
    acval: CostValue = Field(..., description="Adversarial-cooperative value")
    region: str = Field(..., description="win, pending or lose")
    sval: int = Field(..., description="State value: 1, 0 or -1", ge=-1, le=1)
    witness_adv: Optional[int] = Field(None, description="Adversarial witness action")
    witness_coop: Optional[int] = Field(None, description="Cooperative witness action")
    wcoop: Optional[int] = Field(None, description="Memoryless WCoop action")


class ValuesReport(BaseModel):
    """Schema for the output of the values command."""

    meta: Dict[str, Union[int, str, None]] = Field(default_factory=dict)
    initial: int = Field(..., description="Initial state id")
    states: List[StateValueRecord] = Field(..., description="Per-state values")


class ValidationReport(BaseModel):
    """Schema for the output of the validate command."""

    valid: bool = Field(..., description="Whether the game passed validation")
    states: int = Field(..., description="Number of states", ge=0)
    edges: int = Field(..., description="Number of transitions", ge=0)
    goals: List[int] = Field(default_factory=list, description="Goal state ids")
    sys_states: int = Field(..., description="Number of Sys states", ge=0)
    env_states: int = Field(..., description="Number of Env states", ge=0)
    reachable: int = Field(
        ..., description="States reachable from the initial state", ge=1
    )

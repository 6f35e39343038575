from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field

from admsynth.schemas.game import CostValue


class StrategyNodeRecord(BaseModel):
    """Schema for the allowed choices at one Sys node."""

    node: int = Field(..., description="Sys node id", ge=0)
    state: int = Field(..., description="Game state of the node")
    accumulated: int = Field(..., description="Energy spent to reach the node", ge=0)
    allowed: List[int] = Field(..., description="Allowed child node ids")


class TransducerRow(BaseModel):
    """Schema for one transition of the strategy transducer.

    The memory state is the Sys node reached, the input is the Env action that led
    there, and the output is one allowed Sys action.
    """

    memory_state: int = Field(..., description="Sys node id used as memory")
    input: Optional[int] = Field(None, description="Env action leading to the node")
    output: int = Field(..., description="Allowed Sys action")
    next_memory: int = Field(..., description="Child node reached by the output")


class StrategySetReport(BaseModel):
    """Schema for the output of the synthesize command."""

    meta: Dict[str, Union[int, str, None]] = Field(default_factory=dict)
    all_admissible: bool = Field(..., description="Whether every strategy qualifies")
    nodes: List[StrategyNodeRecord] = Field(default_factory=list)
    transducer: List[TransducerRow] = Field(default_factory=list)
    root_pairs: List[List[CostValue]] = Field(
        default_factory=list,
        description="Achievable (cooperative, adversarial) payoffs at the root",
    )
    strategy: Optional["TreeStrategySpec"] = Field(
        None, description="One extracted member"
    )


class TreeStrategySpec(BaseModel):
    """Schema for a concrete strategy on a tree arena."""

    budget: Optional[int] = Field(None, description="Budget of the arena", ge=0)
    choices: Dict[int, int] = Field(..., description="Sys node id to chosen child id")


StrategySetReport.model_rebuild()


class TraceStepRecord(BaseModel):
    """Schema for one move of a rollout."""

    node: int = Field(..., description="Node the move leaves")
    state: int = Field(..., description="Game state of that node")
    actor: str = Field(..., description="Player who moved")
    action: int = Field(..., description="Action taken")
    cost: int = Field(..., description="Energy spent by the move", ge=0)


class TraceReport(BaseModel):
    """Schema for the output of the rollout command."""

    meta: Dict[str, Union[int, str, None]] = Field(default_factory=dict)
    outcome: str = Field(..., description="goal-reached, budget-exceeded or step-limit")
    total: CostValue = Field(..., description="Payoff of the rollout")
    final_node: int = Field(..., description="Node where the rollout stopped")
    steps: List[TraceStepRecord] = Field(default_factory=list)
    transcript: List[str] = Field(default_factory=list)

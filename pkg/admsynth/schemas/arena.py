from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field, model_validator

from admsynth.schemas.game import CostValue, Owner


class PayoffTreeSpec(BaseModel):
    """Schema for a hand-built payoff tree.

    Leaves carry a payoff and no children; internal nodes carry an owner and at
    least one child.
    """

    owner: Optional[Owner] = Field(None, description="Owner of an internal node")
    state: int = Field(-1, description="Label of the node, usually a state id")
    payoff: Optional[CostValue] = Field(None, description="Payoff of a leaf")
    children: List["PayoffTreeSpec"] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_leaf_or_internal(self) -> "PayoffTreeSpec":
        """Validate that a node is either a leaf with a payoff or an owned internal node."""
        if self.payoff is not None and self.children:
            raise ValueError("A leaf with a payoff cannot have children")
        if self.payoff is None and not self.children:
            raise ValueError("An internal node needs at least one child")
        if self.children and self.owner is None:
            raise ValueError("An internal node needs an owner")
        if isinstance(self.payoff, int) and self.payoff < 0:
            raise ValueError("Payoffs are nonnegative")
        return self


PayoffTreeSpec.model_rebuild()


class ArenaNodeRecord(BaseModel):
    """Schema for one node of a dumped tree arena."""

    node: int = Field(..., description="Node id (depth-first preorder)", ge=0)
    state: int = Field(..., description="Game state of the node")
    accumulated: int = Field(..., description="Energy spent to reach the node", ge=0)
    owner: Owner = Field(..., description="Owner of the node")
    parent: Optional[int] = Field(None, description="Parent node id")
    kind: str = Field(..., description="internal, goal or dead")
    children: List[List[int]] = Field(
        default_factory=list, description="(action, child) pairs"
    )
    aval: CostValue = Field(..., description="Adversarial value on the tree")
    cval: CostValue = Field(..., description="Cooperative value on the tree")


class ArenaStats(BaseModel):
    """Schema for the statistics of an unrolled tree arena."""

    budget: int = Field(..., description="Energy budget", ge=0)
    nodes: int = Field(..., description="Total number of nodes", ge=1)
    internal: int = Field(..., description="Number of internal nodes", ge=0)
    goal_leaves: int = Field(..., description="Number of goal leaves", ge=0)
    dead_leaves: int = Field(..., description="Number of dead leaves", ge=0)
    sys_decisions: int = Field(..., description="Internal Sys nodes", ge=0)
    env_decisions: int = Field(..., description="Internal Env nodes", ge=0)
    depth: int = Field(..., description="Maximum node depth", ge=0)
    root_aval: CostValue = Field(..., description="Adversarial value at the root")
    root_cval: CostValue = Field(..., description="Cooperative value at the root")
    root_region: str = Field(..., description="win, pending or lose on the tree")


class ArenaReport(BaseModel):
    """Schema for the output of the unroll command."""

    meta: Dict[str, Union[int, str, None]] = Field(default_factory=dict)
    stats: ArenaStats
    nodes: Optional[List[ArenaNodeRecord]] = Field(
        None, description="Full node dump when requested"
    )

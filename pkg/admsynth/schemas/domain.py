from typing import Dict, List, Tuple

from pydantic import BaseModel, Field, model_validator

# A grid cell as (x, y); x grows to the east and y to the south.
Cell = Tuple[int, int]


class GridSpec(BaseModel):
    """Schema for a pursuit gridworld file."""

    width: int = Field(..., description="Number of columns", ge=1)
    height: int = Field(..., description="Number of rows", ge=1)
    sys_start: Cell = Field(..., description="Starting cell of Sys")
    env_start: Cell = Field(..., description="Starting cell of Env")
    goal: Cell = Field(..., description="Cell Sys must reach")
    lava: List[Cell] = Field(default_factory=list, description="Blocked cells")
    sys_allow_stay: bool = Field(False, description="Whether Sys may stay put")
    env_allow_stay: bool = Field(True, description="Whether Env may stay put")
    capture: bool = Field(
        True, description="Whether sharing a cell with Env ends in a losing sink"
    )
    sys_cost: int = Field(1, description="Energy cost of each Sys move", ge=1)


class DfaSpec(BaseModel):
    """Schema for a deterministic finite automaton file."""

    states: List[str] = Field(..., description="Automaton states", min_length=1)
    initial: str = Field(..., description="Initial automaton state")
    accepting: List[str] = Field(default_factory=list, description="Accepting states")
    alphabet: List[str] = Field(..., description="Input symbols", min_length=1)
    transitions: Dict[str, Dict[str, str]] = Field(
        ..., description="State to symbol to next state"
    )

    @model_validator(mode="after")
    def validate_total(self) -> "DfaSpec":
        """Validate that the transition function is total over the alphabet."""
        known = set(self.states)
        if self.initial not in known:
            raise ValueError(f"Initial state {self.initial!r} is not declared")
        for q in self.accepting:
            if q not in known:
                raise ValueError(f"Accepting state {q!r} is not declared")
        for q in self.states:
            row = self.transitions.get(q, {})
            for symbol in self.alphabet:
                if row.get(symbol) not in known:
                    raise ValueError(
                        f"Transition from {q!r} on {symbol!r} is missing or unknown"
                    )
        return self


class LabelingSpec(BaseModel):
    """Schema for a labeling file: one alphabet symbol per game state."""

    labels: Dict[int, str] = Field(..., description="State id to symbol")

from typing import Dict, List, Optional, Union

from pydantic import BaseModel, Field


class GameCheck(BaseModel):
    """Schema for the cross-check of one game against brute force."""

    index: int = Field(..., description="Position in the corpus", ge=0)
    states: int = Field(..., description="Number of game states", ge=1)
    budget: int = Field(..., description="Energy budget", ge=0)
    nodes: int = Field(..., description="Tree arena size", ge=1)
    sys_strategies: int = Field(..., ge=1)
    env_strategies: int = Field(..., ge=1)
    admissible: int = Field(..., description="Admissible strategies by brute force")
    admissible_winning: int = Field(
        ..., description="Admissible-winning strategies by brute force"
    )
    admissible_mismatches: int = Field(0, ge=0)
    winning_mismatches: int = Field(0, ge=0)
    complement_failures: int = Field(0, ge=0)
    wcoop_member: Optional[bool] = Field(
        None, description="Whether wcoop is admissible-winning; None outside Win"
    )
    enforces_budget: Optional[bool] = Field(
        None, description="Whether an extracted winner meets the budget; None outside Win"
    )

    @property
    def agrees(self) -> bool:
        return (
            self.admissible_mismatches == 0
            and self.winning_mismatches == 0
            and self.complement_failures == 0
            and self.wcoop_member is not False
            and self.enforces_budget is not False
        )


class OracleReport(BaseModel):
    """Schema for the output of the oracle-check command."""

    meta: Dict[str, Union[int, str, None]] = Field(default_factory=dict)
    games: int = Field(..., description="Games checked", ge=0)
    disagreements: int = Field(..., description="Games with any mismatch", ge=0)
    checks: List[GameCheck] = Field(default_factory=list)

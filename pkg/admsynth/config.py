import os
from typing import List, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

from admsynth.services.arena_service import AcvalMethod
from admsynth.services.rollout_service import EnvPolicyKind
from admsynth.services.synthesis_service import (
    ExtractionPolicy,
    SynthesisCriterion,
    SynthesisMode,
)

# Load environment variables
load_dotenv()

COMMANDS = (
    "validate",
    "values",
    "unroll",
    "synthesize",
    "rollout",
    "oracle-check",
    "gridworld",
    "product",
    "export-dot",
)


class Settings(BaseModel):
    """Environment-driven defaults."""

    node_cap: int = Field(
        default_factory=lambda: int(os.getenv("ADMSYNTH_NODE_CAP", str(10**7)))
    )
    enumeration_cap: int = Field(
        default_factory=lambda: int(os.getenv("ADMSYNTH_ENUMERATION_CAP", str(10**6)))
    )
    default_seed: int = Field(
        default_factory=lambda: int(os.getenv("ADMSYNTH_SEED", "0"))
    )
    max_steps: int = Field(
        default_factory=lambda: int(os.getenv("ADMSYNTH_MAX_STEPS", "10000"))
    )
    log_level: str = Field(
        default_factory=lambda: os.getenv("ADMSYNTH_LOG_LEVEL", "INFO")
    )


settings = Settings()


class RunConfig(BaseModel):
    """One CLI invocation, validated."""

    command: str = Field(..., description="Subcommand to run")
    game: Optional[str] = Field(None, description="Game file")
    tree: Optional[str] = Field(None, description="Payoff tree file")
    output: Optional[str] = Field(None, description="Output file; stdout if omitted")
    budget: Optional[int] = Field(None, description="Energy budget", ge=0)
    mode: SynthesisMode = SynthesisMode.ADMISSIBLE
    criterion: SynthesisCriterion = SynthesisCriterion.EXACT
    acval: AcvalMethod = AcvalMethod.SUBGAME
    policy: ExtractionPolicy = ExtractionPolicy.MIN_CVAL
    env: EnvPolicyKind = EnvPolicyKind.ADVERSARIAL
    script: List[int] = Field(default_factory=list, description="Scripted Env actions")
    strategy: Optional[str] = Field(None, description="Tree strategy file")
    seed: int = Field(default_factory=lambda: settings.default_seed)
    node_cap: int = Field(default_factory=lambda: settings.node_cap, ge=1)
    enumeration_cap: int = Field(default_factory=lambda: settings.enumeration_cap, ge=1)
    max_steps: int = Field(default_factory=lambda: settings.max_steps, ge=1)
    games: int = Field(50, description="Random games to check", ge=1)
    max_states: int = Field(8, ge=2)
    max_budget: int = Field(8, ge=1)
    grid: Optional[str] = Field(None, description="Gridworld file")
    dfa: Optional[str] = Field(None, description="Automaton file")
    labeling: Optional[str] = Field(None, description="Labeling file")
    target: str = Field("game", description="What export-dot renders: game or arena")
    dump_nodes: bool = Field(False, description="Include every node in unroll output")
    verbose: bool = False

    @field_validator("command")
    @classmethod
    def validate_command(cls, v: str) -> str:
        """Validate that the subcommand is known."""
        if v not in COMMANDS:
            raise ValueError(f"Unknown command {v!r}")
        return v

    @field_validator("target")
    @classmethod
    def validate_target(cls, v: str) -> str:
        if v not in ("game", "arena"):
            raise ValueError("target must be 'game' or 'arena'")
        return v

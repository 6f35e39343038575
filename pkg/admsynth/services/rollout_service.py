"""Simulation of a Sys strategy against a chosen Env behaviour."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from admsynth.schemas.game import Owner
from admsynth.services.arena_service import NodeKind, TreeArena
from admsynth.services.errors import IncompleteStrategy, ScriptExhausted
from admsynth.services.game_service import INFINITE, ExtendedCost, GameGraph, finite
from admsynth.services.synthesis_service import Pair, TreeStrategy, strategy_values

logger = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 10_000


class EnvPolicyKind(str, Enum):
    ADVERSARIAL = "adversarial"
    COOPERATIVE = "cooperative"
    RANDOM = "random"
    SCRIPTED = "scripted"


@dataclass(frozen=True)
class EnvPolicy:
    """How Env picks its moves during a rollout.

    Adversarial and cooperative Env know the Sys strategy: they steer towards the
    dearest or the cheapest payoff it still allows.
    """

    kind: EnvPolicyKind
    seed: int = 0
    script: Tuple[int, ...] = ()

    @classmethod
    def adversarial(cls) -> EnvPolicy:
        return cls(EnvPolicyKind.ADVERSARIAL)

    @classmethod
    def cooperative(cls) -> EnvPolicy:
        return cls(EnvPolicyKind.COOPERATIVE)

    @classmethod
    def random(cls, seed: int) -> EnvPolicy:
        return cls(EnvPolicyKind.RANDOM, seed=seed)

    @classmethod
    def scripted(cls, actions: Sequence[int]) -> EnvPolicy:
        return cls(EnvPolicyKind.SCRIPTED, script=tuple(actions))


class Outcome(str, Enum):
    GOAL_REACHED = "goal-reached"
    BUDGET_EXCEEDED = "budget-exceeded"
    STEP_LIMIT = "step-limit"


@dataclass(frozen=True)
class TraceStep:
    node: int
    state: int
    actor: Owner
    action: int
    cost: int


@dataclass(frozen=True)
class Trace:
    """The moves of one rollout and how it ended.

    ``total`` is the goal payoff, infinity when the budget ran out, and the
    energy spent so far when the step limit stopped the rollout.
    """

    steps: Tuple[TraceStep, ...]
    outcome: Outcome
    total: ExtendedCost
    final_node: int


class _EnvMover:
    def __init__(self, t: TreeArena, sigma: TreeStrategy, policy: EnvPolicy):
        self.t = t
        self.policy = policy
        self.values: Dict[int, Pair] = {}
        if policy.kind in (EnvPolicyKind.ADVERSARIAL, EnvPolicyKind.COOPERATIVE):
            self.values = strategy_values(t, sigma)
        self.rng = np.random.Generator(np.random.PCG64(policy.seed))
        self.script = list(policy.script)

    def move(self, n: int) -> int:
        kids = self.t.children(n)
        kind = self.policy.kind
        if kind is EnvPolicyKind.ADVERSARIAL:
            # max() keeps the first maximum, so ties go to the lowest action.
            return max(kids, key=lambda c: self.values[c][1].sort_key())
        if kind is EnvPolicyKind.COOPERATIVE:
            return min(kids, key=lambda c: self.values[c][0].sort_key())
        if kind is EnvPolicyKind.RANDOM:
            return kids[int(self.rng.integers(len(kids)))]
        if not self.script:
            raise ScriptExhausted(f"No scripted Env action left at node {n}")
        return self.t.child_by_action(n, self.script.pop(0))


def rollout(
    t: TreeArena,
    sigma: TreeStrategy,
    env: EnvPolicy,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> Trace:
    """
    Play ``sigma`` against an Env policy from the root of a tree arena.

    Args:
        t: The tree arena
        sigma: Sys strategy; must choose at every Sys node the rollout visits
        env: Env behaviour
        max_steps: Moves allowed before the rollout is cut off

    Returns:
        Trace: The moves and the outcome

    Raises:
        IncompleteStrategy: If ``sigma`` has no choice at a visited Sys node
        ScriptExhausted: If a scripted Env runs out of actions
    """
    mover = _EnvMover(t, sigma, env)
    steps: List[TraceStep] = []
    n = t.root
    while not t.is_leaf(n):
        if len(steps) >= max_steps:
            logger.info(f"Rollout stopped after {max_steps} steps at node {n}")
            return Trace(
                tuple(steps), Outcome.STEP_LIMIT, finite(t.accumulated[n]), n
            )
        if t.owner[n] is Owner.SYS:
            child = sigma.choice(n)
            if child is None or child not in t.children(n):
                raise IncompleteStrategy(f"No valid choice at Sys node {n}")
        else:
            child = mover.move(n)
        steps.append(
            TraceStep(
                node=n,
                state=t.game_state[n],
                actor=t.owner[n],
                action=t.action_in[child],
                cost=max(t.accumulated[child] - t.accumulated[n], 0),
            )
        )
        n = child

    if t.kind[n] is NodeKind.GOAL_LEAF:
        outcome, total = Outcome.GOAL_REACHED, t.payoff(n)
    else:
        outcome, total = Outcome.BUDGET_EXCEEDED, INFINITE
    logger.debug(f"Rollout ended with {outcome.value} after {len(steps)} steps")
    return Trace(tuple(steps), outcome, total, n)


def format_transcript(
    t: TreeArena, trace: Trace, g: Optional[GameGraph] = None
) -> List[str]:
    """One human-readable line per move, plus a closing line."""

    def label(state: int) -> str:
        return g.name(state) if g is not None else f"v{state}"

    lines = [
        f"{step.actor.value} at {label(step.state)} takes action {step.action} "
        f"(cost {step.cost})"
        for step in trace.steps
    ]
    lines.append(
        f"{trace.outcome.value} at {label(t.game_state[trace.final_node])} "
        f"with payoff {trace.total}"
    )
    return lines

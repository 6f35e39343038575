"""Seeded random games for cross-checking the solver against brute force."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from admsynth.schemas.game import EdgeSpec, GameSpec, Owner, StateSpec
from admsynth.services.arena_service import TreeArena, unroll
from admsynth.services.errors import CapExceededError
from admsynth.services.game_service import GameGraph, build_game
from admsynth.services.oracle_service import strategy_count

logger = logging.getLogger(__name__)


def random_game(
    rng: np.random.Generator,
    max_states: int = 8,
    max_cost: int = 3,
    max_degree: int = 3,
) -> GameGraph:
    """
    Draw a small valid game.

    State 0 is the initial Sys state and never a goal. One or two other states are
    goals. Every state gets between one and ``max_degree`` moves to distinct
    states of the other player; Sys moves cost 1 to ``max_cost`` and Env moves
    are free.
    """
    n = int(rng.integers(2, max_states + 1))
    owners = [Owner.SYS] + [
        Owner.SYS if rng.random() < 0.5 else Owner.ENV for _ in range(n - 1)
    ]
    if Owner.ENV not in owners:
        owners[-1] = Owner.ENV
    goal_count = min(int(rng.integers(1, 3)), n - 1)
    goals = set(rng.choice(np.arange(1, n), size=goal_count, replace=False).tolist())

    edges = []
    for v in range(n):
        others = [u for u in range(n) if owners[u] is not owners[v]]
        degree = int(rng.integers(1, min(max_degree, len(others)) + 1))
        targets = sorted(rng.choice(others, size=degree, replace=False).tolist())
        for action, target in enumerate(targets):
            cost = int(rng.integers(1, max_cost + 1)) if owners[v] is Owner.SYS else 0
            edges.append(EdgeSpec(source=v, action=action, to=target, cost=cost))

    states = [
        StateSpec(id=v, owner=owners[v], goal=v in goals) for v in range(n)
    ]
    return build_game(GameSpec(states=states, initial=0, edges=edges))


@dataclass(frozen=True)
class CorpusEntry:
    index: int
    game: GameGraph
    budget: int
    arena: TreeArena


def generate_corpus(
    seed: int,
    games: int,
    max_states: int = 8,
    max_budget: int = 8,
    max_cost: int = 3,
    max_degree: int = 3,
    node_cap: int = 3000,
    strategy_cap: int = 1024,
    pair_cap: int = 65536,
    max_attempts: Optional[int] = None,
) -> List[CorpusEntry]:
    """
    Draw games and budgets until ``games`` of them are small enough to enumerate.

    A draw is kept when its arena stays under ``node_cap`` nodes, each player has
    at most ``strategy_cap`` strategies and the pair count stays under
    ``pair_cap``. All draws come from one PCG64 stream seeded with ``seed``.

    Returns:
        List[CorpusEntry]: Up to ``games`` entries; fewer only if the attempts run out
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    attempts = max_attempts if max_attempts is not None else 100 * games
    corpus: List[CorpusEntry] = []
    for _ in range(attempts):
        if len(corpus) >= games:
            break
        g = random_game(
            rng, max_states=max_states, max_cost=max_cost, max_degree=max_degree
        )
        budget = int(rng.integers(1, max_budget + 1))
        try:
            t = unroll(g, budget, node_cap=node_cap)
        except CapExceededError:
            continue
        sys_count = strategy_count(t, Owner.SYS)
        env_count = strategy_count(t, Owner.ENV)
        if max(sys_count, env_count) > strategy_cap or sys_count * env_count > pair_cap:
            continue
        corpus.append(CorpusEntry(index=len(corpus), game=g, budget=budget, arena=t))
    logger.info(f"Generated {len(corpus)} games from seed {seed}")
    return corpus

"""Cross-checks of the synthesis procedures against exhaustive enumeration."""

from __future__ import annotations

import logging
from typing import List

from admsynth.schemas.oracle import GameCheck
from admsynth.services.arena_service import TreeArena, solve_tree
from admsynth.services.errors import BothOrNeither
from admsynth.services.game_service import GameGraph
from admsynth.services.oracle_service import (
    DEFAULT_ENUMERATION_CAP,
    ComplementLabel,
    check_complement,
    run_oracle,
)
from admsynth.services.random_game_service import CorpusEntry
from admsynth.services.rollout_service import EnvPolicy, Outcome, rollout
from admsynth.services.synthesis_service import (
    SynthesisMode,
    extract_strategy,
    is_member,
    lift_strategy,
    strategy_values,
    synthesize,
)
from admsynth.services.value_service import wcoop_memoryless

logger = logging.getLogger(__name__)


def verify_game(
    g: GameGraph,
    t: TreeArena,
    index: int = 0,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> GameCheck:
    """
    Compare synthesis with brute force on one unrolled game.

    Membership in both synthesized sets must match the enumerated verdicts for
    every Sys strategy, and the complement characterisation must label each
    strategy exactly as brute force does. Inside the winning region the lifted
    wcoop strategy must be admissible-winning, and an extracted winner must reach
    the goal within the budget against the adversarial Env.

    Raises:
        EnumerationTooLarge: If the arena has too many strategies
    """
    vt = solve_tree(t)
    adm = synthesize(t, vt, SynthesisMode.ADMISSIBLE)
    win = synthesize(t, vt, SynthesisMode.ADMISSIBLE_WINNING)
    oracle = run_oracle(t, vt, cap)

    adm_mismatches = win_mismatches = complement_failures = 0
    for sigma, expected_adm, expected_win in zip(
        oracle.sys_vectors, oracle.admissible, oracle.admissible_winning
    ):
        strategy = sigma.as_strategy()
        adm_mismatches += is_member(adm, strategy) != expected_adm
        win_mismatches += is_member(win, strategy) != expected_win
        try:
            label = check_complement(t, vt, sigma)
        except BothOrNeither:
            complement_failures += 1
            continue
        complement_failures += (
            label is ComplementLabel.SATISFIES_ADMISSIBLE
        ) != expected_adm

    wcoop_member = enforces_budget = None
    if vt.in_win[t.root]:
        wcoop = lift_strategy(t, wcoop_memoryless(g).choices)
        wcoop_member = is_member(win, wcoop)
        winner = extract_strategy(win)
        trace = rollout(t, winner, EnvPolicy.adversarial())
        enforces_budget = (
            trace.outcome is Outcome.GOAL_REACHED
            and trace.total == strategy_values(t, winner)[t.root][1]
            and trace.total.amount <= t.budget
        )

    check = GameCheck(
        index=index,
        states=g.num_states,
        budget=t.budget,
        nodes=t.num_nodes,
        sys_strategies=len(oracle.sys_vectors),
        env_strategies=len(oracle.env_vectors),
        admissible=sum(oracle.admissible),
        admissible_winning=sum(oracle.admissible_winning),
        admissible_mismatches=adm_mismatches,
        winning_mismatches=win_mismatches,
        complement_failures=complement_failures,
        wcoop_member=wcoop_member,
        enforces_budget=enforces_budget,
    )
    if not check.agrees:
        logger.warning(f"Game {index} disagrees with brute force: {check}")
    return check


def verify_corpus(
    corpus: List[CorpusEntry], cap: int = DEFAULT_ENUMERATION_CAP
) -> List[GameCheck]:
    checks = [verify_game(e.game, e.arena, e.index, cap) for e in corpus]
    failing = sum(not check.agrees for check in checks)
    logger.info(f"Checked {len(checks)} games, {failing} disagreements")
    return checks

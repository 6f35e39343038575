"""End-to-end checks on the golden games and a seeded random corpus."""

import pytest

from admsynth.services.arena_service import solve_tree, tree_values, unroll
from admsynth.services.game_service import INFINITE, finite
from admsynth.services.gridworld_service import build_gridworld
from admsynth.services.random_game_service import generate_corpus
from admsynth.services.rollout_service import EnvPolicy, Outcome, rollout
from admsynth.services.synthesis_service import (
    ExtractionPolicy,
    SynthesisMode,
    TreeStrategy,
    extract_strategy,
    is_member,
    synthesize,
    synthesize_admissible,
    synthesize_admissible_winning,
)
from admsynth.services.value_service import (
    ValueMode,
    acval_graph,
    value_iteration,
)
from admsynth.services.verification_service import verify_game

CORPUS_SEED = 20240601
CORPUS_SIZE = 400


def tree_strategy(t, *paths):
    """Choices given as game-state paths from the root to each chosen child."""
    return TreeStrategy(
        choices={t.descend(path[:-1]): t.descend(path) for path in paths}
    )


def test_detour_game_golden_values(detour_game):
    """Test the worst-case and cooperative values at v4."""
    adv = value_iteration(detour_game, ValueMode.ADVERSARIAL)
    coop = value_iteration(detour_game, ValueMode.COOPERATIVE)
    assert adv[4] == finite(9)
    assert coop[4] == finite(2)
    assert acval_graph(detour_game, 4, adv) == finite(2)


def test_detour_game_classification(detour_game):
    """Test the three illustrative strategies at budget 12."""
    t = unroll(detour_game, 12)
    vt = solve_tree(t)
    adm = synthesize_admissible(t, vt)
    win = synthesize_admissible_winning(t, vt)

    v8, v9 = [0, 1, 4, 7, 8], [0, 1, 4, 7, 9]
    winning_tails = [v8 + [10], v9 + [10]]
    sigma_1 = tree_strategy(t, [0, 1], [0, 1, 4, 5], *winning_tails)
    sigma_2 = tree_strategy(t, [0, 1], [0, 1, 4, 7], *winning_tails)
    loop = [0, 2]
    loop_tails = []
    for _ in range(12):
        loop_tails.append(loop + [3, 2])
        loop = loop + [3, 2]
    sigma_3 = tree_strategy(t, [0, 2], *loop_tails)

    assert not is_member(adm, sigma_1)
    assert is_member(win, sigma_2)
    assert is_member(adm, sigma_3)
    assert not is_member(win, sigma_3)


def test_history_tree_golden_tree_values(history_tree):
    """Test a sample of the annotated tree values."""
    vt = tree_values(history_tree)
    v3, v7 = history_tree.descend([0, 1, 3]), history_tree.descend([0, 1, 3, 6, 7])
    v9 = history_tree.descend([0, 1, 3, 6, 7, 9])
    assert (vt.cval[v3], vt.aval[v3]) == (finite(2), finite(4))
    assert (vt.cval[v7], vt.aval[v7]) == (finite(2), finite(9))
    assert (vt.cval[v9], vt.aval[v9]) == (finite(5), finite(10))
    assert (vt.cval[0], vt.aval[0]) == (finite(2), INFINITE)


def test_history_dependence(history_tree):
    """Test that v9 is allowed below v2 but not below v1."""
    s = synthesize_admissible(history_tree, solve_tree(history_tree))
    via_v2 = history_tree.descend([0, 2, 4, 6, 7])
    via_v1 = history_tree.descend([0, 1, 3, 6, 7])
    assert history_tree.descend([0, 2, 4, 6, 7, 9]) in s.allowed[via_v2]
    assert history_tree.descend([0, 1, 3, 6, 7, 9]) not in s.allowed[via_v1]


def test_gridworld_threshold_budget(grid_5x5):
    """Test that the root is winning exactly from the adversarial value on."""
    g = build_gridworld(grid_5x5)
    threshold = value_iteration(g, ValueMode.ADVERSARIAL)[g.initial].amount
    assert threshold == 6
    for budget in range(threshold + 1):
        vt = tree_values(unroll(g, budget))
        assert vt.aval[0].is_finite == (budget >= threshold)


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_gridworld_below_threshold_needs_help(grid_5x5, seed):
    """Test that below the threshold every admissible member relies on Env."""
    t = unroll(build_gridworld(grid_5x5), 5)
    vt = solve_tree(t)
    assert vt.cval[0].is_finite
    s = synthesize(t, vt, SynthesisMode.ADMISSIBLE)
    assert not s.all_admissible
    assert s.allowed[0]
    sigma = extract_strategy(s, ExtractionPolicy.SEEDED_RANDOM, seed)
    assert rollout(t, sigma, EnvPolicy.adversarial()).outcome is Outcome.BUDGET_EXCEEDED
    assert rollout(t, sigma, EnvPolicy.cooperative()).outcome is Outcome.GOAL_REACHED


@pytest.fixture(scope="module")
def corpus():
    return generate_corpus(seed=CORPUS_SEED, games=CORPUS_SIZE)


@pytest.mark.slow
def test_random_corpus_matches_brute_force(corpus):
    """Test synthesis, dichotomy, wcoop and enforcement over the random corpus."""
    assert len(corpus) == CORPUS_SIZE
    checks = [verify_game(entry.game, entry.arena, entry.index) for entry in corpus]
    for check in checks:
        assert check.admissible_mismatches == 0, check
        assert check.winning_mismatches == 0, check
        assert check.complement_failures == 0, check
        assert check.wcoop_member is not False, check
        assert check.enforces_budget is not False, check

    dominated = [c for c in checks if c.admissible < c.sys_strategies]
    optimistic = [c for c in checks if c.admissible_winning < c.admissible]
    assert len(dominated) >= 100
    assert len(optimistic) >= 3
    assert sum(c.wcoop_member is not None for c in checks) >= 40


@pytest.mark.slow
def test_random_corpus_sets_are_nonempty(corpus):
    """Test that both sets always have a member."""
    for entry in corpus:
        vt = solve_tree(entry.arena)
        for mode in SynthesisMode:
            s = synthesize(entry.arena, vt, mode)
            assert s.all_admissible or s.allowed[entry.arena.root]
            assert is_member(s, extract_strategy(s))

import pytest

from admsynth.services.arena_service import solve_tree, unroll
from admsynth.services.errors import IncompleteStrategy
from admsynth.services.game_service import INFINITE, finite
from admsynth.services.synthesis_service import (
    ExtractionPolicy,
    SynthesisCriterion,
    SynthesisMode,
    TreeStrategy,
    extract_strategy,
    is_member,
    is_optimistic,
    lift_strategy,
    reachable_nodes,
    strategy_records,
    strategy_values,
    synthesize,
    synthesize_admissible,
    synthesize_admissible_winning,
    transducer_rows,
)
from admsynth.services.value_service import wcoop_memoryless


@pytest.fixture
def detour_tree(detour_game):
    t = unroll(detour_game, 12)
    return t, solve_tree(t)


@pytest.mark.parametrize("criterion", list(SynthesisCriterion))
def test_history_tree_allowed_choices(history_tree, criterion):
    """Test that v10 is rejected and v9 is only kept below v4."""
    vt = solve_tree(history_tree)
    s = synthesize_admissible(history_tree, vt, criterion=criterion)
    assert not s.all_admissible
    assert s.allowed[0] == (1, 15)
    v7_under_v1 = history_tree.descend([0, 1, 3, 6, 7])
    v7_under_v2 = history_tree.descend([0, 2, 4, 6, 7])
    assert (v7_under_v1, v7_under_v2) == (7, 18)
    assert s.allowed[7] == (8,)
    assert s.allowed[18] == (19, 22)
    assert s.allowed[2] == (3, 6)


def test_history_tree_root_pairs(history_tree):
    """Test the payoff pairs still open at the root."""
    s = synthesize_admissible(history_tree, solve_tree(history_tree))
    assert s.root_pairs() == [
        (finite(2), INFINITE),
        (finite(3), INFINITE),
        (finite(5), INFINITE),
    ]


def test_exact_rejects_flat_dominated_choice(counterexample_one):
    """Test that the exact criterion drops the choice beaten by the other branch."""
    vt = solve_tree(counterexample_one)
    exact = synthesize_admissible(counterexample_one, vt)
    path_min = synthesize_admissible(
        counterexample_one, vt, criterion=SynthesisCriterion.PATH_MIN
    )
    assert exact.allowed[0] == (1, 3)
    assert exact.allowed[4] == (7,)
    assert path_min.allowed[4] == (5, 7)

    dominated = TreeStrategy(choices={0: 3, 4: 5})
    assert is_member(path_min, dominated)
    assert not is_member(exact, dominated)


def test_members_are_not_every_mix(counterexample_two):
    """Test that allowed choices combine only when the resulting pair is admissible."""
    s = synthesize_admissible(counterexample_two, solve_tree(counterexample_two))
    assert s.allowed[4] == (5, 7)
    assert s.allowed[10] == (11, 14)
    assert not is_member(s, TreeStrategy(choices={0: 3, 4: 5, 10: 14}))
    assert is_member(s, TreeStrategy(choices={0: 3, 4: 5, 10: 11}))
    assert is_member(s, TreeStrategy(choices={0: 1}))


def test_detour_game_admissible_vs_winning(detour_tree):
    """Test that only the admissible set may gamble on the v2 loop."""
    t, vt = detour_tree
    adm = synthesize(t, vt, SynthesisMode.ADMISSIBLE)
    win = synthesize(t, vt, SynthesisMode.ADMISSIBLE_WINNING)
    v1, v2 = t.descend([0, 1]), t.descend([0, 2])
    assert adm.allowed[0] == (v1, v2)
    assert win.allowed[0] == (v1,)
    assert adm.root_pairs() == [(finite(1), INFINITE), (finite(3), finite(10))]
    assert win.root_pairs() == [(finite(3), finite(10))]


def test_detour_game_extraction(detour_tree):
    """Test the min-cval member of each set."""
    t, vt = detour_tree
    adm = synthesize_admissible(t, vt)
    win = synthesize_admissible_winning(t, vt)
    gamble = extract_strategy(adm)
    safe = extract_strategy(win)
    assert gamble.choice(0) == t.descend([0, 2])
    assert safe.choice(0) == t.descend([0, 1])
    assert is_optimistic(adm, win, gamble)
    assert not is_optimistic(adm, win, safe)
    assert strategy_values(t, safe)[0] == (finite(3), finite(10))


def test_lifted_wcoop_is_admissible_winning(detour_game, detour_tree):
    """Test that the memoryless worst-case cooperative strategy lifts into the set."""
    t, vt = detour_tree
    sigma = lift_strategy(t, wcoop_memoryless(detour_game).choices)
    assert is_member(synthesize_admissible_winning(t, vt), sigma)


@pytest.mark.parametrize("seed", [0, 1, 7, 42])
@pytest.mark.parametrize("mode", list(SynthesisMode))
def test_random_extraction_is_member(history_tree, counterexample_two, mode, seed):
    """Test that seeded draws always produce members."""
    for t in (history_tree, counterexample_two):
        s = synthesize(t, solve_tree(t), mode)
        sigma = extract_strategy(s, ExtractionPolicy.SEEDED_RANDOM, seed)
        assert is_member(s, sigma)


def test_random_extraction_is_reproducible(history_tree):
    """Test that a seed fixes the drawn strategy."""
    s = synthesize_admissible(history_tree, solve_tree(history_tree))
    first = extract_strategy(s, ExtractionPolicy.SEEDED_RANDOM, 3)
    second = extract_strategy(s, ExtractionPolicy.SEEDED_RANDOM, 3)
    assert first == second


def test_path_min_extraction(history_tree):
    """Test extraction under the path-min criterion uses allowed choices only."""
    s = synthesize_admissible(
        history_tree, solve_tree(history_tree), criterion=SynthesisCriterion.PATH_MIN
    )
    sigma = extract_strategy(s)
    for n, child in sigma.choices.items():
        assert child in s.allowed[n]


def test_budget_below_cooperative_value(detour_game):
    """Test that every strategy is admissible when nothing can reach the goal."""
    t = unroll(detour_game, 0)
    s = synthesize_admissible(t, solve_tree(t))
    assert s.all_admissible
    assert s.allowed == {}
    sigma = extract_strategy(s)
    assert is_member(s, sigma)


def test_reachable_nodes_needs_choices(history_tree):
    """Test that a strategy must choose at every Sys node it reaches."""
    with pytest.raises(IncompleteStrategy):
        reachable_nodes(history_tree, TreeStrategy(choices={}))
    with pytest.raises(IncompleteStrategy):
        reachable_nodes(history_tree, TreeStrategy(choices={0: 2}))


def test_reachable_nodes_follow_env(counterexample_one):
    """Test that every Env branch is followed."""
    sigma = TreeStrategy(choices={0: 3, 4: 7})
    assert reachable_nodes(counterexample_one, sigma) == [0, 3, 4, 7, 8, 9]


def test_records_and_transducer(history_tree):
    """Test the serialised views of the allowed choices."""
    s = synthesize_admissible(history_tree, solve_tree(history_tree))
    records = strategy_records(s)
    assert [r.node for r in records] == sorted(s.allowed)
    rows = transducer_rows(s)
    assert len(rows) == sum(len(kids) for kids in s.allowed.values())
    root_rows = [row for row in rows if row.memory_state == 0]
    assert [row.input for row in root_rows] == [None, None]
    assert [row.output for row in root_rows] == [0, 1]

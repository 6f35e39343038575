import pytest
from pydantic import ValidationError

from admsynth.repositories.artifact_repository import load_model
from admsynth.schemas.domain import DfaSpec, GridSpec
from admsynth.schemas.game import GameSpec, Owner
from admsynth.services.errors import LabelOutsideAlphabet
from admsynth.services.game_service import INFINITE, build_game, finite
from admsynth.services.gridworld_service import build_gridworld, cell_labeling
from admsynth.services.product_service import Dfa, product_with_dfa
from admsynth.services.value_service import (
    Region,
    ValueMode,
    classify_regions,
    value_iteration,
)


def goal_watcher():
    """Two-state automaton that accepts once a goal label is read."""
    return Dfa.from_spec(
        DfaSpec(
            states=["wait", "hit"],
            initial="wait",
            accepting=["hit"],
            alphabet=["goal", "other"],
            transitions={
                "wait": {"goal": "hit", "other": "wait"},
                "hit": {"goal": "hit", "other": "hit"},
            },
        )
    )


def goal_labels(g):
    return {v: "goal" if g.is_goal(v) else "other" for v in g.states()}


def test_dfa_step(data_dir):
    """Test the transition lookup."""
    d = Dfa.from_spec(load_model(data_dir / "dfa_visit_a_then_b.json", DfaSpec))
    assert d.step("start", "a") == "seen_a"
    assert d.step("seen_a", "none") == "seen_a"
    assert d.step("seen_a", "b") == "done"
    assert d.accepting == frozenset({"done"})


def test_goal_watcher_mirrors_the_game(detour_game):
    """Test that watching for the goal reproduces the original game."""
    product = product_with_dfa(detour_game, goal_watcher(), goal_labels(detour_game))
    assert product.num_states == 11
    assert len(product.goals) == 1
    (goal,) = product.goals
    assert product.name(goal) == "v6|hit"
    assert product.name(product.initial) == "v0|wait"
    assert value_iteration(product, ValueMode.ADVERSARIAL)[product.initial] == finite(10)


def test_accepting_states_self_loop(detour_game):
    """Test that accepting product states get a single free self-loop."""
    product = product_with_dfa(detour_game, goal_watcher(), goal_labels(detour_game))
    for v in product.goals:
        assert [(a.successor, a.cost) for a in product.actions[v]] == [(v, 0)]


def test_initial_label_is_read(detour_game):
    """Test that the automaton reads the label of the initial state."""
    labels = {v: "goal" for v in detour_game.states()}
    product = product_with_dfa(detour_game, goal_watcher(), labels)
    assert product.num_states == 1
    assert product.is_goal(product.initial)


def test_two_phase_tour(data_dir):
    """Test detouring to the far corner before finishing on the goal cell."""
    grid = load_model(data_dir / "gridworld_4x3.json", GridSpec)
    d = Dfa.from_spec(load_model(data_dir / "dfa_visit_a_then_b.json", DfaSpec))
    g = build_gridworld(grid)
    labels = cell_labeling(grid, {(0, 0): "a", (3, 0): "b"}, "none")
    product = product_with_dfa(g, d, labels)
    assert value_iteration(product, ValueMode.ADVERSARIAL)[product.initial] == finite(4)
    assert product.num_states <= g.num_states * len(d.states) + 2
    assert all(name.endswith("|done") for name in map(product.name, product.goals))


def test_label_outside_alphabet(detour_game):
    """Test that unknown symbols are rejected."""
    labels = goal_labels(detour_game)
    labels[3] = "lava"
    with pytest.raises(LabelOutsideAlphabet, match="lava"):
        product_with_dfa(detour_game, goal_watcher(), labels)


def test_missing_label(detour_game):
    """Test that every state needs a label."""
    labels = goal_labels(detour_game)
    del labels[10]
    with pytest.raises(LabelOutsideAlphabet, match="State 10"):
        product_with_dfa(detour_game, goal_watcher(), labels)


def test_partial_dfa_rejected():
    """Test that the transition function must be total."""
    with pytest.raises(ValidationError):
        DfaSpec(
            states=["q"],
            initial="q",
            accepting=[],
            alphabet=["a", "b"],
            transitions={"q": {"a": "q"}},
        )


def errand_game():
    """Sys can go home at once or pass by the shop first; home is the goal."""
    return build_game(
        GameSpec.model_validate(
            {
                "states": [
                    {"id": 0, "owner": "sys", "name": "start"},
                    {"id": 1, "owner": "env", "goal": True, "name": "home"},
                    {"id": 2, "owner": "env", "name": "road"},
                    {"id": 3, "owner": "sys", "name": "shop"},
                ],
                "initial": 0,
                "edges": [
                    {"from": 0, "action": 0, "to": 1, "cost": 1},
                    {"from": 0, "action": 1, "to": 2, "cost": 1},
                    {"from": 1, "action": 0, "to": 0, "cost": 0},
                    {"from": 2, "action": 0, "to": 3, "cost": 0},
                    {"from": 3, "action": 0, "to": 1, "cost": 2},
                ],
            }
        )
    )


ERRAND_LABELS = {0: "none", 1: "b", 2: "none", 3: "a"}


def test_goal_before_task_is_lost(data_dir):
    """Test that reaching a game goal with the task unfinished leads to a sink."""
    d = Dfa.from_spec(load_model(data_dir / "dfa_visit_a_then_b.json", DfaSpec))
    product = product_with_dfa(errand_game(), d, ERRAND_LABELS)
    names = [product.name(v) for v in product.states()]
    assert names == [
        "start|start",
        "home|start",
        "road|start",
        "lost|sys",
        "shop|seen_a",
        "lost|env",
        "home|done",
    ]
    assert product.goals == frozenset({6})
    assert [(a.successor, a.cost) for a in product.actions[1]] == [(3, 0)]
    assert [(a.successor, a.cost) for a in product.actions[3]] == [(5, 1)]
    assert [(a.successor, a.cost) for a in product.actions[5]] == [(3, 0)]
    assert product.owner(3) is Owner.SYS and product.owner(5) is Owner.ENV

    adv = value_iteration(product, ValueMode.ADVERSARIAL)
    coop = value_iteration(product, ValueMode.COOPERATIVE)
    regions = classify_regions(adv, coop)
    assert adv[product.initial] == finite(3)
    assert adv.witnesses[product.initial] == 1
    for v in (1, 3, 5):
        assert regions[v] is Region.LOSE


def test_sys_goal_before_task_pays_into_sink():
    """Test that a Sys goal pair enters the sink through its Env side."""
    g = build_game(
        GameSpec.model_validate(
            {
                "states": [
                    {"id": 0, "owner": "env"},
                    {"id": 1, "owner": "sys", "goal": True},
                ],
                "initial": 0,
                "edges": [
                    {"from": 0, "action": 0, "to": 1, "cost": 0},
                    {"from": 1, "action": 0, "to": 0, "cost": 1},
                ],
            }
        )
    )
    product = product_with_dfa(g, goal_watcher(), {0: "other", 1: "other"})
    assert product.num_states == 4
    assert product.name(2) == "lost|env"
    assert [(a.successor, a.cost) for a in product.actions[1]] == [(2, 1)]
    assert product.goals == frozenset()


def test_unreachable_acceptance_loses_everywhere(detour_game, data_dir):
    """Test that a task the labels can never finish leaves every state losing."""
    d = Dfa.from_spec(load_model(data_dir / "dfa_visit_a_then_b.json", DfaSpec))
    labels = {v: "none" for v in detour_game.states()}
    product = product_with_dfa(detour_game, d, labels)
    adv = value_iteration(product, ValueMode.ADVERSARIAL)
    coop = value_iteration(product, ValueMode.COOPERATIVE)
    regions = classify_regions(adv, coop)
    assert not product.goals
    assert coop[product.initial] == INFINITE
    assert all(regions[v] is Region.LOSE for v in product.states())


@pytest.mark.parametrize("labels", [ERRAND_LABELS, {0: "a", 1: "b", 2: "b", 3: "a"}])
def test_product_size_bound(data_dir, labels):
    """Test that the product never exceeds one copy of the game per automaton state."""
    d = Dfa.from_spec(load_model(data_dir / "dfa_visit_a_then_b.json", DfaSpec))
    g = errand_game()
    product = product_with_dfa(g, d, labels)
    assert product.num_states <= g.num_states * len(d.states) + 2

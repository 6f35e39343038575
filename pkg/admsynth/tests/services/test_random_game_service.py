import networkx as nx
import numpy as np
import pytest

from admsynth.schemas.game import Owner
from admsynth.services.game_service import serialize_game, to_networkx
from admsynth.services.oracle_service import strategy_count
from admsynth.services.random_game_service import generate_corpus, random_game


@pytest.mark.parametrize("seed", range(20))
def test_random_game_shape(seed):
    """Test the structural guarantees of a drawn game."""
    g = random_game(np.random.Generator(np.random.PCG64(seed)))
    assert 2 <= g.num_states <= 8
    assert g.initial == 0
    assert g.owner(0) is Owner.SYS
    assert not g.is_goal(0)
    assert 1 <= len(g.goals) <= 2
    assert any(g.owner(v) is Owner.ENV for v in g.states())
    for v in g.states():
        assert 1 <= len(g.actions[v]) <= 3


@pytest.mark.parametrize("max_degree", [1, 2])
def test_random_game_degree_limit(max_degree):
    """Test that no state gets more moves than asked for."""
    rng = np.random.Generator(np.random.PCG64(11))
    for _ in range(20):
        g = random_game(rng, max_degree=max_degree)
        assert max(len(moves) for moves in g.actions) <= max_degree


def test_random_games_branch_three_ways():
    """Test that the default draw reaches out-degree three."""
    rng = np.random.Generator(np.random.PCG64(0))
    degrees = [len(moves) for _ in range(50) for moves in random_game(rng).actions]
    assert max(degrees) == 3

@pytest.mark.parametrize("seed", range(20))
def test_every_cycle_costs_energy(seed):
    """Test that no cycle of a drawn game is free."""
    g = random_game(np.random.Generator(np.random.PCG64(seed)))
    graph = to_networkx(g)
    for cycle in nx.simple_cycles(graph):
        edges = zip(cycle, cycle[1:] + cycle[:1])
        assert sum(graph.edges[u, v]["cost"] for u, v in edges) > 0


def test_corpus_is_reproducible():
    """Test that a seed fixes the whole corpus."""
    first = generate_corpus(seed=5, games=6)
    second = generate_corpus(seed=5, games=6)
    assert [serialize_game(e.game) for e in first] == [
        serialize_game(e.game) for e in second
    ]
    assert [e.budget for e in first] == [e.budget for e in second]


def test_corpus_respects_caps():
    """Test that every kept arena is small enough to enumerate."""
    corpus = generate_corpus(seed=2, games=10, strategy_cap=32, pair_cap=512)
    assert len(corpus) == 10
    assert [e.index for e in corpus] == list(range(10))
    for entry in corpus:
        sys_count = strategy_count(entry.arena, Owner.SYS)
        env_count = strategy_count(entry.arena, Owner.ENV)
        assert sys_count <= 32 and env_count <= 32
        assert sys_count * env_count <= 512
        assert 1 <= entry.budget <= 8
        assert entry.arena.budget == entry.budget


def test_corpus_stops_after_attempts():
    """Test that the corpus may come up short when attempts run out."""
    assert len(generate_corpus(seed=0, games=50, max_attempts=3)) <= 3

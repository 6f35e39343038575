from pathlib import Path

import pytest

from admsynth.main import main
from admsynth.repositories.artifact_repository import load_model
from admsynth.repositories.game_repository import load_game
from admsynth.schemas.arena import PayoffTreeSpec
from admsynth.schemas.domain import GridSpec
from admsynth.schemas.errors import ErrorResponse
from admsynth.services.arena_service import build_payoff_tree

DATA_DIR = Path(__file__).resolve().parents[2] / "data"


def env(*children):
    return {"owner": "env", "children": list(children)}


def sys_(*children):
    return {"owner": "sys", "children": list(children)}


def leaf(payoff):
    return {"payoff": payoff}


@pytest.fixture
def data_dir():
    """Directory holding the example games."""
    return DATA_DIR


@pytest.fixture
def trap_game():
    """Six-state game with a trap loop at v4/v5."""
    return load_game(DATA_DIR / "trap_game.json")


@pytest.fixture
def detour_game():
    """Eleven-state illustrative game with goal v6."""
    return load_game(DATA_DIR / "detour_game.json")


@pytest.fixture
def history_tree():
    """Hand-built payoff tree with 28 nodes in preorder."""
    return build_payoff_tree(load_model(DATA_DIR / "history_tree.json", PayoffTreeSpec))


@pytest.fixture
def counterexample_one():
    """
    Tree where path-min allows a dominated strategy.

    Node ids: 0 u, 1 cA, 2 leaf 4, 3 c, 4 e, 5 c1, 6 leaf 5, 7 c2, 8 leaf 2,
    9 dead leaf.
    """
    spec = sys_(
        env(leaf(4)),
        env(sys_(env(leaf(5)), env(leaf(2), leaf("inf")))),
    )
    return build_payoff_tree(PayoffTreeSpec.model_validate(spec))


@pytest.fixture
def counterexample_two():
    """
    Tree whose admissible strategies are not every mix of allowed choices.

    Node ids: 0 u, 1 cA, 2 leaf 4, 3 cB, 4 e, 5 c1, 6 leaf 5, 7 c2, 8 leaf 2,
    9 dead leaf, 10 f, 11 g1, 12 leaf 1, 13 dead leaf, 14 g2, 15 leaf 6.
    """
    spec = sys_(
        env(leaf(4)),
        env(
            sys_(env(leaf(5)), env(leaf(2), leaf("inf"))),
            sys_(env(leaf(1), leaf("inf")), env(leaf(6))),
        ),
    )
    return build_payoff_tree(PayoffTreeSpec.model_validate(spec))


@pytest.fixture
def grid_5x5():
    """Gridworld with a short blockable corridor and a longer safe ring."""
    return load_model(DATA_DIR / "gridworld_5x5.json", GridSpec)


@pytest.fixture
def cli(capsys):
    """Run the command line and return (exit code, stdout, stderr)."""

    def run(*argv):
        code = main([str(arg) for arg in argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run


@pytest.fixture
def error_response():
    """Parse the diagnostic written as the last stderr line."""

    def parse(stderr):
        return ErrorResponse.model_validate_json(stderr.strip().splitlines()[-1])

    return parse

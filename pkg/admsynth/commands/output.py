import argparse
import sys
from typing import Any, Dict, Optional, Tuple, Union

from pydantic import BaseModel

from admsynth.config import RunConfig
from admsynth.repositories.artifact_repository import dump_json, load_model, write_text
from admsynth.repositories.game_repository import load_game
from admsynth.schemas.arena import PayoffTreeSpec
from admsynth.services.arena_service import TreeArena, build_payoff_tree, unroll
from admsynth.services.errors import ArtifactError
from admsynth.services.game_service import GameGraph


def add_output_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", "-o", help="Write here instead of stdout")


def add_arena_arguments(parser: argparse.ArgumentParser) -> None:
    """Arguments that select a tree arena: a game and budget, or a payoff tree."""
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--game", help="Game JSON file to unroll")
    source.add_argument("--tree", help="Payoff tree JSON file")
    parser.add_argument("--budget", type=int, help="Energy budget")
    parser.add_argument("--node-cap", dest="node_cap", type=int, help="Arena size cap")


def meta(config: RunConfig, **extra: Union[int, str, None]) -> Dict[str, Any]:
    """Metadata block shared by every report."""
    block: Dict[str, Any] = {"command": config.command, "seed": config.seed}
    block.update(extra)
    return block


def emit(config: RunConfig, document: Union[BaseModel, str]) -> None:
    """Write a report to ``config.output`` atomically, or to stdout."""
    text = document if isinstance(document, str) else dump_json(document)
    if config.output:
        write_text(config.output, text)
    else:
        sys.stdout.write(text)


def load_arena(config: RunConfig) -> Tuple[TreeArena, Optional[GameGraph]]:
    """
    Build the tree arena a command works on.

    Returns:
        Tuple[TreeArena, Optional[GameGraph]]: The arena, and the game it was
        unrolled from (None for a payoff tree)

    Raises:
        ArtifactError: If a game is given without a budget
    """
    if config.tree:
        spec = load_model(config.tree, PayoffTreeSpec)
        return build_payoff_tree(spec, config.budget), None
    if config.budget is None:
        raise ArtifactError("--budget is required when unrolling --game")
    g = load_game(config.game)
    return unroll(g, config.budget, node_cap=config.node_cap), g

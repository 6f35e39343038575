import argparse
import logging

from admsynth.commands.output import add_output_argument, emit
from admsynth.config import RunConfig
from admsynth.repositories.artifact_repository import load_model
from admsynth.repositories.game_repository import load_game
from admsynth.schemas.domain import DfaSpec, GridSpec, LabelingSpec
from admsynth.services.game_service import serialize_game
from admsynth.services.gridworld_service import build_gridworld
from admsynth.services.product_service import Dfa, product_with_dfa

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("gridworld", help="Compile a gridworld into a game")
    parser.add_argument("--grid", required=True, help="Gridworld JSON file")
    add_output_argument(parser)

    parser = subparsers.add_parser("product", help="Product of a game with a DFA")
    parser.add_argument("--game", required=True, help="Game JSON file")
    parser.add_argument("--dfa", required=True, help="Automaton JSON file")
    parser.add_argument("--labeling", required=True, help="Labeling JSON file")
    add_output_argument(parser)


def gridworld(config: RunConfig) -> int:
    g = build_gridworld(load_model(config.grid, GridSpec))
    emit(config, serialize_game(g))
    return 0


def product(config: RunConfig) -> int:
    g = load_game(config.game)
    dfa = Dfa.from_spec(load_model(config.dfa, DfaSpec))
    labeling = load_model(config.labeling, LabelingSpec)
    emit(config, serialize_game(product_with_dfa(g, dfa, labeling.labels)))
    return 0


HANDLERS = {"gridworld": gridworld, "product": product}

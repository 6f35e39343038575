import argparse
import logging

import networkx as nx

from admsynth.commands.output import (
    add_arena_arguments,
    add_output_argument,
    emit,
    load_arena,
    meta,
)
from admsynth.config import RunConfig
from admsynth.repositories.game_repository import (
    load_game,
    render_arena_dot,
    render_game_dot,
)
from admsynth.schemas.game import (
    Owner,
    StateValueRecord,
    ValidationReport,
    ValuesReport,
)
from admsynth.services.arena_service import solve_tree
from admsynth.services.errors import ArtifactError
from admsynth.services.game_service import to_networkx
from admsynth.services.synthesis_service import SynthesisMode, synthesize
from admsynth.services.value_service import solve_game

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("validate", help="Check a game file")
    parser.add_argument("--game", required=True, help="Game JSON file")
    add_output_argument(parser)

    parser = subparsers.add_parser("values", help="Solve values, regions and WCoop")
    parser.add_argument("--game", required=True, help="Game JSON file")
    add_output_argument(parser)

    parser = subparsers.add_parser("export-dot", help="Render a game or arena as DOT")
    parser.add_argument(
        "--target", choices=["game", "arena"], help="What to render (default game)"
    )
    add_arena_arguments(parser)
    parser.add_argument(
        "--mode", choices=[m.value for m in SynthesisMode], help="Highlighted set"
    )
    add_output_argument(parser)


def validate(config: RunConfig) -> int:
    """Validate a game and report its shape."""
    g = load_game(config.game)
    reachable = nx.descendants(to_networkx(g), g.initial) | {g.initial}
    report = ValidationReport(
        valid=True,
        states=g.num_states,
        edges=g.num_edges,
        goals=sorted(g.goals),
        sys_states=sum(owner is Owner.SYS for owner in g.owners),
        env_states=sum(owner is Owner.ENV for owner in g.owners),
        reachable=len(reachable),
    )
    logger.info(f"Game {config.game} is valid")
    emit(config, report)
    return 0


def values(config: RunConfig) -> int:
    """Solve the game graph and report every state."""
    g = load_game(config.game)
    solution = solve_game(g)
    records = [
        StateValueRecord(
            state=v,
            owner=g.owner(v),
            goal=g.is_goal(v),
            aval=solution.adversarial[v].to_json(),
            cval=solution.cooperative[v].to_json(),
            acval=solution.acval[v].to_json(),
            region=solution.regions[v].value,
            sval=solution.regions.sval(v),
            witness_adv=solution.adversarial.witnesses[v],
            witness_coop=solution.cooperative.witnesses[v],
            wcoop=solution.wcoop.choices.get(v),
        )
        for v in g.states()
    ]
    emit(config, ValuesReport(meta=meta(config), initial=g.initial, states=records))
    return 0


def export_dot(config: RunConfig) -> int:
    """Render the game graph, or the arena with its allowed choices."""
    if config.target == "game":
        if config.game is None:
            raise ArtifactError("--target game needs --game")
        emit(config, render_game_dot(load_game(config.game)))
        return 0
    t, _ = load_arena(config)
    vt = solve_tree(t, config.acval)
    s = synthesize(t, vt, config.mode, config.criterion)
    emit(config, render_arena_dot(t, vt, s))
    return 0


HANDLERS = {"validate": validate, "values": values, "export-dot": export_dot}

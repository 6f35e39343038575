import argparse
import logging

from admsynth.commands.output import (
    add_arena_arguments,
    add_output_argument,
    emit,
    load_arena,
    meta,
)
from admsynth.config import RunConfig
from admsynth.schemas.arena import ArenaReport
from admsynth.services.arena_service import (
    AcvalMethod,
    arena_records,
    arena_stats,
    solve_tree,
)

logger = logging.getLogger(__name__)


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser("unroll", help="Unroll a game into a tree arena")
    add_arena_arguments(parser)
    parser.add_argument(
        "--acval", choices=[m.value for m in AcvalMethod], help="acVal method"
    )
    parser.add_argument(
        "--dump-nodes",
        dest="dump_nodes",
        action="store_true",
        help="Include every node with its values",
    )
    add_output_argument(parser)


def unroll_arena(config: RunConfig) -> int:
    """Report the size and root values of the tree arena."""
    t, _ = load_arena(config)
    vt = solve_tree(t, config.acval)
    report = ArenaReport(
        meta=meta(config, budget=t.budget, acval=config.acval.value),
        stats=arena_stats(t, vt),
        nodes=arena_records(t, vt) if config.dump_nodes else None,
    )
    emit(config, report)
    return 0


HANDLERS = {"unroll": unroll_arena}

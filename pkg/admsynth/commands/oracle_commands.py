import argparse
import logging

from admsynth.commands.output import add_output_argument, emit, meta
from admsynth.config import RunConfig
from admsynth.repositories.game_repository import load_game
from admsynth.schemas.oracle import OracleReport
from admsynth.services.arena_service import unroll
from admsynth.services.errors import ArtifactError
from admsynth.services.random_game_service import CorpusEntry, generate_corpus
from admsynth.services.verification_service import verify_corpus

logger = logging.getLogger(__name__)

ORACLE_MISMATCH = 2


def register(subparsers: argparse._SubParsersAction) -> None:
    parser = subparsers.add_parser(
        "oracle-check", help="Cross-check synthesis against brute force"
    )
    parser.add_argument("--game", help="Check one game instead of a random corpus")
    parser.add_argument("--budget", type=int, help="Budget for --game")
    parser.add_argument("--seed", type=int, help="Corpus seed")
    parser.add_argument("--games", type=int, help="Number of random games")
    parser.add_argument("--max-states", dest="max_states", type=int)
    parser.add_argument("--max-budget", dest="max_budget", type=int)
    parser.add_argument(
        "--enumeration-cap", dest="enumeration_cap", type=int, help="Strategy cap"
    )
    add_output_argument(parser)


def oracle_check(config: RunConfig) -> int:
    """Exit with 2 if any game disagrees with brute force."""
    if config.game:
        if config.budget is None:
            raise ArtifactError("--budget is required with --game")
        g = load_game(config.game)
        t = unroll(g, config.budget, node_cap=config.node_cap)
        corpus = [CorpusEntry(index=0, game=g, budget=config.budget, arena=t)]
    else:
        corpus = generate_corpus(
            config.seed,
            config.games,
            max_states=config.max_states,
            max_budget=config.max_budget,
        )
    checks = verify_corpus(corpus, config.enumeration_cap)
    disagreements = sum(not check.agrees for check in checks)
    report = OracleReport(
        meta=meta(config, games=config.games if not config.game else 1),
        games=len(checks),
        disagreements=disagreements,
        checks=checks,
    )
    emit(config, report)
    if disagreements:
        logger.error(f"{disagreements} of {len(checks)} games disagree with brute force")
        return ORACLE_MISMATCH
    return 0


HANDLERS = {"oracle-check": oracle_check}

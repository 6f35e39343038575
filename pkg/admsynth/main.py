import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

from admsynth.commands import (
    arena_commands,
    domain_commands,
    game_commands,
    oracle_commands,
    strategy_commands,
)
from admsynth.config import RunConfig, settings
from admsynth.schemas.errors import ErrorResponse
from admsynth.services.errors import AdmsynthError, CapExceededError

logger = logging.getLogger(__name__)

COMMAND_MODULES = (
    game_commands,
    arena_commands,
    strategy_commands,
    oracle_commands,
    domain_commands,
)

HANDLERS: Dict[str, Callable[[RunConfig], int]] = {
    name: handler
    for module in COMMAND_MODULES
    for name, handler in module.HANDLERS.items()
}

EXIT_ERROR = 1
EXIT_CAP = 3


class UsageError(Exception):
    """Raised instead of exiting when the command line cannot be parsed."""

    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="admsynth",
        description="Admissible strategy synthesis for quantitative reachability games",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in COMMAND_MODULES:
        module.register(subparsers)
    return parser


def _fail(error: Exception, exit_code: int) -> int:
    detail = " ".join(str(error).split())
    logger.error(f"{type(error).__name__}: {detail}")
    response = ErrorResponse(
        detail=detail, kind=type(error).__name__, exit_code=exit_code
    )
    sys.stderr.write(response.model_dump_json() + "\n")
    return exit_code


def run(config: RunConfig) -> int:
    """
    Run one subcommand and map failures to exit codes.

    Args:
        config: Validated invocation

    Returns:
        int: 0 on success, 1 on invalid input or solver failure, 2 on an oracle
        mismatch, 3 when a size cap is exceeded
    """
    try:
        return HANDLERS[config.command](config)
    except CapExceededError as e:
        return _fail(e, EXIT_CAP)
    except (AdmsynthError, ValidationError) as e:
        return _fail(e, EXIT_ERROR)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        return _fail(e, EXIT_ERROR)

    level = logging.DEBUG if args.verbose else settings.log_level.upper()
    logging.basicConfig(level=level, stream=sys.stderr, force=True)

    options = {key: value for key, value in vars(args).items() if value is not None}
    try:
        config = RunConfig(**options)
    except ValidationError as e:
        return _fail(e, EXIT_ERROR)
    logger.debug(f"Running {config.command} with {config.model_dump()}")
    return run(config)


if __name__ == "__main__":
    sys.exit(main())

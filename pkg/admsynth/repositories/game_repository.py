from typing import Iterator, Optional

from admsynth.repositories.artifact_repository import PathLike, load_model
from admsynth.schemas.game import GameSpec, Owner
from admsynth.services.arena_service import NodeKind, TreeArena, TreeValueTable
from admsynth.services.game_service import GameGraph, build_game
from admsynth.services.synthesis_service import StrategySet


def load_game(path: PathLike) -> GameGraph:
    """
    Read and validate a game file.

    Args:
        path: Game JSON file

    Returns:
        GameGraph: The validated game

    Raises:
        ArtifactError: If the file cannot be read
        pydantic.ValidationError: If the file does not match the game schema
        GameValidationError: If the game breaks a structural rule
    """
    return build_game(load_model(path, GameSpec))


def _quote(text: str) -> str:
    return '"{}"'.format(text.replace('"', r"\""))


# Sys states are circles and Env states boxes; goals get a double border.
def _shape(owner: Owner) -> str:
    return "circle" if owner is Owner.SYS else "box"


def _game_lines(g: GameGraph) -> Iterator[str]:
    yield "digraph game {\n"
    yield "  rankdir=LR;\n"
    for v in g.states():
        peripheries = 2 if g.is_goal(v) else 1
        style = ' style="bold"' if v == g.initial else ""
        yield (
            f"  {v} [label={_quote(g.name(v))} shape={_shape(g.owner(v))} "
            f"peripheries={peripheries}{style}];\n"
        )
    for v in g.states():
        for move in g.actions[v]:
            yield (
                f"  {v} -> {move.successor} "
                f"[label={_quote(f'a{move.action}:{move.cost}')}];\n"
            )
    yield "}\n"


def render_game_dot(g: GameGraph) -> str:
    """Graphviz source for a game graph."""
    return "".join(_game_lines(g))


def _arena_lines(
    t: TreeArena, vt: TreeValueTable, s: Optional[StrategySet]
) -> Iterator[str]:
    allowed = s.allowed if s is not None and not s.all_admissible else None
    yield "digraph arena {\n"
    for n in t.nodes():
        if t.kind[n] is NodeKind.INTERNAL:
            label = f"v{t.game_state[n]}@{t.accumulated[n]}\\n({vt.cval[n]},{vt.aval[n]})"
            yield f"  {n} [label={_quote(label)} shape={_shape(t.owner[n])}];\n"
        else:
            yield f"  {n} [label={_quote(str(t.payoff(n)))} shape=plaintext];\n"
    for n in t.nodes():
        for action, child in t.edges[n]:
            color = ""
            if allowed is not None and child in allowed.get(n, ()):
                color = " color=blue penwidth=2"
            yield f"  {n} -> {child} [label={_quote(f'a{action}')}{color}];\n"
    yield "}\n"


def render_arena_dot(
    t: TreeArena, vt: TreeValueTable, s: Optional[StrategySet] = None
) -> str:
    """
    Graphviz source for a tree arena.

    Internal nodes show their state, accumulated energy and ``(cval, aval)``.
    When a strategy set is given, its allowed Sys choices are highlighted.
    """
    return "".join(_arena_lines(t, vt, s))

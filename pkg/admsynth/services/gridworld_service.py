"""Pursuit gridworlds compiled into game graphs."""

from __future__ import annotations

import logging
from collections import deque
from typing import Dict, List, Mapping, Optional, Tuple, Union

from admsynth.schemas.domain import Cell, GridSpec
from admsynth.schemas.game import EdgeSpec, GameSpec, Owner, StateSpec
from admsynth.services.errors import InvalidSpec
from admsynth.services.game_service import GameGraph, build_game

logger = logging.getLogger(__name__)

# Move order fixes the action ids of every state.
DIRECTIONS: Tuple[Tuple[str, Cell], ...] = (
    ("north", (0, -1)),
    ("south", (0, 1)),
    ("west", (-1, 0)),
    ("east", (1, 0)),
)

CAUGHT_SYS = ("caught", Owner.SYS)
CAUGHT_ENV = ("caught", Owner.ENV)

# (sys cell, env cell, player to move), or one of the two caught sinks.
GridState = Union[Tuple[Cell, Cell, Owner], Tuple[str, Owner]]


def _check(spec: GridSpec) -> None:
    def inside(cell: Cell) -> bool:
        return 0 <= cell[0] < spec.width and 0 <= cell[1] < spec.height

    named = {"sys_start": spec.sys_start, "env_start": spec.env_start, "goal": spec.goal}
    for field, cell in named.items():
        if not inside(cell):
            raise InvalidSpec(
                f"{field} {cell} lies outside the {spec.width}x{spec.height} grid"
            )
    for cell in spec.lava:
        if not inside(cell):
            raise InvalidSpec(f"Lava cell {cell} lies outside the grid")
    lava = set(map(tuple, spec.lava))
    for field, cell in named.items():
        if cell in lava:
            raise InvalidSpec(f"{field} {cell} is lava")
    if spec.sys_start == spec.env_start:
        raise InvalidSpec("Sys and Env cannot start on the same cell")
    if spec.env_start == spec.goal:
        raise InvalidSpec("Env cannot start on the goal cell")


class _GridCompiler:
    def __init__(self, spec: GridSpec):
        self.spec = spec
        self.lava = {tuple(cell) for cell in spec.lava}
        self.ids: Dict[GridState, int] = {}
        self.order: List[GridState] = []
        self.queue: deque = deque()

    def free(self, cell: Cell) -> bool:
        x, y = cell
        return (
            0 <= x < self.spec.width
            and 0 <= y < self.spec.height
            and cell not in self.lava
        )

    def moves(self, cell: Cell, allow_stay: bool, avoid: Optional[Cell]) -> List[Cell]:
        targets = [
            (cell[0] + dx, cell[1] + dy)
            for _, (dx, dy) in DIRECTIONS
            if self.free((cell[0] + dx, cell[1] + dy))
            and (cell[0] + dx, cell[1] + dy) != avoid
        ]
        if allow_stay or not targets:
            targets.append(cell)
        return targets

    def visit(self, state: GridState) -> int:
        if state not in self.ids:
            self.ids[state] = len(self.order)
            self.order.append(state)
            self.queue.append(state)
        return self.ids[state]

    def successors(self, state: GridState) -> List[Tuple[GridState, int]]:
        spec = self.spec
        if state == CAUGHT_SYS:
            return [(CAUGHT_ENV, spec.sys_cost)]
        if state == CAUGHT_ENV:
            return [(CAUGHT_SYS, 0)]
        sys_cell, env_cell, turn = state
        if turn is Owner.SYS:
            result = []
            for cell in self.moves(sys_cell, spec.sys_allow_stay, None):
                if spec.capture and cell == env_cell:
                    result.append((CAUGHT_ENV, spec.sys_cost))
                else:
                    result.append(((cell, env_cell, Owner.ENV), spec.sys_cost))
            return result
        result = []
        for cell in self.moves(env_cell, spec.env_allow_stay, spec.goal):
            if spec.capture and cell == sys_cell:
                result.append((CAUGHT_SYS, 0))
            else:
                result.append(((sys_cell, cell, Owner.SYS), 0))
        return result

    def is_goal(self, state: GridState) -> bool:
        return len(state) == 3 and state[0] == self.spec.goal

    def compile(self) -> Tuple[GameSpec, List[Optional[Cell]]]:
        self.visit((self.spec.sys_start, self.spec.env_start, Owner.SYS))
        edges = []
        while self.queue:
            state = self.queue.popleft()
            source = self.ids[state]
            # Merge moves that land on the same state, e.g. a stay and a capture.
            targets: Dict[int, int] = {}
            for successor, cost in self.successors(state):
                targets.setdefault(self.visit(successor), cost)
            for action, (target, cost) in enumerate(targets.items()):
                edges.append(EdgeSpec(source=source, action=action, to=target, cost=cost))

        states, cells = [], []
        for v, state in enumerate(self.order):
            owner = state[-1]
            if len(state) == 3:
                (sx, sy), (ex, ey), _ = state
                name = f"s{sx},{sy}|e{ex},{ey}|{owner.value}"
                cells.append(state[0])
            else:
                name = f"caught|{owner.value}"
                cells.append(None)
            states.append(StateSpec(id=v, owner=owner, goal=self.is_goal(state), name=name))
        return GameSpec(states=states, initial=0, edges=edges), cells


def compile_gridworld(spec: GridSpec) -> Tuple[GameGraph, List[Optional[Cell]]]:
    """
    Compile a gridworld and report the Sys cell behind every state.

    Returns:
        Tuple[GameGraph, List[Optional[Cell]]]: The game, and the Sys cell per
        state id (None for the caught sinks)

    Raises:
        InvalidSpec: If a cell is out of bounds or the layout is contradictory
    """
    _check(spec)
    game_spec, cells = _GridCompiler(spec).compile()
    game = build_game(game_spec)
    logger.info(
        f"Compiled {spec.width}x{spec.height} gridworld into {game.num_states} states"
    )
    return game, cells


def build_gridworld(spec: GridSpec) -> GameGraph:
    """
    Compile a pursuit gridworld into a game graph.

    Sys moves first from ``sys_start``; each Sys move costs ``sys_cost`` and each
    Env move is free. Env never enters the goal cell. Neither player enters lava
    or leaves the grid, and a player with no legal move stays put. With capture
    enabled, a move onto the other player's cell leads to a pair of caught states
    that alternate forever. Goal states are those where Sys stands on the goal and
    has not been caught.

    Args:
        spec: Gridworld layout

    Returns:
        GameGraph: The compiled game, states numbered in breadth-first order

    Raises:
        InvalidSpec: If a cell is out of bounds or the layout is contradictory
    """
    return compile_gridworld(spec)[0]


def cell_labeling(
    spec: GridSpec, symbols: Mapping[Cell, str], default: str
) -> Dict[int, str]:
    """Label every gridworld state by the Sys cell it stands on."""
    _, cells = compile_gridworld(spec)
    return {
        v: symbols.get(cell, default) if cell is not None else default
        for v, cell in enumerate(cells)
    }

"""Value iteration on game graphs: optimal values, regions, acVal and WCoop."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Tuple

from admsynth.schemas.game import Owner
from admsynth.services.errors import InconsistentTables, UnknownState
from admsynth.services.game_service import (
    INFINITE,
    ZERO,
    ExtendedCost,
    GameGraph,
    find_action,
)

logger = logging.getLogger(__name__)


class ValueMode(str, Enum):
    """How the Env player resolves its choices."""

    ADVERSARIAL = "adversarial"
    COOPERATIVE = "cooperative"


class Region(str, Enum):
    """Region of a state by what the Sys player can achieve from it."""

    WIN = "win"
    PENDING = "pending"
    LOSE = "lose"

    @property
    def sval(self) -> int:
        return {Region.WIN: 1, Region.PENDING: 0, Region.LOSE: -1}[self]


@dataclass(frozen=True)
class ValueTable:
    """Per-state optimal values for one mode, with witness actions.

    Witnesses are None on goal states, where the game has already ended.
    """

    mode: ValueMode
    values: Tuple[ExtendedCost, ...]
    witnesses: Tuple[Optional[int], ...]
    sweeps: int = 0

    def __getitem__(self, v: int) -> ExtendedCost:
        return self.values[v]


@dataclass(frozen=True)
class RegionMap:
    regions: Tuple[Region, ...]

    def __getitem__(self, v: int) -> Region:
        return self.regions[v]

    def sval(self, v: int) -> int:
        return self.regions[v].sval

    def states_in(self, region: Region) -> List[int]:
        return [v for v, r in enumerate(self.regions) if r is region]


@dataclass(frozen=True)
class MemorylessStrategy:
    """A positional Sys strategy: one action per non-goal Sys state."""

    choices: Dict[int, int]

    def action(self, v: int) -> int:
        return self.choices[v]


@dataclass(frozen=True)
class GameSolution:
    """Everything the values pipeline derives from a single game."""

    adversarial: ValueTable
    cooperative: ValueTable
    regions: RegionMap
    acval: Tuple[ExtendedCost, ...]
    wcoop: MemorylessStrategy


def _bellman(
    g: GameGraph, v: int, values: List[ExtendedCost], mode: ValueMode
) -> ExtendedCost:
    if g.is_goal(v):
        return ZERO
    options = [values[move.successor] + move.cost for move in g.actions[v]]
    if g.owner(v) is Owner.ENV and mode is ValueMode.ADVERSARIAL:
        return max(options)
    return min(options)


def _witness(
    g: GameGraph, v: int, values: Tuple[ExtendedCost, ...], mode: ValueMode
) -> Optional[int]:
    if g.is_goal(v):
        return None
    maximise = g.owner(v) is Owner.ENV and mode is ValueMode.ADVERSARIAL
    best_action, best = None, None
    for move in g.actions[v]:
        candidate = values[move.successor] + move.cost
        if best is None or (candidate > best if maximise else candidate < best):
            best_action, best = move.action, candidate
    return best_action


def value_iteration(g: GameGraph, mode: ValueMode) -> ValueTable:
    """
    Compute optimal values by iterating the Bellman update to its fixed point.

    Goals start at 0 and every other state at infinity. Each sweep reads only the
    previous table, and iteration stops on exact equality between sweeps.

    Args:
        g: The game
        mode: Adversarial (Env maximises) or Cooperative (Env minimises)

    Returns:
        ValueTable: Values and lowest-action-id witnesses
    """
    values = [ZERO if g.is_goal(v) else INFINITE for v in g.states()]
    sweeps = 0
    while True:
        sweeps += 1
        updated = [_bellman(g, v, values, mode) for v in g.states()]
        if updated == values:
            break
        values = updated
    frozen = tuple(values)
    witnesses = tuple(_witness(g, v, frozen, mode) for v in g.states())
    logger.info(f"Value iteration ({mode.value}) converged after {sweeps} sweeps")
    return ValueTable(mode=mode, values=frozen, witnesses=witnesses, sweeps=sweeps)


def classify_regions(adv: ValueTable, coop: ValueTable) -> RegionMap:
    """
    Partition states into Win, Pending and Lose regions.

    Args:
        adv: Adversarial value table
        coop: Cooperative value table over the same game

    Returns:
        RegionMap: One region per state

    Raises:
        InconsistentTables: If the tables differ in size or cval > aval anywhere
    """
    if len(adv.values) != len(coop.values):
        raise InconsistentTables(
            f"Tables cover {len(adv.values)} and {len(coop.values)} states"
        )
    regions = []
    for v, (aval, cval) in enumerate(zip(adv.values, coop.values)):
        if cval > aval:
            raise InconsistentTables(f"State {v}: cval {cval} exceeds aval {aval}")
        if aval.is_finite:
            regions.append(Region.WIN)
        elif cval.is_finite:
            regions.append(Region.PENDING)
        else:
            regions.append(Region.LOSE)
    return RegionMap(regions=tuple(regions))


def _layered_values(
    g: GameGraph, adv: ValueTable, top: int
) -> List[Tuple[ExtendedCost, ...]]:
    """Cooperative values of the budget-layered subgame for every layer ``0..top``.

    ``layers[r][u]`` is the cheapest cooperative cost from ``u`` with ``r`` energy
    left, using only moves that keep every visited state within its remaining
    budget (``aval(s) <= r``). States outside the layer get infinity.
    """
    sys_states = [v for v in g.states() if not g.is_goal(v) and g.owner(v) is Owner.SYS]
    env_states = [v for v in g.states() if not g.is_goal(v) and g.owner(v) is Owner.ENV]
    layers: List[Tuple[ExtendedCost, ...]] = []
    for r in range(top + 1):
        row = [INFINITE] * g.num_states
        for v in g.goals:
            row[v] = ZERO
        for v in sys_states:
            if adv[v].amount is None or adv[v].amount > r:
                continue
            best = INFINITE
            for move in g.actions[v]:
                rest = r - move.cost
                if rest < 0 or not adv[move.successor] <= ExtendedCost(rest):
                    continue
                best = min(best, layers[rest][move.successor] + move.cost)
            row[v] = best
        for v in env_states:
            if adv[v].amount is None or adv[v].amount > r:
                continue
            row[v] = min(row[move.successor] + move.cost for move in g.actions[v])
        layers.append(tuple(row))
    return layers


def acval_graph(
    g: GameGraph,
    v: int,
    adv: ValueTable,
    coop: Optional[ValueTable] = None,
) -> ExtendedCost:
    """
    Best cooperative value among strategies that stay worst-case optimal from ``v``.

    The subgame tracks the energy left from ``aval(v)`` and admits a Sys move only
    if its successor can still be won adversarially within what remains. Outside
    the winning region the bound is infinite and the result is ``cval(v)``.

    Args:
        g: The game
        v: State id
        adv: Adversarial value table of ``g``
        coop: Optional cooperative table, computed if omitted

    Returns:
        ExtendedCost: acVal of ``v``; infinity when ``v`` is in the Lose region

    Raises:
        UnknownState: If ``v`` is not a state of ``g``
    """
    if not 0 <= v < g.num_states:
        raise UnknownState(f"State {v} does not exist")
    bound = adv[v]
    if not bound.is_finite:
        coop = coop or value_iteration(g, ValueMode.COOPERATIVE)
        return coop[v]
    return _layered_values(g, adv, bound.amount)[bound.amount][v]


def acval_table(
    g: GameGraph, adv: ValueTable, coop: ValueTable
) -> Tuple[ExtendedCost, ...]:
    """acVal of every state, sharing one layered pass."""
    finite_values = [value.amount for value in adv.values if value.is_finite]
    layers = _layered_values(g, adv, max(finite_values, default=0))
    return tuple(
        layers[adv[v].amount][v] if adv[v].is_finite else coop[v] for v in g.states()
    )


def wcoop_memoryless(
    g: GameGraph,
    adv: Optional[ValueTable] = None,
    coop: Optional[ValueTable] = None,
) -> MemorylessStrategy:
    """
    Extract a memoryless worst-case cooperative optimal strategy.

    At each Sys state the strategy takes the first move of a cheapest cooperative
    path inside that state's own budget-layered subgame (lowest action id on ties).
    States outside the winning region follow the cooperative witness.

    Every chosen move in the winning region keeps ``aval(u) + cost == aval(v)``,
    so ``aVal(v, sigma) == aval(v)`` there. The cooperative side only satisfies
    ``acval(v) <= cVal(v, sigma)``: a state reached with energy to spare may allow
    a riskier, cheaper continuation than its own budget does, and a positional
    choice cannot tell the two visits apart.

    Args:
        g: The game
        adv: Optional adversarial table, computed if omitted
        coop: Optional cooperative table, computed if omitted

    Returns:
        MemorylessStrategy: One action per non-goal Sys state
    """
    adv = adv or value_iteration(g, ValueMode.ADVERSARIAL)
    coop = coop or value_iteration(g, ValueMode.COOPERATIVE)
    finite_values = [value.amount for value in adv.values if value.is_finite]
    layers = _layered_values(g, adv, max(finite_values, default=0))

    choices: Dict[int, int] = {}
    for v in g.states():
        if g.is_goal(v) or g.owner(v) is not Owner.SYS:
            continue
        if not adv[v].is_finite:
            choices[v] = coop.witnesses[v]
            continue
        r = adv[v].amount
        best_action, best = None, INFINITE
        for move in g.actions[v]:
            rest = r - move.cost
            if rest < 0 or not adv[move.successor] <= ExtendedCost(rest):
                continue
            candidate = layers[rest][move.successor] + move.cost
            if best_action is None or candidate < best:
                best_action, best = move.action, candidate
        choices[v] = best_action
    return MemorylessStrategy(choices=choices)


def memoryless_values(
    g: GameGraph, sigma: MemorylessStrategy
) -> Tuple[ValueTable, ValueTable]:
    """
    Adversarial and cooperative values of a fixed memoryless Sys strategy.

    Every Sys state keeps only the move ``sigma`` picks, leaving Env as the only
    player with a choice.

    Returns:
        Tuple[ValueTable, ValueTable]: ``aVal(v, sigma)`` and ``cVal(v, sigma)``

    Raises:
        InvalidPlay: If ``sigma`` names an action a state does not have
    """
    actions = tuple(
        (find_action(g, v, sigma.action(v)),) if v in sigma.choices else moves
        for v, moves in enumerate(g.actions)
    )
    fixed = replace(g, actions=actions)
    return (
        value_iteration(fixed, ValueMode.ADVERSARIAL),
        value_iteration(fixed, ValueMode.COOPERATIVE),
    )


def solve_game(g: GameGraph) -> GameSolution:
    """Run both value iterations and derive regions, acVal and a WCoop strategy."""
    adv = value_iteration(g, ValueMode.ADVERSARIAL)
    coop = value_iteration(g, ValueMode.COOPERATIVE)
    regions = classify_regions(adv, coop)
    solution = GameSolution(
        adversarial=adv,
        cooperative=coop,
        regions=regions,
        acval=acval_table(g, adv, coop),
        wcoop=wcoop_memoryless(g, adv, coop),
    )
    logger.info(
        f"Solved game: initial state {g.initial} is in the "
        f"{regions[g.initial].value} region (aval {adv[g.initial]}, "
        f"cval {coop[g.initial]})"
    )
    return solution

"""Core game-graph model: extended costs, validated games, plays and payoffs."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, NamedTuple, Optional, Tuple, Union

import networkx as nx

from admsynth.schemas.game import CostValue, EdgeSpec, GameSpec, Owner, StateSpec
from admsynth.services.errors import (
    AlternationViolation,
    BlockingState,
    CostSignViolation,
    DanglingReference,
    InjectivityViolation,
    InvalidPlay,
    UnknownState,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExtendedCost:
    """A nonnegative integer cost, or the infinite cost when ``amount`` is None.

    Addition saturates at infinity and every finite cost is below infinity.
    """

    amount: Optional[int] = None

    def __post_init__(self) -> None:
        if self.amount is not None and self.amount < 0:
            raise ValueError(f"Costs are nonnegative, got {self.amount}")

    @classmethod
    def from_json(cls, value: CostValue) -> ExtendedCost:
        if value == "inf":
            return INFINITE
        return cls(int(value))

    @property
    def is_finite(self) -> bool:
        return self.amount is not None

    def to_json(self) -> CostValue:
        return "inf" if self.amount is None else self.amount

    def sort_key(self) -> Tuple[int, int]:
        return (1, 0) if self.amount is None else (0, self.amount)

    def __lt__(self, other: ExtendedCost) -> bool:
        return self.sort_key() < other.sort_key()

    def __le__(self, other: ExtendedCost) -> bool:
        return self.sort_key() <= other.sort_key()

    def __gt__(self, other: ExtendedCost) -> bool:
        return self.sort_key() > other.sort_key()

    def __ge__(self, other: ExtendedCost) -> bool:
        return self.sort_key() >= other.sort_key()

    def __add__(self, other: Union[ExtendedCost, int]) -> ExtendedCost:
        other_amount = other if isinstance(other, int) else other.amount
        if self.amount is None or other_amount is None:
            return INFINITE
        return ExtendedCost(self.amount + other_amount)

    __radd__ = __add__

    def __str__(self) -> str:
        return "inf" if self.amount is None else str(self.amount)

    def __repr__(self) -> str:
        return "Infinite" if self.amount is None else f"Finite({self.amount})"


INFINITE = ExtendedCost()
ZERO = ExtendedCost(0)


def finite(amount: int) -> ExtendedCost:
    return ExtendedCost(amount)


class Action(NamedTuple):
    """One labelled transition out of a state."""

    action: int
    successor: int
    cost: int


@dataclass(frozen=True)
class GameGraph:
    """Immutable two-player turn-based quantitative reachability game.

    State ids are ``0..n-1``. ``actions[v]`` lists the transitions of ``v`` in
    ascending action id.
    """

    owners: Tuple[Owner, ...]
    initial: int
    actions: Tuple[Tuple[Action, ...], ...]
    goals: FrozenSet[int]
    names: Tuple[Optional[str], ...] = ()

    @property
    def num_states(self) -> int:
        return len(self.owners)

    @property
    def num_edges(self) -> int:
        return sum(len(moves) for moves in self.actions)

    def owner(self, v: int) -> Owner:
        return self.owners[v]

    def is_goal(self, v: int) -> bool:
        return v in self.goals

    def name(self, v: int) -> str:
        if self.names and self.names[v] is not None:
            return self.names[v]
        return f"v{v}"

    def states(self) -> range:
        return range(len(self.owners))


@dataclass(frozen=True)
class Play:
    """A sequence of states joined by the recorded actions.

    ``terminating`` is False for a play that never reaches a goal; its recorded
    states are then a finite prefix.
    """

    states: Tuple[int, ...]
    actions: Tuple[int, ...]
    terminating: bool = True

    def __post_init__(self) -> None:
        if len(self.actions) != len(self.states) - 1:
            raise InvalidPlay(
                f"A play with {len(self.states)} states needs "
                f"{len(self.states) - 1} actions, got {len(self.actions)}"
            )

    @property
    def last(self) -> int:
        return self.states[-1]


def build_game(spec: GameSpec) -> GameGraph:
    """
    Build a validated game graph from a parsed game description.

    Args:
        spec: Schema-valid game description

    Returns:
        GameGraph: The validated, immutable game

    Raises:
        DanglingReference: If the initial state or an edge names an unknown state
        InjectivityViolation: If two actions of a state share a successor
        BlockingState: If a state has no outgoing action
        AlternationViolation: If a non-goal transition keeps the same owner
        CostSignViolation: If a non-goal Sys action is free or an Env action costs
    """
    n = len(spec.states)
    by_id = {state.id: state for state in spec.states}
    if spec.initial not in by_id:
        raise DanglingReference(f"Initial state {spec.initial} does not exist")

    moves: Dict[int, List[Action]] = {v: [] for v in range(n)}
    for edge in spec.edges:
        if edge.source not in by_id:
            raise DanglingReference(
                f"Edge {edge.source}:{edge.action} leaves unknown state {edge.source}"
            )
        if edge.to not in by_id:
            raise DanglingReference(
                f"Edge {edge.source}:{edge.action} enters unknown state {edge.to}"
            )
        moves[edge.source].append(Action(edge.action, edge.to, edge.cost))

    owners = tuple(by_id[v].owner for v in range(n))
    goals = frozenset(v for v in range(n) if by_id[v].goal)

    for v in range(n):
        moves[v].sort()
        successors_seen: Dict[int, int] = {}
        for move in moves[v]:
            if move.successor in successors_seen:
                raise InjectivityViolation(
                    f"State {v}: actions {successors_seen[move.successor]} and "
                    f"{move.action} both lead to state {move.successor}"
                )
            successors_seen[move.successor] = move.action
        if not moves[v]:
            raise BlockingState(f"State {v} has no outgoing action")
        # Goal states end the game, so their edges are never played.
        if v in goals:
            continue
        for move in moves[v]:
            if owners[move.successor] == owners[v]:
                raise AlternationViolation(
                    f"State {v} ({owners[v].value}) action {move.action} leads to "
                    f"state {move.successor} owned by the same player"
                )
            if owners[v] is Owner.SYS and move.cost <= 0:
                raise CostSignViolation(
                    f"Sys state {v} action {move.action} must have a positive cost"
                )
            if owners[v] is Owner.ENV and move.cost != 0:
                raise CostSignViolation(
                    f"Env state {v} action {move.action} must cost 0, "
                    f"got {move.cost}"
                )

    game = GameGraph(
        owners=owners,
        initial=spec.initial,
        actions=tuple(tuple(moves[v]) for v in range(n)),
        goals=goals,
        names=tuple(by_id[v].name for v in range(n)),
    )
    logger.debug(f"Built game with {n} states and {game.num_edges} edges")
    return game


def serialize_game(g: GameGraph) -> GameSpec:
    """Convert a game back into its file schema."""
    states = [
        StateSpec(
            id=v,
            owner=g.owners[v],
            goal=v in g.goals,
            name=g.names[v] if g.names else None,
        )
        for v in g.states()
    ]
    edges = [
        EdgeSpec(source=v, action=move.action, to=move.successor, cost=move.cost)
        for v in g.states()
        for move in g.actions[v]
    ]
    return GameSpec(states=states, initial=g.initial, edges=edges)


def successors(g: GameGraph, v: int) -> List[Action]:
    """
    List the transitions of a state.

    Args:
        g: The game
        v: State id

    Returns:
        List[Action]: ``(action, successor, cost)`` triples by ascending action id

    Raises:
        UnknownState: If ``v`` is not a state of ``g``
    """
    if not 0 <= v < g.num_states:
        raise UnknownState(f"State {v} does not exist")
    return list(g.actions[v])


def find_action(g: GameGraph, v: int, action: int) -> Action:
    for move in successors(g, v):
        if move.action == action:
            return move
    raise InvalidPlay(f"State {v} has no action {action}")


def payoff_of_play(g: GameGraph, p: Play) -> ExtendedCost:
    """
    Compute the total payoff of a play.

    Args:
        g: The game
        p: A play of ``g``; terminating plays end at their first goal

    Returns:
        ExtendedCost: The sum of action costs, or infinity for a
        non-terminating play

    Raises:
        InvalidPlay: If an edge is missing from ``g`` or goal termination is broken
    """
    total = 0
    for i, action in enumerate(p.actions):
        source = p.states[i]
        if g.is_goal(source):
            raise InvalidPlay(f"Play continues past goal state {source} at step {i}")
        move = find_action(g, source, action)
        if move.successor != p.states[i + 1]:
            raise InvalidPlay(
                f"Action {action} of state {source} leads to {move.successor}, "
                f"not {p.states[i + 1]}"
            )
        total += move.cost
    if not p.terminating:
        return INFINITE
    if not g.is_goal(p.last):
        raise InvalidPlay(f"Terminating play ends in non-goal state {p.last}")
    return finite(total)


def to_networkx(g: GameGraph) -> nx.DiGraph:
    """Directed-graph view with ``owner``/``goal`` node and ``action``/``cost`` edge data."""
    graph = nx.DiGraph()
    for v in g.states():
        graph.add_node(v, owner=g.owners[v].value, goal=v in g.goals, name=g.name(v))
    for v in g.states():
        for move in g.actions[v]:
            graph.add_edge(v, move.successor, action=move.action, cost=move.cost)
    return graph

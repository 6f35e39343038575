"""Synchronous product of a game with a deterministic finite automaton."""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Tuple

from admsynth.schemas.domain import DfaSpec
from admsynth.schemas.game import EdgeSpec, GameSpec, Owner, StateSpec
from admsynth.services.errors import LabelOutsideAlphabet
from admsynth.services.game_service import GameGraph, build_game

logger = logging.getLogger(__name__)

Pair = Tuple[int, str]

# Sink pairs for plays that hit a goal of the game before the task is done.
LOST_SYS: Pair = (-1, "sys")
LOST_ENV: Pair = (-1, "env")


@dataclass(frozen=True)
class Dfa:
    """A complete deterministic automaton over string symbols."""

    states: Tuple[str, ...]
    initial: str
    accepting: FrozenSet[str]
    alphabet: FrozenSet[str]
    delta: Mapping[Tuple[str, str], str]

    @classmethod
    def from_spec(cls, spec: DfaSpec) -> Dfa:
        return cls(
            states=tuple(spec.states),
            initial=spec.initial,
            accepting=frozenset(spec.accepting),
            alphabet=frozenset(spec.alphabet),
            delta={
                (q, symbol): target
                for q, row in spec.transitions.items()
                for symbol, target in row.items()
            },
        )

    def step(self, q: str, symbol: str) -> str:
        return self.delta[(q, symbol)]


def _check_labeling(g: GameGraph, d: Dfa, labeling: Mapping[int, str]) -> None:
    for v in g.states():
        if v not in labeling:
            raise LabelOutsideAlphabet(f"State {v} has no label")
        if labeling[v] not in d.alphabet:
            raise LabelOutsideAlphabet(
                f"Label {labeling[v]!r} of state {v} is not in the alphabet"
            )


def product_with_dfa(
    g: GameGraph, d: Dfa, labeling: Mapping[int, str]
) -> GameGraph:
    """
    Build the product game whose goals are the accepting automaton states.

    The automaton reads the label of every state a play enters, starting with the
    initial state. A product state ``(v, q)`` keeps the owner of ``v``, and moves
    of ``v`` keep their costs. Only states reachable from the initial pair are
    built; accepting pairs end the game and get a single free self-loop.

    A goal ``v`` of the game paired with a non-accepting ``q`` ends the play
    without completing the task. Such pairs move into a losing sink, a Sys and
    an Env state cycling forever with cost 1 on the Sys side.

    Args:
        g: The game
        d: The automaton
        labeling: Alphabet symbol of every game state

    Returns:
        GameGraph: The product game, states numbered in breadth-first order

    Raises:
        LabelOutsideAlphabet: If a state is unlabelled or labelled outside the
            alphabet
    """
    _check_labeling(g, d, labeling)
    start = (g.initial, d.step(d.initial, labeling[g.initial]))
    ids: Dict[Pair, int] = {}
    order: List[Pair] = []
    queue: deque = deque()

    def visit(pair: Pair) -> int:
        if pair not in ids:
            ids[pair] = len(order)
            order.append(pair)
            queue.append(pair)
        return ids[pair]

    visit(start)
    edges: List[EdgeSpec] = []
    while queue:
        pair = queue.popleft()
        source = ids[pair]
        if pair == LOST_SYS:
            edges.append(EdgeSpec(source=source, action=0, to=visit(LOST_ENV), cost=1))
            continue
        if pair == LOST_ENV:
            edges.append(EdgeSpec(source=source, action=0, to=visit(LOST_SYS), cost=0))
            continue
        v, q = pair
        if q in d.accepting:
            edges.append(EdgeSpec(source=source, action=0, to=source, cost=0))
            continue
        if g.is_goal(v):
            if g.owner(v) is Owner.SYS:
                target, cost = visit(LOST_ENV), 1
            else:
                target, cost = visit(LOST_SYS), 0
            edges.append(EdgeSpec(source=source, action=0, to=target, cost=cost))
            continue
        for move in g.actions[v]:
            target = visit((move.successor, d.step(q, labeling[move.successor])))
            edges.append(
                EdgeSpec(source=source, action=move.action, to=target, cost=move.cost)
            )

    states = [_product_state(g, d, i, pair) for i, pair in enumerate(order)]
    product = build_game(GameSpec(states=states, initial=0, edges=edges))
    logger.info(
        f"Product with {len(d.states)}-state automaton has {product.num_states} states"
    )
    return product


def _product_state(g: GameGraph, d: Dfa, i: int, pair: Pair) -> StateSpec:
    if pair == LOST_SYS:
        return StateSpec(id=i, owner=Owner.SYS, name="lost|sys")
    if pair == LOST_ENV:
        return StateSpec(id=i, owner=Owner.ENV, name="lost|env")
    v, q = pair
    return StateSpec(
        id=i, owner=g.owner(v), goal=q in d.accepting, name=f"{g.name(v)}|{q}"
    )

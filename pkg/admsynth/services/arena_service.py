"""Budget-bounded tree arenas and their backward-induction values."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

from admsynth.schemas.arena import ArenaNodeRecord, ArenaStats, PayoffTreeSpec
from admsynth.schemas.game import Owner
from admsynth.services.errors import BudgetOverflowGuard, UnknownState
from admsynth.services.game_service import INFINITE, ExtendedCost, GameGraph, finite
from admsynth.services.value_service import Region

logger = logging.getLogger(__name__)

DEFAULT_NODE_CAP = 10**7


class NodeKind(str, Enum):
    INTERNAL = "internal"
    GOAL_LEAF = "goal"
    DEAD_LEAF = "dead"


class AcvalMethod(str, Enum):
    """How acVal is computed at tree nodes."""

    SUBGAME = "subgame"
    ONE_STEP = "one-step"


@dataclass(frozen=True)
class TreeArena:
    """A finite tree of histories with leaf-local payoffs.

    Nodes are stored column-wise and numbered in depth-first preorder, so every
    child has a larger id than its parent and each subtree is a contiguous id
    range. ``edges[n]`` holds ``(action, child)`` pairs by ascending action.
    """

    game_state: Tuple[int, ...]
    accumulated: Tuple[int, ...]
    owner: Tuple[Owner, ...]
    parent: Tuple[Optional[int], ...]
    action_in: Tuple[Optional[int], ...]
    kind: Tuple[NodeKind, ...]
    edges: Tuple[Tuple[Tuple[int, int], ...], ...]
    budget: int
    root: int = 0

    @property
    def num_nodes(self) -> int:
        return len(self.game_state)

    def nodes(self) -> range:
        return range(len(self.game_state))

    def children(self, n: int) -> List[int]:
        return [child for _, child in self.edges[n]]

    def is_leaf(self, n: int) -> bool:
        return self.kind[n] is not NodeKind.INTERNAL

    def payoff(self, n: int) -> ExtendedCost:
        if self.kind[n] is NodeKind.GOAL_LEAF:
            return finite(self.accumulated[n])
        if self.kind[n] is NodeKind.DEAD_LEAF:
            return INFINITE
        raise UnknownState(f"Node {n} is internal and has no payoff")

    def decision_nodes(self, owner: Owner) -> List[int]:
        """Internal nodes of one player, ascending id."""
        return [
            n
            for n in self.nodes()
            if self.kind[n] is NodeKind.INTERNAL and self.owner[n] is owner
        ]

    def child_by_action(self, n: int, action: int) -> int:
        for edge_action, child in self.edges[n]:
            if edge_action == action:
                return child
        raise UnknownState(f"Node {n} has no action {action}")

    def descend(self, states: Sequence[int]) -> int:
        """Follow game-state labels from the root; ``states[0]`` labels the root."""
        if not states or self.game_state[self.root] != states[0]:
            raise UnknownState(f"Root is not labelled {states[:1]}")
        node = self.root
        for state in states[1:]:
            matches = [c for c in self.children(node) if self.game_state[c] == state]
            if not matches:
                raise UnknownState(f"Node {node} has no child labelled {state}")
            node = matches[0]
        return node

    @cached_property
    def subtree_end(self) -> Tuple[int, ...]:
        """One past the last node id of each node's subtree."""
        end = list(range(1, self.num_nodes + 1))
        for n in reversed(self.nodes()):
            if self.edges[n]:
                end[n] = end[self.edges[n][-1][1]]
        return tuple(end)

    @cached_property
    def depth(self) -> Tuple[int, ...]:
        depth = [0] * self.num_nodes
        for n in self.nodes():
            if self.parent[n] is not None:
                depth[n] = depth[self.parent[n]] + 1
        return tuple(depth)


@dataclass(frozen=True)
class TreeValueTable:
    """Per-node values on a tree arena.

    ``acval`` is filled by :func:`solve_tree` and is None on nodes that are not
    internal Sys nodes.
    """

    aval: Tuple[ExtendedCost, ...]
    cval: Tuple[ExtendedCost, ...]
    in_win: Tuple[bool, ...]
    acval: Tuple[Optional[ExtendedCost], ...] = ()

    def region(self, n: int) -> Region:
        if self.in_win[n]:
            return Region.WIN
        return Region.PENDING if self.cval[n].is_finite else Region.LOSE


class _ArenaBuilder:
    """Accumulates tree columns while nodes are appended in preorder."""

    def __init__(self, budget: int, node_cap: int):
        self.budget = budget
        self.node_cap = node_cap
        self.game_state: List[int] = []
        self.accumulated: List[int] = []
        self.owner: List[Owner] = []
        self.parent: List[Optional[int]] = []
        self.action_in: List[Optional[int]] = []
        self.kind: List[NodeKind] = []
        self.edges: List[List[Tuple[int, int]]] = []

    def add(
        self,
        state: int,
        accumulated: int,
        owner: Owner,
        kind: NodeKind,
        parent: Optional[int],
        action: Optional[int],
    ) -> int:
        node = len(self.game_state)
        if node >= self.node_cap:
            raise BudgetOverflowGuard(
                f"Unrolling with budget {self.budget} exceeds the cap of "
                f"{self.node_cap} nodes"
            )
        self.game_state.append(state)
        self.accumulated.append(accumulated)
        self.owner.append(owner)
        self.parent.append(parent)
        self.action_in.append(action)
        self.kind.append(kind)
        self.edges.append([])
        if parent is not None:
            self.edges[parent].append((action, node))
        return node

    def build(self) -> TreeArena:
        return TreeArena(
            game_state=tuple(self.game_state),
            accumulated=tuple(self.accumulated),
            owner=tuple(self.owner),
            parent=tuple(self.parent),
            action_in=tuple(self.action_in),
            kind=tuple(self.kind),
            edges=tuple(tuple(e) for e in self.edges),
            budget=self.budget,
        )


def unroll(g: GameGraph, budget: int, node_cap: int = DEFAULT_NODE_CAP) -> TreeArena:
    """
    Unroll a game into the tree of its histories up to an energy budget.

    A node whose accumulated cost exceeds the budget is a dead leaf. Otherwise a
    goal state gives a goal leaf and any other state is expanded.

    Args:
        g: The game
        budget: Energy budget, inclusive
        node_cap: Maximum number of tree nodes

    Returns:
        TreeArena: Nodes in depth-first preorder with ascending actions

    Raises:
        ValueError: If the budget is negative
        BudgetOverflowGuard: If the tree would exceed ``node_cap`` nodes
    """
    if budget < 0:
        raise ValueError(f"Budget must be nonnegative, got {budget}")
    builder = _ArenaBuilder(budget, node_cap)
    stack: List[Tuple[int, int, Optional[int], Optional[int]]] = [
        (g.initial, 0, None, None)
    ]
    while stack:
        state, accumulated, parent, action = stack.pop()
        if accumulated > budget:
            kind = NodeKind.DEAD_LEAF
        elif g.is_goal(state):
            kind = NodeKind.GOAL_LEAF
        else:
            kind = NodeKind.INTERNAL
        node = builder.add(state, accumulated, g.owner(state), kind, parent, action)
        if kind is NodeKind.INTERNAL:
            for move in reversed(g.actions[state]):
                stack.append(
                    (move.successor, accumulated + move.cost, node, move.action)
                )
    arena = builder.build()
    logger.info(f"Unrolled tree with {arena.num_nodes} nodes (budget {budget})")
    return arena


def build_payoff_tree(spec: PayoffTreeSpec, budget: Optional[int] = None) -> TreeArena:
    """
    Build a tree arena from a hand-written payoff tree.

    Internal nodes get accumulated cost 0 and leaves carry their payoff directly;
    an infinite payoff becomes a dead leaf.

    Args:
        spec: Nested tree description
        budget: Budget recorded on the arena, by default the largest finite payoff

    Returns:
        TreeArena: The tree in depth-first preorder
    """
    payoffs = []
    pending = [spec]
    while pending:
        node = pending.pop()
        if isinstance(node.payoff, int):
            payoffs.append(node.payoff)
        pending.extend(node.children)
    if budget is None:
        budget = max(payoffs, default=0)

    builder = _ArenaBuilder(budget, DEFAULT_NODE_CAP)
    stack: List[Tuple[PayoffTreeSpec, Optional[int], Optional[int], Owner]] = [
        (spec, None, None, spec.owner or Owner.SYS)
    ]
    while stack:
        node, parent, action, owner = stack.pop()
        owner = node.owner or owner
        if node.payoff is None:
            kind, accumulated = NodeKind.INTERNAL, 0
        elif node.payoff == "inf":
            kind, accumulated = NodeKind.DEAD_LEAF, budget + 1
        else:
            kind, accumulated = NodeKind.GOAL_LEAF, node.payoff
        index = builder.add(node.state, accumulated, owner, kind, parent, action)
        for child_action in reversed(range(len(node.children))):
            stack.append(
                (node.children[child_action], index, child_action, owner.other)
            )
    return builder.build()


def tree_values(t: TreeArena) -> TreeValueTable:
    """
    Compute adversarial and cooperative values by one backward pass.

    Args:
        t: The tree arena

    Returns:
        TreeValueTable: aval, cval and in_win per node (acval left empty)
    """
    aval: List[ExtendedCost] = [INFINITE] * t.num_nodes
    cval: List[ExtendedCost] = [INFINITE] * t.num_nodes
    for n in reversed(t.nodes()):
        if t.is_leaf(n):
            aval[n] = cval[n] = t.payoff(n)
            continue
        kids = t.children(n)
        cval[n] = min(cval[k] for k in kids)
        if t.owner[n] is Owner.SYS:
            aval[n] = min(aval[k] for k in kids)
        else:
            aval[n] = max(aval[k] for k in kids)
    return TreeValueTable(
        aval=tuple(aval),
        cval=tuple(cval),
        in_win=tuple(value.is_finite for value in aval),
    )


def _bounded_cooperative(
    t: TreeArena, vt: TreeValueTable, d: int
) -> ExtendedCost:
    """Cheapest cooperative payoff below ``d`` keeping every Sys choice within aval(d)."""
    bound = vt.aval[d]
    start, end = d, t.subtree_end[d]
    best: dict = {}
    for n in range(end - 1, start - 1, -1):
        if vt.aval[n] > bound:
            continue
        if t.is_leaf(n):
            best[n] = t.payoff(n)
            continue
        best[n] = min(best[k] for k in t.children(n) if k in best)
    return best[d]


def tree_acval(
    t: TreeArena, vt: TreeValueTable, method: AcvalMethod = AcvalMethod.SUBGAME
) -> Tuple[Optional[ExtendedCost], ...]:
    """
    Compute acVal at every internal Sys node.

    Args:
        t: The tree arena
        vt: Values of ``t``
        method: ``ONE_STEP`` takes the cheapest cooperative child among children
            with aval at most the node's; ``SUBGAME`` applies that bound to every
            Sys choice in the subtree

    Returns:
        Tuple: acVal per node, None for nodes that are not internal Sys nodes
    """
    acval: List[Optional[ExtendedCost]] = [None] * t.num_nodes
    for d in t.decision_nodes(Owner.SYS):
        if method is AcvalMethod.ONE_STEP:
            acval[d] = min(
                vt.cval[k] for k in t.children(d) if vt.aval[k] <= vt.aval[d]
            )
        elif not vt.aval[d].is_finite:
            acval[d] = vt.cval[d]
        else:
            acval[d] = _bounded_cooperative(t, vt, d)
    return tuple(acval)


def solve_tree(
    t: TreeArena, method: AcvalMethod = AcvalMethod.SUBGAME
) -> TreeValueTable:
    """Tree values with acval filled in."""
    vt = tree_values(t)
    return replace(vt, acval=tree_acval(t, vt, method))


def arena_stats(t: TreeArena, vt: TreeValueTable) -> ArenaStats:
    kinds = [t.kind[n] for n in t.nodes()]
    return ArenaStats(
        budget=t.budget,
        nodes=t.num_nodes,
        internal=kinds.count(NodeKind.INTERNAL),
        goal_leaves=kinds.count(NodeKind.GOAL_LEAF),
        dead_leaves=kinds.count(NodeKind.DEAD_LEAF),
        sys_decisions=len(t.decision_nodes(Owner.SYS)),
        env_decisions=len(t.decision_nodes(Owner.ENV)),
        depth=max(t.depth),
        root_aval=vt.aval[t.root].to_json(),
        root_cval=vt.cval[t.root].to_json(),
        root_region=vt.region(t.root).value,
    )


def arena_records(t: TreeArena, vt: TreeValueTable) -> List[ArenaNodeRecord]:
    return [
        ArenaNodeRecord(
            node=n,
            state=t.game_state[n],
            accumulated=t.accumulated[n],
            owner=t.owner[n],
            parent=t.parent[n],
            kind=t.kind[n].value,
            children=[[action, child] for action, child in t.edges[n]],
            aval=vt.aval[n].to_json(),
            cval=vt.cval[n].to_json(),
        )
        for n in t.nodes()
    ]

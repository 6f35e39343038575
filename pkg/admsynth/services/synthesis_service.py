"""Synthesis of admissible and admissible-winning strategies on tree arenas.

A strategy is judged through the pair ``(C(n, σ), A(n, σ))`` of the cheapest and
the dearest leaf payoff it can still reach from a node. At a Sys node ``d`` the
choice is locally admissible when ``C(d, σ) < aval(d)``, or when
``aval(d) = A(d, σ) = C(d, σ) = acval(d)``. A strategy is admissible when every
Sys node it reaches is locally admissible; in winning mode it must also keep
``A(n, σ)`` finite wherever the tree value is finite.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Set, Tuple

import numpy as np

from admsynth.schemas.game import Owner
from admsynth.schemas.strategy import StrategyNodeRecord, TransducerRow
from admsynth.services.arena_service import (
    AcvalMethod,
    TreeArena,
    TreeValueTable,
    tree_acval,
)
from admsynth.services.errors import IncompleteStrategy, SolverError
from admsynth.services.game_service import ExtendedCost

logger = logging.getLogger(__name__)

Pair = Tuple[ExtendedCost, ExtendedCost]


class SynthesisMode(str, Enum):
    ADMISSIBLE = "adm"
    ADMISSIBLE_WINNING = "adm-win"


class SynthesisCriterion(str, Enum):
    """Which test decides the allowed children of a Sys node.

    ``EXACT`` tracks achievable payoff pairs and yields exactly the choices used
    by some member. ``PATH_MIN`` compares a child's cooperative value with the
    smallest adversarial value on the path to the node.
    """

    EXACT = "exact"
    PATH_MIN = "path-min"


class ExtractionPolicy(str, Enum):
    MIN_CVAL = "min-cval"
    SEEDED_RANDOM = "random"


@dataclass(frozen=True)
class TreeStrategy:
    """A Sys strategy on a tree: chosen child per Sys node."""

    choices: Dict[int, int]

    def choice(self, n: int) -> Optional[int]:
        return self.choices.get(n)


@dataclass(frozen=True)
class StrategySet:
    """Allowed Sys choices of all admissible (or admissible-winning) strategies.

    ``allowed`` maps every Sys node reachable through allowed choices to its
    allowed children. ``pairs`` holds, for the exact criterion, the payoff pairs
    still required at each recorded node.
    """

    mode: SynthesisMode
    criterion: SynthesisCriterion
    all_admissible: bool
    allowed: Dict[int, Tuple[int, ...]]
    budget: int
    arena: TreeArena = field(repr=False, compare=False)
    values: TreeValueTable = field(repr=False, compare=False)
    pairs: Dict[int, FrozenSet[Pair]] = field(
        default_factory=dict, repr=False, compare=False
    )
    usable: Dict[int, FrozenSet[Pair]] = field(
        default_factory=dict, repr=False, compare=False
    )

    @property
    def winning(self) -> bool:
        return self.mode is SynthesisMode.ADMISSIBLE_WINNING

    def root_pairs(self) -> List[Pair]:
        return sorted(self.pairs.get(self.arena.root, ()), key=_pair_key)


def _pair_key(pair: Pair) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    return (pair[0].sort_key(), pair[1].sort_key())


def _combine(left: Iterable[Pair], right: Iterable[Pair]) -> Set[Pair]:
    right = list(right)
    return {
        (min(lx, rx), max(ly, ry)) for lx, ly in left for rx, ry in right
    }


def _locally_admissible(vt: TreeValueTable, d: int, pair: Pair) -> bool:
    x, y = pair
    aval = vt.aval[d]
    return x < aval or (aval == y and y == x and x == vt.acval[d])


def _keeps_win(vt: TreeValueTable, n: int, pair: Pair) -> bool:
    return not vt.in_win[n] or pair[1].is_finite


def _with_acval(
    t: TreeArena, vt: TreeValueTable, acv: Optional[Tuple[Optional[ExtendedCost], ...]]
) -> TreeValueTable:
    if acv is not None:
        return TreeValueTable(vt.aval, vt.cval, vt.in_win, tuple(acv))
    if vt.acval:
        return vt
    return TreeValueTable(
        vt.aval, vt.cval, vt.in_win, tree_acval(t, vt, AcvalMethod.SUBGAME)
    )


def _achievable_pairs(
    t: TreeArena, vt: TreeValueTable, winning: bool
) -> Tuple[List[FrozenSet[Pair]], Dict[int, FrozenSet[Pair]]]:
    """Bottom-up payoff pairs of locally admissible strategies in each subtree.

    Also returns, for each child of a Sys node, the subset of its pairs that keep
    the parent's choice locally admissible.
    """
    achievable: List[FrozenSet[Pair]] = [frozenset()] * t.num_nodes
    usable: Dict[int, FrozenSet[Pair]] = {}
    for n in reversed(t.nodes()):
        if t.is_leaf(n):
            payoff = t.payoff(n)
            pairs: Set[Pair] = {(payoff, payoff)}
        elif t.owner[n] is Owner.SYS:
            pairs = set()
            for child in t.children(n):
                usable[child] = frozenset(
                    pair
                    for pair in achievable[child]
                    if _locally_admissible(vt, n, pair)
                )
                pairs |= usable[child]
        else:
            kids = t.children(n)
            pairs = set(achievable[kids[0]])
            for child in kids[1:]:
                pairs = _combine(pairs, achievable[child])
        if winning and vt.in_win[n]:
            pairs = {pair for pair in pairs if pair[1].is_finite}
        achievable[n] = frozenset(pairs)
    return achievable, usable


def _required_for_children(
    required: FrozenSet[Pair], child_sets: List[FrozenSet[Pair]]
) -> List[FrozenSet[Pair]]:
    """Pairs of each Env child that combine with some sibling pairs into ``required``."""
    k = len(child_sets)
    prefix: List[Optional[Set[Pair]]] = [None] * (k + 1)
    suffix: List[Optional[Set[Pair]]] = [None] * (k + 1)
    for i in range(k):
        prefix[i + 1] = (
            set(child_sets[i])
            if prefix[i] is None
            else _combine(prefix[i], child_sets[i])
        )
    for i in range(k - 1, -1, -1):
        suffix[i] = (
            set(child_sets[i])
            if suffix[i + 1] is None
            else _combine(child_sets[i], suffix[i + 1])
        )
    result = []
    for i in range(k):
        if prefix[i] is None:
            others = suffix[i + 1]
        elif suffix[i + 1] is None:
            others = prefix[i]
        else:
            others = _combine(prefix[i], suffix[i + 1])
        if others is None:
            result.append(frozenset(p for p in child_sets[i] if p in required))
            continue
        result.append(
            frozenset(
                p
                for p in child_sets[i]
                if any(
                    (min(p[0], q[0]), max(p[1], q[1])) in required for q in others
                )
            )
        )
    return result


def _synthesize_exact(
    t: TreeArena, vt: TreeValueTable, mode: SynthesisMode
) -> StrategySet:
    winning = mode is SynthesisMode.ADMISSIBLE_WINNING
    achievable, usable = _achievable_pairs(t, vt, winning)
    root = t.root
    if not achievable[root]:
        raise SolverError(f"No {mode.value} strategy found at the root")

    required: Dict[int, FrozenSet[Pair]] = {root: achievable[root]}
    allowed: Dict[int, Tuple[int, ...]] = {}
    stack = [root]
    while stack:
        n = stack.pop()
        if t.is_leaf(n):
            continue
        kids = t.children(n)
        if t.owner[n] is Owner.SYS:
            chosen = []
            for child in kids:
                child_required = usable[child] & required[n]
                if child_required:
                    required[child] = child_required
                    chosen.append(child)
            allowed[n] = tuple(chosen)
            stack.extend(reversed(chosen))
        else:
            child_required = _required_for_children(
                required[n], [achievable[child] for child in kids]
            )
            for child, pairs in zip(kids, child_required):
                required[child] = pairs
            stack.extend(reversed(kids))
    return StrategySet(
        mode=mode,
        criterion=SynthesisCriterion.EXACT,
        all_admissible=False,
        allowed=allowed,
        budget=t.budget,
        arena=t,
        values=vt,
        pairs=required,
        usable=usable,
    )


def _synthesize_path_min(
    t: TreeArena, vt: TreeValueTable, mode: SynthesisMode
) -> StrategySet:
    winning = mode is SynthesisMode.ADMISSIBLE_WINNING
    allowed: Dict[int, Tuple[int, ...]] = {}
    stack: List[Tuple[int, ExtendedCost]] = [(t.root, vt.aval[t.root])]
    while stack:
        n, path_min = stack.pop()
        if t.is_leaf(n):
            continue
        kids = t.children(n)
        if t.owner[n] is Owner.SYS:
            chosen = []
            for child in kids:
                cooperative = vt.cval[child] < path_min and (
                    not winning or not vt.in_win[n] or vt.in_win[child]
                )
                flat = (
                    vt.aval[n] == vt.aval[child]
                    and vt.aval[child] == vt.cval[child]
                    and vt.cval[child] == vt.acval[n]
                )
                if cooperative or flat:
                    chosen.append(child)
            allowed[n] = tuple(chosen)
            kids = chosen
        stack.extend((child, min(path_min, vt.aval[child])) for child in reversed(kids))
    return StrategySet(
        mode=mode,
        criterion=SynthesisCriterion.PATH_MIN,
        all_admissible=False,
        allowed=allowed,
        budget=t.budget,
        arena=t,
        values=vt,
    )


def _synthesize(
    t: TreeArena,
    vt: TreeValueTable,
    acv: Optional[Tuple[Optional[ExtendedCost], ...]],
    mode: SynthesisMode,
    criterion: SynthesisCriterion,
) -> StrategySet:
    vt = _with_acval(t, vt, acv)
    if not vt.cval[t.root].is_finite:
        logger.info(
            f"Budget {t.budget} is below the root cooperative value: "
            "every strategy qualifies"
        )
        return StrategySet(
            mode=mode,
            criterion=criterion,
            all_admissible=True,
            allowed={},
            budget=t.budget,
            arena=t,
            values=vt,
        )
    if criterion is SynthesisCriterion.EXACT:
        result = _synthesize_exact(t, vt, mode)
    else:
        result = _synthesize_path_min(t, vt, mode)
    logger.info(
        f"Synthesized {mode.value} set ({criterion.value}): "
        f"{len(result.allowed)} Sys nodes recorded"
    )
    return result


def synthesize_admissible(
    t: TreeArena,
    vt: TreeValueTable,
    acv: Optional[Tuple[Optional[ExtendedCost], ...]] = None,
    criterion: SynthesisCriterion = SynthesisCriterion.EXACT,
) -> StrategySet:
    """
    Compute the allowed Sys choices of all admissible strategies.

    Args:
        t: The tree arena
        vt: Values of ``t``
        acv: acVal per node; taken from ``vt`` or computed by the subgame method
        criterion: Allowed-choice test

    Returns:
        StrategySet: Symbolic ``all_admissible`` when the budget is below the root
        cooperative value, otherwise the recorded allowed sets
    """
    return _synthesize(t, vt, acv, SynthesisMode.ADMISSIBLE, criterion)


def synthesize_admissible_winning(
    t: TreeArena,
    vt: TreeValueTable,
    acv: Optional[Tuple[Optional[ExtendedCost], ...]] = None,
    criterion: SynthesisCriterion = SynthesisCriterion.EXACT,
) -> StrategySet:
    """
    Compute the allowed Sys choices of all admissible-winning strategies.

    Same as :func:`synthesize_admissible`, except that no choice may leave the
    tree winning region (``vt.in_win``) once inside it.
    """
    return _synthesize(t, vt, acv, SynthesisMode.ADMISSIBLE_WINNING, criterion)


def synthesize(
    t: TreeArena,
    vt: TreeValueTable,
    mode: SynthesisMode,
    criterion: SynthesisCriterion = SynthesisCriterion.EXACT,
) -> StrategySet:
    return _synthesize(t, vt, None, mode, criterion)


def reachable_nodes(t: TreeArena, sigma: TreeStrategy) -> List[int]:
    """Nodes reachable under ``sigma`` and any Env moves, ascending id.

    Raises:
        IncompleteStrategy: If ``sigma`` has no valid choice at a reachable Sys node
    """
    reached = []
    stack = [t.root]
    while stack:
        n = stack.pop()
        reached.append(n)
        if t.is_leaf(n):
            continue
        if t.owner[n] is Owner.SYS:
            child = sigma.choice(n)
            if child is None:
                raise IncompleteStrategy(f"No choice at reachable Sys node {n}")
            if child not in t.children(n):
                raise IncompleteStrategy(
                    f"Choice {child} at Sys node {n} is not one of its children"
                )
            stack.append(child)
        else:
            stack.extend(t.children(n))
    return sorted(reached)


def strategy_values(t: TreeArena, sigma: TreeStrategy) -> Dict[int, Pair]:
    """
    Cheapest and dearest reachable payoff under ``sigma`` from every reachable node.

    Args:
        t: The tree arena
        sigma: A strategy defined on every Sys node it reaches

    Returns:
        Dict[int, Pair]: ``(C(n, σ), A(n, σ))`` per reachable node

    Raises:
        IncompleteStrategy: If ``sigma`` misses a reachable Sys node
    """
    values: Dict[int, Pair] = {}
    for n in reversed(reachable_nodes(t, sigma)):
        if t.is_leaf(n):
            payoff = t.payoff(n)
            values[n] = (payoff, payoff)
        elif t.owner[n] is Owner.SYS:
            values[n] = values[sigma.choices[n]]
        else:
            kids = [values[child] for child in t.children(n)]
            values[n] = (min(p[0] for p in kids), max(p[1] for p in kids))
    return values


def is_member(s: StrategySet, sigma: TreeStrategy) -> bool:
    """
    Decide whether a strategy belongs to the synthesized set.

    Every choice must be allowed. Under the exact criterion the strategy's own
    payoff pairs are also checked at every reachable node, since the members are
    not simply every combination of allowed choices.

    Args:
        s: Synthesized strategy set
        sigma: Candidate strategy

    Returns:
        bool: True iff ``sigma`` is in the set

    Raises:
        IncompleteStrategy: If ``sigma`` lacks a choice at a reachable Sys node
    """
    t, vt = s.arena, s.values
    values = strategy_values(t, sigma)
    if s.all_admissible:
        return True
    exact = s.criterion is SynthesisCriterion.EXACT
    for n, pair in values.items():
        if t.is_leaf(n):
            continue
        if exact and s.winning and not _keeps_win(vt, n, pair):
            return False
        if t.owner[n] is not Owner.SYS:
            continue
        if sigma.choices[n] not in s.allowed.get(n, ()):
            return False
        if exact and not _locally_admissible(vt, n, pair):
            return False
    return True


def is_optimistic(
    admissible: StrategySet, winning: StrategySet, sigma: TreeStrategy
) -> bool:
    """Admissible but not admissible-winning: it may leave the winning region."""
    return is_member(admissible, sigma) and not is_member(winning, sigma)


def lift_strategy(t: TreeArena, actions: Mapping[int, int]) -> TreeStrategy:
    """
    Lift a positional strategy to every internal Sys node of a tree.

    Args:
        t: The tree arena
        actions: Action per game state; states missing here take their lowest action

    Returns:
        TreeStrategy: Choice at every internal Sys node
    """
    choices = {}
    for n in t.decision_nodes(Owner.SYS):
        action = actions.get(t.game_state[n], t.edges[n][0][0])
        choices[n] = t.child_by_action(n, action)
    return TreeStrategy(choices=choices)


class _Chooser:
    def __init__(self, policy: ExtractionPolicy, seed: int):
        self.policy = policy
        self.rng = np.random.Generator(np.random.PCG64(seed))

    def pick(self, options: List):
        if self.policy is ExtractionPolicy.SEEDED_RANDOM and len(options) > 1:
            return options[int(self.rng.integers(len(options)))]
        return options[0]


def _extract_unconstrained(
    t: TreeArena, vt: TreeValueTable, chooser: _Chooser
) -> TreeStrategy:
    choices = {}
    stack = [t.root]
    while stack:
        n = stack.pop()
        if t.is_leaf(n):
            continue
        if t.owner[n] is Owner.SYS:
            kids = sorted(t.children(n), key=lambda c: (vt.cval[c], c))
            choices[n] = chooser.pick(kids)
            stack.append(choices[n])
        else:
            stack.extend(reversed(t.children(n)))
    return TreeStrategy(choices=choices)


def _extract_path_min(s: StrategySet, chooser: _Chooser) -> TreeStrategy:
    t, vt = s.arena, s.values
    choices = {}
    stack = [t.root]
    while stack:
        n = stack.pop()
        if t.is_leaf(n):
            continue
        if t.owner[n] is Owner.SYS:
            kids = sorted(s.allowed[n], key=lambda c: (vt.cval[c], c))
            choices[n] = chooser.pick(kids)
            stack.append(choices[n])
        else:
            stack.extend(reversed(t.children(n)))
    return TreeStrategy(choices=choices)


def _split_env_target(
    target: Pair, child_sets: List[List[Pair]]
) -> Optional[List[Pair]]:
    """Pick one pair per Env child whose combination is exactly ``target``."""
    x, y = target
    bounded = [[p for p in pairs if p[0] >= x and p[1] <= y] for pairs in child_sets]
    for i, pairs in enumerate(bounded):
        for low in pairs:
            if low[0] != x:
                continue
            picks = [options[0] if options else None for options in bounded]
            picks[i] = low
            if low[1] == y:
                return picks
            for j, others in enumerate(bounded):
                if j == i:
                    continue
                for high in others:
                    if high[1] == y:
                        picks[j] = high
                        return picks
    return None


def _extract_exact(s: StrategySet, chooser: _Chooser) -> TreeStrategy:
    t = s.arena
    root_options = s.root_pairs()
    if not root_options:
        raise SolverError("The strategy set has no achievable payoff at the root")
    targets: Dict[int, Pair] = {t.root: chooser.pick(root_options)}
    choices = {}
    stack = [t.root]
    while stack:
        n = stack.pop()
        if t.is_leaf(n):
            continue
        target = targets[n]
        if t.owner[n] is Owner.SYS:
            candidates = [c for c in s.allowed[n] if target in s.usable[c]]
            if not candidates:
                raise SolverError(f"Target {target} is not realisable at node {n}")
            child = chooser.pick(candidates)
            choices[n] = child
            targets[child] = target
            stack.append(child)
            continue
        kids = t.children(n)
        child_sets = []
        for child in kids:
            options = sorted(s.pairs[child], key=_pair_key)
            if chooser.policy is ExtractionPolicy.SEEDED_RANDOM:
                options = [options[i] for i in chooser.rng.permutation(len(options))]
            child_sets.append(options)
        picks = _split_env_target(target, child_sets)
        if picks is None or any(pick is None for pick in picks):
            raise SolverError(f"Target {target} cannot be split at Env node {n}")
        for child, pick in zip(kids, picks):
            targets[child] = pick
        stack.extend(reversed(kids))
    return TreeStrategy(choices=choices)


def extract_strategy(
    s: StrategySet,
    policy: ExtractionPolicy = ExtractionPolicy.MIN_CVAL,
    seed: int = 0,
) -> TreeStrategy:
    """
    Extract one concrete member of a strategy set.

    ``MIN_CVAL`` aims for the lowest achievable cooperative payoff, then the lowest
    adversarial payoff, and breaks remaining ties by lowest node id.
    ``SEEDED_RANDOM`` draws every choice from a PCG64 generator seeded with ``seed``.

    Args:
        s: Synthesized strategy set
        policy: Selection policy
        seed: Seed for ``SEEDED_RANDOM``

    Returns:
        TreeStrategy: Choices at every Sys node the strategy reaches
    """
    chooser = _Chooser(policy, seed)
    if s.all_admissible:
        return _extract_unconstrained(s.arena, s.values, chooser)
    if s.criterion is SynthesisCriterion.PATH_MIN:
        return _extract_path_min(s, chooser)
    return _extract_exact(s, chooser)


def strategy_records(s: StrategySet) -> List[StrategyNodeRecord]:
    t = s.arena
    return [
        StrategyNodeRecord(
            node=n,
            state=t.game_state[n],
            accumulated=t.accumulated[n],
            allowed=list(s.allowed[n]),
        )
        for n in sorted(s.allowed)
    ]


def transducer_rows(s: StrategySet) -> List[TransducerRow]:
    t = s.arena
    rows = []
    for n in sorted(s.allowed):
        for child in s.allowed[n]:
            rows.append(
                TransducerRow(
                    memory_state=n,
                    input=t.action_in[n] if t.parent[n] is not None else None,
                    output=t.action_in[child],
                    next_memory=child,
                )
            )
    return rows

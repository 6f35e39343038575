"""Brute-force ground truth over all pure strategies of a tree arena."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from admsynth.schemas.game import Owner
from admsynth.services.arena_service import TreeArena, TreeValueTable
from admsynth.services.errors import BothOrNeither, EnumerationTooLarge
from admsynth.services.game_service import ExtendedCost
from admsynth.services.synthesis_service import (
    SynthesisMode,
    TreeStrategy,
    reachable_nodes,
    strategy_values,
)

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 10**6
DEFAULT_COMPARISON_CAP = 10**9
# Largest boolean block, in cells, built while comparing payoff rows.
DOMINANCE_BLOCK_CELLS = 1 << 22


class ComplementLabel(str, Enum):
    SATISFIES_ADMISSIBLE = "satisfies-admissible"
    SATISFIES_DOMINATED = "satisfies-dominated"


@dataclass(frozen=True)
class StrategyVector:
    """A choice at every internal node of one player, reachable or not."""

    owner: Owner
    nodes: Tuple[int, ...]
    choices: Tuple[int, ...]

    def choice(self, n: int) -> int:
        return self.choices[self.nodes.index(n)]

    def as_strategy(self) -> TreeStrategy:
        return TreeStrategy(choices=dict(zip(self.nodes, self.choices)))


def strategy_count(t: TreeArena, owner: Owner) -> int:
    return math.prod(len(t.edges[n]) for n in t.decision_nodes(owner))


def enumerate_strategies(
    t: TreeArena, owner: Owner, cap: int = DEFAULT_ENUMERATION_CAP
) -> List[StrategyVector]:
    """
    Enumerate every pure strategy of one player.

    Vectors are listed lexicographically: the lowest node id varies slowest and
    children are tried in ascending action order.

    Args:
        t: The tree arena
        owner: Player whose strategies are enumerated
        cap: Maximum number of vectors

    Returns:
        List[StrategyVector]: All strategies; a single empty vector if the player
        never decides

    Raises:
        EnumerationTooLarge: If the count exceeds ``cap``
    """
    count = strategy_count(t, owner)
    if count > cap:
        raise EnumerationTooLarge(
            f"{owner.value} has {count} strategies, above the cap of {cap}"
        )
    nodes = tuple(t.decision_nodes(owner))
    return [
        StrategyVector(owner=owner, nodes=nodes, choices=combo)
        for combo in itertools.product(*(t.children(n) for n in nodes))
    ]


def play_of(
    t: TreeArena, sigma: StrategyVector, tau: StrategyVector
) -> Tuple[int, ExtendedCost]:
    """
    Follow both strategies from the root to the unique leaf they induce.

    Returns:
        Tuple[int, ExtendedCost]: The leaf node and its payoff
    """
    sys_choice = dict(zip(sigma.nodes, sigma.choices))
    env_choice = dict(zip(tau.nodes, tau.choices))
    n = t.root
    while not t.is_leaf(n):
        n = sys_choice[n] if t.owner[n] is Owner.SYS else env_choice[n]
    return n, t.payoff(n)


def _payoff_as_float(payoff: ExtendedCost) -> float:
    return np.inf if not payoff.is_finite else float(payoff.amount)


def payoff_matrix(
    t: TreeArena,
    sys_vectors: Sequence[StrategyVector],
    env_vectors: Sequence[StrategyVector],
) -> np.ndarray:
    """
    Payoff of every strategy pair, with rows for Sys and columns for Env.

    Infinite payoffs are stored as ``np.inf``. The values from each node under a
    Sys strategy are computed for all Env strategies at once, bottom-up.
    """
    columns = len(env_vectors)
    env_nodes = env_vectors[0].nodes if env_vectors else ()
    position = {n: i for i, n in enumerate(env_nodes)}
    env_choices = np.array(
        [vector.choices for vector in env_vectors], dtype=np.int64
    ).reshape(columns, len(env_nodes))
    everyone = np.arange(columns)

    matrix = np.empty((len(sys_vectors), columns), dtype=float)
    for row, sigma in enumerate(sys_vectors):
        strategy = sigma.as_strategy()
        outcome: Dict[int, np.ndarray] = {}
        for n in reversed(reachable_nodes(t, strategy)):
            if t.is_leaf(n):
                outcome[n] = np.full(columns, _payoff_as_float(t.payoff(n)))
            elif t.owner[n] is Owner.SYS:
                outcome[n] = outcome[strategy.choices[n]]
            else:
                kids = np.array(t.children(n))
                stacked = np.stack([outcome[k] for k in kids])
                picked = np.searchsorted(kids, env_choices[:, position[n]])
                outcome[n] = stacked[picked, everyone]
        matrix[row] = outcome[t.root]
    return matrix


def _dominance_blocks(
    matrix: np.ndarray, block_cells: int
) -> Iterator[Tuple[int, np.ndarray]]:
    """Yield ``(start, block)``; ``block[i, k]`` says row i dominates row start + k."""
    n, m = matrix.shape
    width = max(1, block_cells // max(1, n * m))
    for start in range(0, n, width):
        columns = matrix[None, start : start + width, :]
        no_worse = (matrix[:, None, :] <= columns).all(axis=-1)
        sometimes_better = (matrix[:, None, :] < columns).any(axis=-1)
        yield start, no_worse & sometimes_better


def dominance_matrix(
    matrix: np.ndarray, block_cells: int = DOMINANCE_BLOCK_CELLS
) -> np.ndarray:
    """``result[i, j]`` is True iff row ``i`` weakly dominates row ``j``."""
    n = matrix.shape[0]
    result = np.zeros((n, n), dtype=bool)
    for start, block in _dominance_blocks(matrix, block_cells):
        result[:, start : start + block.shape[1]] = block
    return result


def dominated_rows(
    matrix: np.ndarray, block_cells: int = DOMINANCE_BLOCK_CELLS
) -> np.ndarray:
    """
    Flag every row some other row weakly dominates.

    Candidates are compared one block at a time. A block spans ``block_cells``
    booleans, or a single candidate when one row comparison is already larger.
    """
    flags = np.zeros(matrix.shape[0], dtype=bool)
    for start, block in _dominance_blocks(matrix, block_cells):
        flags[start : start + block.shape[1]] = block.any(axis=0)
    return flags


def weakly_dominates(
    t: TreeArena,
    sigma_prime: StrategyVector,
    sigma: StrategyVector,
    env_vectors: Optional[Sequence[StrategyVector]] = None,
) -> bool:
    """
    Decide whether ``sigma_prime`` weakly dominates ``sigma``.

    It must do at least as well against every Env strategy and strictly better
    against one.
    """
    if env_vectors is None:
        env_vectors = enumerate_strategies(t, Owner.ENV)
    strictly_better = False
    for tau in env_vectors:
        better = play_of(t, sigma_prime, tau)[1]
        worse = play_of(t, sigma, tau)[1]
        if better > worse:
            return False
        strictly_better = strictly_better or better < worse
    return strictly_better


def canonical_choices(t: TreeArena, sigma: StrategyVector) -> Tuple[int, ...]:
    """Choices with every unreachable Sys node reset to its lowest action."""
    reached = set(reachable_nodes(t, sigma.as_strategy()))
    return tuple(
        choice if n in reached else t.edges[n][0][1]
        for n, choice in zip(sigma.nodes, sigma.choices)
    )


def _keeps_goal_reachable(
    t: TreeArena, vt: TreeValueTable, sigma: StrategyVector
) -> bool:
    """Every reachable node with finite tree aval only leads to goal leaves."""
    strategy = sigma.as_strategy()
    dead: Dict[int, bool] = {}
    for n in reversed(reachable_nodes(t, strategy)):
        if t.is_leaf(n):
            dead[n] = not t.payoff(n).is_finite
        elif t.owner[n] is Owner.SYS:
            dead[n] = dead[strategy.choices[n]]
        else:
            dead[n] = any(dead[k] for k in t.children(n))
        if dead[n] and vt.aval[n].is_finite:
            return False
    return True


@dataclass(frozen=True)
class OracleResult:
    """Brute-force verdicts over one enumeration, aligned with ``sys_vectors``."""

    sys_vectors: List[StrategyVector]
    env_vectors: List[StrategyVector]
    matrix: np.ndarray
    admissible: List[bool]
    admissible_winning: List[bool]


def run_oracle(
    t: TreeArena,
    vt: TreeValueTable,
    cap: int = DEFAULT_ENUMERATION_CAP,
    comparison_cap: int = DEFAULT_COMPARISON_CAP,
) -> OracleResult:
    """
    Enumerate both players and judge every Sys strategy in both modes.

    Raises:
        EnumerationTooLarge: If either player, or the pair matrix, exceeds ``cap``,
            or the row comparisons ``n * n * m`` exceed ``comparison_cap``
    """
    sys_vectors = enumerate_strategies(t, Owner.SYS, cap)
    env_vectors = enumerate_strategies(t, Owner.ENV, cap)
    if len(sys_vectors) * len(env_vectors) > cap:
        raise EnumerationTooLarge(
            f"{len(sys_vectors)} x {len(env_vectors)} strategy pairs exceed "
            f"the cap of {cap}"
        )
    comparisons = len(sys_vectors) ** 2 * len(env_vectors)
    if comparisons > comparison_cap:
        raise EnumerationTooLarge(
            f"{comparisons} payoff comparisons exceed the cap of {comparison_cap}"
        )
    matrix = payoff_matrix(t, sys_vectors, env_vectors)
    dominated = dominated_rows(matrix)
    admissible = [not flag for flag in dominated.tolist()]
    winning = [
        flag and _keeps_goal_reachable(t, vt, sigma)
        for flag, sigma in zip(admissible, sys_vectors)
    ]
    logger.debug(
        f"Oracle judged {len(sys_vectors)} Sys strategies against "
        f"{len(env_vectors)} Env strategies"
    )
    return OracleResult(sys_vectors, env_vectors, matrix, admissible, winning)


def brute_force_admissible(
    t: TreeArena,
    vt: TreeValueTable,
    mode: SynthesisMode,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Set[Tuple[int, ...]]:
    """
    Admissible (or admissible-winning) strategies by exhaustive comparison.

    Args:
        t: The tree arena; its budget bounds the winning payoffs
        vt: Values of ``t``
        mode: Which set to compute
        cap: Enumeration cap

    Returns:
        Set[Tuple[int, ...]]: Canonical choice tuples of the members

    Raises:
        EnumerationTooLarge: If enumeration exceeds ``cap``
    """
    result = run_oracle(t, vt, cap)
    flags = (
        result.admissible_winning
        if mode is SynthesisMode.ADMISSIBLE_WINNING
        else result.admissible
    )
    return {
        canonical_choices(t, sigma)
        for sigma, flag in zip(result.sys_vectors, flags)
        if flag
    }


def check_complement(
    t: TreeArena, vt: TreeValueTable, sigma: StrategyVector
) -> ComplementLabel:
    """
    Evaluate the admissibility and dominance characterisations for one strategy.

    The admissible side needs, at every reachable Sys node ``d``, either
    ``C(d, σ) < aval(d)`` or ``aval(d) = A(d, σ) = C(d, σ) = acval(d)``. The
    dominated side needs one reachable Sys node with ``C(d, σ) >= aval(d)`` and
    ``A(d, σ) > aval(d)``, or with ``aval(d) = A(d, σ) = C(d, σ)`` and
    ``acval(d) < aval(d)``.

    Args:
        t: The tree arena
        vt: Values of ``t`` including acval
        sigma: A Sys strategy vector

    Returns:
        ComplementLabel: The single characterisation that holds

    Raises:
        BothOrNeither: If both or neither side holds
    """
    values = strategy_values(t, sigma.as_strategy())
    admissible_everywhere = True
    dominated_somewhere = False
    for d, (low, high) in values.items():
        if t.is_leaf(d) or t.owner[d] is not Owner.SYS:
            continue
        aval, acval = vt.aval[d], vt.acval[d]
        flat = aval == high and high == low
        if not (low < aval or (flat and low == acval)):
            admissible_everywhere = False
        if (low >= aval and high > aval) or (flat and acval < aval):
            dominated_somewhere = True
    if admissible_everywhere and not dominated_somewhere:
        return ComplementLabel.SATISFIES_ADMISSIBLE
    if dominated_somewhere and not admissible_everywhere:
        return ComplementLabel.SATISFIES_DOMINATED
    raise BothOrNeither(
        f"Strategy {sigma.choices} is admissible={admissible_everywhere} and "
        f"dominated={dominated_somewhere}"
    )

"""Pseudo-polynomial welfare maximization for weighted games.

Workers are added one at a time; a state is the vector of firm weight
totals reached so far. Because nobody idles, the last total is implied by
the others, so the table has at most `(W + 1) ** (k - 1)` states per layer.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from marketeq.errors import GuardExceededError, PreconditionError
from marketeq.game.game import CompetitionGame, Partition

logger = logging.getLogger(__name__)

MAX_PROFILE_STATES = 10**8


@dataclass(frozen=True)
class WeightProfile:
    """Total weight hired by every firm and the welfare it achieves"""

    totals: Tuple[int, ...]
    welfare: Fraction

    @property
    def gap(self) -> int:
        return max(self.totals) - min(self.totals)

    @property
    def almost_balanced(self) -> bool:
        return self.gap <= 1


def check_profile_guard(game: CompetitionGame, unsafe_limits: bool) -> None:
    if not game.is_weighted:
        raise PreconditionError("Weight-profile optimization needs weighted valuations")
    states = game.total_weight**game.k
    if states > MAX_PROFILE_STATES and not unsafe_limits:
        raise GuardExceededError("weight profile states W^k", states, MAX_PROFILE_STATES)


def profile_welfare(game: CompetitionGame, totals: Tuple[int, ...]) -> Fraction:
    return sum(
        (v.values[t] for v, t in zip(game.valuations, totals)), Fraction(0)
    )


def profile_table(
    game: CompetitionGame, unsafe_limits: bool = False
) -> Dict[Tuple[int, ...], Tuple[int, ...]]:
    """Every reachable weight profile mapped to its lexicographically smallest assignment.

    Workers are processed in index order and a state keeps only the smallest
    assignment prefix reaching it, which is enough to recover the smallest
    complete assignment of every final profile.
    """
    check_profile_guard(game, unsafe_limits)
    k = game.k
    layer: Dict[Tuple[int, ...], Tuple[int, ...]] = {(0,) * k: ()}
    for j, w in enumerate(game.weights):
        following: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
        for totals, prefix in layer.items():
            for firm in range(1, k + 1):
                reached = totals[: firm - 1] + (totals[firm - 1] + w,) + totals[firm:]
                candidate = prefix + (firm,)
                known = following.get(reached)
                if known is None or candidate < known:
                    following[reached] = candidate
        layer = following
        logger.debug("Worker %d: %d reachable profiles", j, len(layer))
    return layer


def optimal_partition_weighted(
    game: CompetitionGame, unsafe_limits: bool = False
) -> Tuple[Partition, WeightProfile]:
    """Welfare-maximizing partition; ties go to the smallest assignment vector"""
    table = profile_table(game, unsafe_limits)
    best = None
    for totals, assignment in table.items():
        welfare = profile_welfare(game, totals)
        if best is None or welfare > best[0] or (welfare == best[0] and assignment < best[2]):
            best = (welfare, totals, assignment)
    welfare, totals, assignment = best
    return Partition(assignment, game.k), WeightProfile(totals, welfare)


def optimal_profiles(
    game: CompetitionGame, unsafe_limits: bool = False
) -> Dict[Tuple[int, ...], Tuple[int, ...]]:
    """The welfare-maximizing entries of `profile_table`"""
    table = profile_table(game, unsafe_limits)
    values = {totals: profile_welfare(game, totals) for totals in table}
    top = max(values.values())
    return {totals: table[totals] for totals, welfare in values.items() if welfare == top}


def min_gap_optimal_partition(
    game: CompetitionGame, unsafe_limits: bool = False
) -> Tuple[Partition, WeightProfile]:
    """Among optimal profiles, one with the smallest spread between firm totals"""
    optimal = optimal_profiles(game, unsafe_limits)
    totals, assignment = min(
        optimal.items(), key=lambda item: (max(item[0]) - min(item[0]), item[1])
    )
    return Partition(assignment, game.k), WeightProfile(totals, profile_welfare(game, totals))


def almost_balanced_partition(
    game: CompetitionGame, unsafe_limits: bool = False
) -> Optional[Tuple[Partition, WeightProfile]]:
    """A partition whose firm totals differ by at most one, or None when no such profile is reachable"""
    table = profile_table(game, unsafe_limits)
    balanced = [(a, t) for t, a in table.items() if max(t) - min(t) <= 1]
    if not balanced:
        return None
    assignment, totals = min(balanced)
    return Partition(assignment, game.k), WeightProfile(totals, profile_welfare(game, totals))

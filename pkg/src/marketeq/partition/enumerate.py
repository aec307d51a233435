"""All welfare-maximizing partitions up to interchangeable workers and identical firms.

An allocation says how many workers of every type each firm hires. It is
realized by handing each type's workers, in index order, to firms 1..k in
turn; the canonical representative of an allocation is the smallest such
assignment over relabelings of identical firms.
"""

import logging
import math
from fractions import Fraction
from functools import reduce
from itertools import permutations, product
from typing import Dict, Iterator, List, Sequence, Tuple

from marketeq.errors import GuardExceededError
from marketeq.game.analysis import worker_types
from marketeq.game.game import CompetitionGame, Partition
from marketeq.partition.weighted import check_profile_guard, profile_welfare

logger = logging.getLogger(__name__)

MAX_TYPE_ALLOCATIONS = 10**7

Allocation = Tuple[Tuple[int, ...], ...]  # allocation[t][i - 1]: workers of type t at firm i


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """Ordered ways to write `total` as `parts` non-negative integers"""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def allocation_count(types: Sequence[Sequence[int]], k: int) -> int:
    return reduce(lambda acc, t: acc * math.comb(len(t) + k - 1, k - 1), types, 1)


def realize(types: Sequence[Sequence[int]], allocation: Allocation, n: int, k: int) -> Tuple[int, ...]:
    assignment = [0] * n
    for members, counts in zip(types, allocation):
        position = 0
        for firm, count in enumerate(counts, start=1):
            for j in members[position : position + count]:
                assignment[j] = firm
            position += count
    return tuple(assignment)


def canonical_assignment(
    game: CompetitionGame, types: Sequence[Sequence[int]], allocation: Allocation
) -> Tuple[int, ...]:
    """Smallest realization over permutations of identical firms"""
    classes = game.firm_classes()
    best = None
    for orders in product(*(permutations(c) for c in classes)):
        source = [0] * game.k
        for group, order in zip(classes, orders):
            for old, new in zip(group, order):
                source[new - 1] = old
        moved = tuple(tuple(counts[old - 1] for old in source) for counts in allocation)
        candidate = realize(types, moved, game.n, game.k)
        if best is None or candidate < best:
            best = candidate
    return best


def _weighted_allocations(
    game: CompetitionGame, types: Sequence[Sequence[int]], unsafe_limits: bool
) -> Tuple[Fraction, List[Allocation]]:
    """Forward reachable profiles per type layer, then backtrack from the optimal ones"""
    check_profile_guard(game, unsafe_limits)
    k = game.k
    type_weights = [game.weights[members[0]] for members in types]
    layers = [{(0,) * k}]
    for members, w in zip(types, type_weights):
        layer = set()
        for totals in layers[-1]:
            for counts in compositions(len(members), k):
                layer.add(tuple(t + w * c for t, c in zip(totals, counts)))
        layers.append(layer)
    welfare = {totals: profile_welfare(game, totals) for totals in layers[-1]}
    top = max(welfare.values())

    found: List[Allocation] = []

    def backtrack(t: int, totals: Tuple[int, ...], suffix: List[Tuple[int, ...]]) -> None:
        if t < 0:
            found.append(tuple(reversed(suffix)))
            return
        w = type_weights[t]
        for counts in compositions(len(types[t]), k):
            previous = tuple(total - w * c for total, c in zip(totals, counts))
            if previous in layers[t]:
                backtrack(t - 1, previous, suffix + [counts])

    for totals, value in welfare.items():
        if value == top:
            backtrack(len(types) - 1, totals, [])
    return top, found


def _general_allocations(
    game: CompetitionGame, types: Sequence[Sequence[int]], unsafe_limits: bool
) -> Tuple[Fraction, List[Allocation]]:
    size = allocation_count(types, game.k)
    if size > MAX_TYPE_ALLOCATIONS and not unsafe_limits:
        raise GuardExceededError("type allocations", size, MAX_TYPE_ALLOCATIONS)
    values: Dict[Tuple[int, Tuple[int, ...]], Fraction] = {}

    def firm_value(firm: int, counts: Tuple[int, ...]) -> Fraction:
        key = (firm, counts)
        if key not in values:
            mask = 0
            for members, c in zip(types, counts):
                for j in members[:c]:
                    mask |= 1 << j
            values[key] = game.value(firm, mask)
        return values[key]

    top = None
    found: List[Allocation] = []
    for allocation in product(*(list(compositions(len(t), game.k)) for t in types)):
        welfare = sum(
            (
                firm_value(firm, tuple(counts[firm - 1] for counts in allocation))
                for firm in range(1, game.k + 1)
            ),
            Fraction(0),
        )
        if top is None or welfare > top:
            top, found = welfare, [allocation]
        elif welfare == top:
            found.append(allocation)
    return top, found


def enumerate_optimal_partitions(
    game: CompetitionGame, unsafe_limits: bool = False
) -> List[Partition]:
    """Canonical representatives of every optimal partition, in increasing assignment order"""
    types = worker_types(game)
    if game.is_weighted:
        top, allocations = _weighted_allocations(game, types, unsafe_limits)
    else:
        top, allocations = _general_allocations(game, types, unsafe_limits)
    canonical = sorted({canonical_assignment(game, types, a) for a in allocations})
    logger.debug(
        "%d optimal allocations, %d canonical partitions, welfare %s",
        len(allocations),
        len(canonical),
        top,
    )
    return [Partition(assignment, game.k) for assignment in canonical]


def optimal_welfare(game: CompetitionGame, unsafe_limits: bool = False) -> Fraction:
    types = worker_types(game)
    if game.is_weighted:
        return _weighted_allocations(game, types, unsafe_limits)[0]
    return _general_allocations(game, types, unsafe_limits)[0]

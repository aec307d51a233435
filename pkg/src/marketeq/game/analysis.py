"""Structural predicates, marginal values, demand queries and worker types."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from marketeq.errors import GuardExceededError, InvalidGameError, PreconditionError
from marketeq.game.game import CompetitionGame
from marketeq.game.subsets import full_mask, members_of, submasks
from marketeq.game.valuations import (
    MAX_EXPLICIT_WORKERS,
    ExplicitValuation,
    Valuation,
    WeightedValuation,
    tabulate,
)

logger = logging.getLogger(__name__)

MAX_PAIRWISE_WORKERS = 14


def marginal(valuation: Valuation, j: int, mask: int, weights: Sequence[int]) -> Fraction:
    """m(j, S) = v(S + j) - v(S) for j outside S"""
    if mask >> j & 1:
        raise InvalidGameError(f"Worker {j} already belongs to the subset")
    return valuation.value(mask | 1 << j, weights) - valuation.value(mask, weights)


def is_concave_weighted(valuation: WeightedValuation) -> bool:
    """Unit increments are non-increasing"""
    increments = valuation.increments()
    return all(a >= b for a, b in zip(increments, increments[1:]))


def is_subadditive_pairwise(valuation: Valuation, weights: Sequence[int]) -> bool:
    """v(S + T) <= v(S) + v(T) for disjoint S, T"""
    if isinstance(valuation, WeightedValuation):
        values = valuation.values
        total = valuation.total_weight
        return all(
            values[a + b] <= values[a] + values[b]
            for a in range(total + 1)
            for b in range(total + 1 - a)
        )
    n = len(weights)
    if n > MAX_PAIRWISE_WORKERS:
        raise GuardExceededError("pairwise subadditivity workers", n, MAX_PAIRWISE_WORKERS)
    table = tabulate(valuation, weights).table
    for union in range(1 << n):
        for left in submasks(union):
            if table[union] > table[left] + table[union ^ left]:
                return False
    return True


def is_submodular(valuation: Valuation, weights: Sequence[int]) -> bool:
    """m(j, S) >= m(j, S + j') for every S and j, j' outside S"""
    n = len(weights)
    table = tabulate(valuation, weights).table
    for mask in range(1 << n):
        outside = [j for j in range(n) if not mask >> j & 1]
        for j, jj in combinations(outside, 2):
            gain = table[mask | 1 << j] - table[mask]
            if table[mask | 1 << j | 1 << jj] - table[mask | 1 << jj] > gain:
                return False
    return True


@dataclass(frozen=True)
class Demand:
    """Best profit at given prices and the subsets attaining it"""

    profit: Fraction
    bundles: Tuple[int, ...]


def _price_of(mask: int, prices: Sequence[Fraction]) -> Fraction:
    return sum((prices[j] for j in members_of(mask)), Fraction(0))


def _cheapest_subsets(
    prices: Sequence[Fraction], weights: Sequence[int]
) -> List[Optional[Tuple[Fraction, List[int]]]]:
    """Least price of a subset of every total weight, with all subsets paying it"""
    cheapest: List[Optional[Tuple[Fraction, List[int]]]] = [None] * (sum(weights) + 1)
    cheapest[0] = (Fraction(0), [0])
    for j, w in enumerate(weights):
        for t in range(len(cheapest) - 1, w - 1, -1):
            base = cheapest[t - w]
            if base is None:
                continue
            cost = base[0] + prices[j]
            extended = [mask | 1 << j for mask in base[1]]
            if cheapest[t] is None or cost < cheapest[t][0]:
                cheapest[t] = (cost, extended)
            elif cost == cheapest[t][0]:
                cheapest[t] = (cost, cheapest[t][1] + extended)
    return cheapest


def demand_set(
    valuation: Valuation, prices: Sequence[Fraction], weights: Sequence[int]
) -> Demand:
    """All profit-maximizing subsets at `prices`, in increasing mask order.

    Weighted valuations run the knapsack over total weight and keep every
    cheapest subset; other valuations enumerate all subsets.
    """
    if isinstance(valuation, WeightedValuation):
        cheapest = _cheapest_subsets(prices, weights)
        top = max(valuation.values[t] - entry[0] for t, entry in enumerate(cheapest) if entry)
        bundles = [
            mask
            for t, entry in enumerate(cheapest)
            if entry and valuation.values[t] - entry[0] == top
            for mask in entry[1]
        ]
        return Demand(top, tuple(sorted(bundles)))
    n = len(weights)
    if n > MAX_EXPLICIT_WORKERS:
        raise GuardExceededError("demand enumeration workers", n, MAX_EXPLICIT_WORKERS)
    best: Optional[Fraction] = None
    bundles: List[int] = []
    for mask in range(1 << n):
        profit = valuation.value(mask, weights) - _price_of(mask, prices)
        if best is None or profit > best:
            best, bundles = profit, [mask]
        elif profit == best:
            bundles.append(mask)
    return Demand(best, tuple(bundles))


def best_response(
    valuation: Valuation,
    prices: Sequence[Fraction],
    weights: Sequence[int],
    unsafe_limits: bool = False,
) -> Tuple[Fraction, int]:
    """One profit-maximizing subset and its profit.

    Weighted valuations use a 0/1 knapsack over total weight (cheapest subset
    of every achievable weight); other valuations enumerate all subsets.
    """
    if isinstance(valuation, WeightedValuation):
        cheapest: List[Optional[Tuple[Fraction, int]]] = [None] * (sum(weights) + 1)
        cheapest[0] = (Fraction(0), 0)
        for j, w in enumerate(weights):
            for t in range(len(cheapest) - 1, w - 1, -1):
                base = cheapest[t - w]
                if base is None:
                    continue
                candidate = (base[0] + prices[j], base[1] | 1 << j)
                if cheapest[t] is None or candidate[0] < cheapest[t][0]:
                    cheapest[t] = candidate
        best = (Fraction(0), 0)
        for t, entry in enumerate(cheapest):
            if entry is not None:
                profit = valuation.values[t] - entry[0]
                if profit > best[0]:
                    best = (profit, entry[1])
        return best
    n = len(weights)
    if n > MAX_EXPLICIT_WORKERS and not unsafe_limits:
        raise GuardExceededError("demand enumeration workers", n, MAX_EXPLICIT_WORKERS)
    best = (Fraction(0), 0)
    for mask in range(1, 1 << n):
        profit = valuation.value(mask, weights) - _price_of(mask, prices)
        if profit > best[0]:
            best = (profit, mask)
    return best


@dataclass(frozen=True)
class GSViolation:
    """A demanded bundle whose unchanged-price workers no bundle demanded after the raise keeps"""

    bundle: int
    kept: int
    worker: int


def gs_violation(
    valuation: Valuation,
    prices: Sequence[Fraction],
    raised: Sequence[Fraction],
    weights: Sequence[int],
) -> Optional[GSViolation]:
    """Witness against gross substitutes for the price pair (x, x'), x <= x'"""
    if any(b < a for a, b in zip(prices, raised)):
        raise PreconditionError("Raised prices must dominate the original prices")
    before = demand_set(valuation, prices, weights)
    after = demand_set(valuation, raised, weights)
    for bundle in before.bundles:
        kept = 0
        for j in members_of(bundle):
            if prices[j] == raised[j]:
                kept |= 1 << j
        if any(kept & t == kept for t in after.bundles):
            continue
        closest = max(after.bundles, key=lambda t: (bin(kept & t).count("1"), -t))
        worker = members_of(kept & ~closest)[0]
        return GSViolation(bundle=bundle, kept=kept, worker=worker)
    return None


def gs_sweep(
    valuation: Valuation, weights: Sequence[int]
) -> Optional[Tuple[Tuple[Fraction, ...], Tuple[Fraction, ...], GSViolation]]:
    """Search critical price pairs for a gross-substitutes violation.

    Price levels are the distinct marginal values of the valuation; starting
    from every uniform price level, one worker's price is raised to every
    higher level.
    """
    n = len(weights)
    table = tabulate(valuation, weights).table
    levels = sorted(
        {Fraction(0)}
        | {
            table[mask | 1 << j] - table[mask]
            for mask in range(1 << n)
            for j in range(n)
            if not mask >> j & 1
        }
    )
    explicit = ExplicitValuation(n=n, table=table)
    for base in levels:
        prices = (base,) * n
        for j in range(n):
            for level in levels:
                if level <= base:
                    continue
                raised = prices[:j] + (level,) + prices[j + 1 :]
                witness = gs_violation(explicit, prices, raised, weights)
                if witness is not None:
                    return prices, raised, witness
    return None


def worker_types(game: CompetitionGame) -> List[Tuple[int, ...]]:
    """Classes of interchangeable workers, ordered by smallest member.

    Workers j, j' share a type when every firm values S + j and S + j' equally
    for all S avoiding both; for weighted games this is equal weight.
    """
    n = game.n
    if game.is_weighted:
        classes = {}
        for j, w in enumerate(game.weights):
            classes.setdefault(w, []).append(j)
        return sorted((tuple(c) for c in classes.values()), key=lambda c: c[0])
    if n > MAX_EXPLICIT_WORKERS:
        raise GuardExceededError("worker type workers", n, MAX_EXPLICIT_WORKERS)
    tables = [tabulate(v, game.weights).table for v in game.valuations]
    everyone = full_mask(n)

    def equivalent(j: int, jj: int) -> bool:
        rest = everyone & ~(1 << j) & ~(1 << jj)
        for table in tables:
            for s in submasks(rest):
                if table[s | 1 << j] != table[s | 1 << jj]:
                    return False
        return True

    classes: List[List[int]] = []
    for j in range(n):
        for group in classes:
            if equivalent(group[0], j):
                group.append(j)
                break
        else:
            classes.append([j])
    logger.debug("Found %d worker types among %d workers", len(classes), n)
    return [tuple(group) for group in classes]

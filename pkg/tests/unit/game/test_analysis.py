from fractions import Fraction

import pytest

from marketeq.errors import InvalidGameError, PreconditionError
from marketeq.game.analysis import (
    best_response,
    demand_set,
    gs_sweep,
    gs_violation,
    is_concave_weighted,
    is_subadditive_pairwise,
    is_submodular,
    marginal,
    worker_types,
)
from marketeq.game.game import CompetitionGame
from marketeq.game.subsets import mask_of
from marketeq.game.valuations import (
    MAX_EXPLICIT_WORKERS,
    ExplicitValuation,
    WeightedValuation,
    tabulate,
)

HALF = Fraction(1, 2)


@pytest.fixture
def capped_five_workers():
    """v(w) = min(w, 6) over weights 3, 3, 2, 2, 2"""
    return WeightedValuation.capped(6, 12), [3, 3, 2, 2, 2]


def test_marginal_values(nonconcave_game):
    """Test that marginals read v(S + j) - v(S)"""
    valuation = nonconcave_game.valuation(1)
    weights = nonconcave_game.weights
    assert marginal(valuation, 0, 0b010, weights) == 1
    assert marginal(valuation, 0, 0b110, weights) == 2
    with pytest.raises(InvalidGameError):
        marginal(valuation, 1, 0b010, weights)


def test_capped_marginal():
    """Test that the cap clips the marginal of a weight-2 worker"""
    valuation = WeightedValuation.capped(6, 7)
    assert marginal(valuation, 0, 0b110, [2, 2, 3]) == 1


def test_nonconcave_is_pairwise_subadditive_only(nonconcave_game):
    """Test that the two subadditivity notions disagree on v = (0, 3, 4, 6)"""
    valuation = nonconcave_game.valuation(1)
    assert not is_concave_weighted(valuation)
    assert is_subadditive_pairwise(valuation, nonconcave_game.weights)
    assert not is_submodular(valuation, nonconcave_game.weights)


def test_concave_weighted_is_submodular():
    """Test that a capped valuation passes both predicates"""
    valuation = WeightedValuation.capped(6, 12)
    assert is_concave_weighted(valuation)
    assert is_submodular(valuation, [3, 3, 2, 2, 2])


def test_crossed_pairs_are_submodular(crossed_pairs):
    """Test that both pair valuations have decreasing marginals"""
    assert is_submodular(crossed_pairs.first, [1] * 4)
    assert is_submodular(crossed_pairs.second, [1] * 4)


def test_demand_set_ties(capped_five_workers):
    """Test that {3, 3} and {2, 2, 2} both maximize profit at half prices"""
    valuation, weights = capped_five_workers
    prices = [HALF * w for w in weights]
    demand = demand_set(valuation, prices, weights)
    assert demand.profit == 3
    assert demand.bundles == (mask_of([0, 1]), mask_of([2, 3, 4]))


def test_raising_one_price_leaves_a_unique_bundle(capped_five_workers):
    """Test that raising the first price to 2 leaves {2, 2, 2} alone"""
    valuation, weights = capped_five_workers
    prices = [2] + [HALF * w for w in weights[1:]]
    demand = demand_set(valuation, prices, weights)
    assert demand.bundles == (mask_of([2, 3, 4]),)


def test_gs_violation_on_capped_weights(capped_five_workers):
    """Test that the untouched weight-3 worker is dropped after the raise"""
    valuation, weights = capped_five_workers
    prices = [HALF * w for w in weights]
    raised = [Fraction(2)] + prices[1:]
    witness = gs_violation(valuation, prices, raised, weights)
    assert witness.bundle == mask_of([0, 1])
    assert witness.worker == 1


def test_gs_violation_on_crossed_pairs(crossed_pairs):
    """Test that raising worker 0 drops worker 2 from {0, 2}"""
    prices = [Fraction(1)] * 4
    raised = [Fraction(2)] + prices[1:]
    witness = gs_violation(crossed_pairs.first, prices, raised, [1] * 4)
    assert witness.bundle == mask_of([0, 2])
    assert witness.kept == mask_of([2])
    assert witness.worker == 2


def test_gs_violation_requires_dominating_prices(crossed_pairs):
    """Test that lowered prices are refused"""
    with pytest.raises(PreconditionError):
        gs_violation(crossed_pairs.first, [1, 1, 1, 1], [0, 1, 1, 1], [1] * 4)


def test_gs_sweep_accepts_additive_valuation():
    """Test that additive values never violate gross substitutes"""
    valuation = ExplicitValuation.from_function(3, lambda mask: bin(mask).count("1"))
    assert gs_sweep(valuation, [1, 1, 1]) is None


def test_gs_sweep_finds_crossed_pairs_violation(crossed_pairs):
    """Test that the sweep finds a witness for a non-substitutes valuation"""
    found = gs_sweep(crossed_pairs.first, [1] * 4)
    assert found is not None
    prices, raised, witness = found
    assert gs_violation(crossed_pairs.first, prices, raised, [1] * 4) == witness


@pytest.mark.parametrize("weights", [[3, 3, 2, 2, 2], [5, 6, 7], [1, 2, 3, 5]])
def test_best_response_matches_enumeration(weights, rng):
    """Test that the knapsack best response attains the enumerated demand"""
    total = sum(weights)
    increments = sorted(
        (Fraction(int(k), 16) for k in rng.integers(0, 64, size=total)), reverse=True
    )
    valuation = WeightedValuation.from_increments(increments)
    prices = [Fraction(int(p), 8) for p in rng.integers(0, 40, size=len(weights))]
    profit, bundle = best_response(valuation, prices, weights)
    assert profit == demand_set(tabulate(valuation, weights), prices, weights).profit
    cost = sum((prices[j] for j in range(len(weights)) if bundle >> j & 1), Fraction(0))
    assert valuation.value(bundle, weights) - cost == profit


@pytest.mark.parametrize("weights", [[3, 3, 2, 2, 2], [1, 2, 1, 3], [2, 2, 2, 2]])
def test_weighted_demand_set_matches_enumeration(weights, rng):
    """Test that the knapsack demand set lists exactly the enumerated maximizers, ties included"""
    total = sum(weights)
    increments = sorted((Fraction(int(k), 2) for k in rng.integers(0, 6, size=total)), reverse=True)
    valuation = WeightedValuation.from_increments(increments)
    table = tabulate(valuation, weights)
    for _ in range(20):
        prices = [Fraction(int(p), 2) for p in rng.integers(0, 6, size=len(weights))]
        assert demand_set(valuation, prices, weights) == demand_set(table, prices, weights)


def test_weighted_demand_set_beyond_enumeration_guard():
    """Test that weighted demand needs no subset enumeration"""
    n = MAX_EXPLICIT_WORKERS + 4
    weights = [1] * n
    valuation = WeightedValuation.capped(2, n)
    prices = [Fraction(j + 1, 4) for j in range(n)]
    demand = demand_set(valuation, prices, weights)
    assert demand.profit == Fraction(5, 4)
    assert demand.bundles == (mask_of([0, 1]),)


def test_worker_types_weighted(capped_nine_game):
    """Test that weighted workers are typed by weight"""
    assert worker_types(capped_nine_game) == [(0, 1, 2, 3, 4), (5, 6, 7), (8,)]


def test_worker_types_split_by_second_firm(crossed_pairs):
    """Test that workers equivalent for one firm are split by the other"""
    one_firm = CompetitionGame.symmetric([1] * 4, crossed_pairs.first, 2)
    assert worker_types(one_firm) == [(0, 2), (1, 3)]
    assert worker_types(crossed_pairs.two_firm_game()) == [(0,), (1,), (2,), (3,)]

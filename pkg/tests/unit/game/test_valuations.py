from fractions import Fraction

import pytest

from marketeq.errors import GuardExceededError, InvalidGameError
from marketeq.game.game import CompetitionGame
from marketeq.game.subsets import mask_of, members_of, submasks
from marketeq.game.valuations import (
    ExplicitValuation,
    SynergyValuation,
    WeightedValuation,
    evaluate,
    tabulate,
    valuation_from_dict,
)
from marketeq.network.synergy import SynergyMatrix


def test_mask_round_trip():
    """Test that subsets survive the bitmask encoding"""
    assert mask_of([0, 2, 3]) == 0b1101
    assert members_of(0b1101) == [0, 2, 3]
    assert sorted(submasks(0b101)) == [0, 1, 4, 5]


def test_weighted_value_reads_total_weight():
    """Test that a weighted valuation looks up the hired total"""
    valuation = WeightedValuation.capped(6, 10)
    weights = [2, 3, 5]
    assert evaluate(valuation, [0, 1], weights) == 5
    assert evaluate(valuation, [1, 2], weights) == 6
    assert valuation.increments()[:7] == (1, 1, 1, 1, 1, 1, 0)


def test_weighted_from_increments():
    """Test that increments accumulate into values"""
    valuation = WeightedValuation.from_increments([3, 1, 2])
    assert valuation.values == (0, 3, 4, 6)


@pytest.mark.parametrize("values", [[1, 2], [0, 3, 2], []])
def test_weighted_rejects_invalid_tables(values):
    """Test that v(0) != 0 and decreasing tables are rejected"""
    with pytest.raises(InvalidGameError):
        WeightedValuation(tuple(values))


def test_power_valuation_is_rationalized():
    """Test that irrational powers are rounded to millionths and flagged"""
    valuation = WeightedValuation.power(Fraction(1, 2), 4)
    assert valuation.values[4] == 2
    assert valuation.values[2] == Fraction(1414214, 10**6)
    assert valuation.rationalized


def test_explicit_by_size():
    """Test that a cardinality valuation tabulates every subset"""
    valuation = ExplicitValuation.by_size(3, [0, 3, 6, 8])
    assert valuation.value(0b011) == 6
    assert valuation.value(0b111) == 8


def test_explicit_rejects_non_monotone_table():
    """Test that removing a worker may never increase value"""
    with pytest.raises(InvalidGameError):
        ExplicitValuation(n=2, table=(0, 2, 1, 1))


def test_explicit_guard():
    """Test that tables beyond the worker guard are refused"""
    with pytest.raises(GuardExceededError):
        ExplicitValuation.from_function(21, lambda mask: 0)


def test_synergy_value_counts_touching_edges():
    """Test that v_M(S) sums self-edges, inner edges and edges leaving S"""
    matrix = SynergyMatrix.from_rows([[1, 2, 1], [2, 0, 2], [1, 2, 2]])
    valuation = SynergyValuation(matrix=matrix)
    assert valuation.value(0b001) == 4
    assert valuation.value(0b010) == 4
    assert valuation.value(0b100) == 5
    assert valuation.value(0b101) == 8


def test_tabulate_weighted():
    """Test that tabulating a weighted valuation agrees with direct lookup"""
    valuation = WeightedValuation((0, 3, 4, 6))
    table = tabulate(valuation, [1, 1, 1])
    assert table.table == (0, 3, 3, 4, 3, 4, 4, 6)


def test_valuation_from_dict_dispatch():
    """Test that every valuation kind parses from its payload"""
    weights = [1, 1]
    assert isinstance(valuation_from_dict({"kind": "weighted", "cap": 1}, weights), WeightedValuation)
    explicit = valuation_from_dict({"kind": "explicit", "by_size": [0, 2, 3]}, weights)
    assert explicit.value(0b11) == 3
    with pytest.raises(InvalidGameError):
        valuation_from_dict({"kind": "quadratic"}, weights)


@pytest.mark.parametrize(
    "payload",
    [
        {"kind": "synergy"},
        {"kind": "synergy", "matrix": 3},
        {"kind": "influence"},
        {"kind": "explicit", "table": [[[0]]]},
        {"kind": "explicit", "table": 5},
        {"kind": "weighted", "values": 7},
    ],
)
def test_valuation_from_dict_malformed(payload):
    """Test that a payload with missing or mistyped fields is rejected as an invalid game"""
    with pytest.raises(InvalidGameError, match="Malformed"):
        valuation_from_dict(payload, [1, 1])


def test_game_missing_synergy_matrix():
    """Test that a synergy firm without a matrix cannot size the game"""
    with pytest.raises(InvalidGameError):
        CompetitionGame.from_dict({"firms": [{"kind": "synergy", "copies": 2}]})

import pytest

from marketeq.errors import GuardExceededError
from marketeq.game.game import CompetitionGame
from marketeq.game.io import load_json
from marketeq.game.valuations import ExplicitValuation, InfluenceValuation
from marketeq.network.influence import InfluenceNetwork
from marketeq.network.moebius import moebius_decomposition


def test_negative_triple(load):
    """Test that v = (0, 3, 6, 8) needs -1 on the triple"""
    game = load("moebius_three_workers")
    table = moebius_decomposition(game.valuations[0], game.weights)
    assert [table.coefficients[m] for m in (0b001, 0b010, 0b100)] == [2, 2, 2]
    assert [table.coefficients[m] for m in (0b011, 0b101, 0b110)] == [1, 1, 1]
    assert table.coefficients[0b111] == -1
    assert not table.representable
    assert table.witness == 0b111
    assert table.to_dict()["witness"] == {"subset": [0, 1, 2], "value": "-1"}


def test_influence_coefficients():
    """Test that coefficients count the nodes reached by exactly each worker set"""
    network = InfluenceNetwork.from_dict(load_json("three_worker_network"))
    table = moebius_decomposition(InfluenceValuation(network=network), [1, 1, 1])
    assert table.representable
    assert [table.coefficients[m] for m in (0b001, 0b010, 0b100)] == [1, 0, 2]
    assert [table.coefficients[m] for m in (0b011, 0b101, 0b110)] == [2, 1, 2]
    assert table.coefficients[0b111] == 0


def test_reconstruction(crossed_pairs):
    """Test that summing coefficients over meeting sets gives back every value"""
    table = moebius_decomposition(crossed_pairs.first, [1] * 4)
    assert table.representable
    for mask in range(16):
        assert table.reconstruct(mask) == crossed_pairs.first.table[mask]


def test_guard():
    valuation = ExplicitValuation.by_size(13, list(range(14)))
    with pytest.raises(GuardExceededError):
        moebius_decomposition(valuation, [1] * 13)

import pytest

from marketeq.equilibrium.search import find_pspe
from marketeq.errors import PreconditionError
from marketeq.network.symmetrize import symmetrize


def test_matches_combined_network(crossed_pairs):
    """Test that the symmetrized crossed pairs equal the combined influence game"""
    symmetric = symmetrize(crossed_pairs.two_firm_game(), 5)
    influence = crossed_pairs.symmetric_game()
    for mask in range(1 << 6):
        assert symmetric.value(1, mask) == influence.value(1, mask)
    assert symmetric.names[-2:] == ("x", "y")


def test_values_around_x_and_y(crossed_pairs):
    """Test that x and y together are worth 2Z + Z'"""
    symmetric = symmetrize(crossed_pairs.two_firm_game(), 7)
    assert symmetric.value(1, 0b110000) == 2 * 4 + 7
    assert symmetric.value(1, 0b010101) == crossed_pairs.first.table[0b0101] + 4 + 7
    assert symmetric.value(2, 0b000011) == 3 + 4


def test_existence_is_preserved(crossed_pairs, four_workers_game):
    """Test that the symmetric game has an equilibrium exactly when the source has one"""
    assert not find_pspe(crossed_pairs.two_firm_game()).exists
    assert not find_pspe(symmetrize(crossed_pairs.two_firm_game(), 5)).exists
    assert find_pspe(four_workers_game).exists
    assert find_pspe(symmetrize(four_workers_game, 12)).exists


def test_preconditions(crossed_pairs, triangle_game):
    """Test that Z' must exceed Z and only two-firm games are accepted"""
    with pytest.raises(PreconditionError):
        symmetrize(crossed_pairs.two_firm_game(), 4)
    with pytest.raises(PreconditionError):
        symmetrize(triangle_game, 100)

import logging
from fractions import Fraction

import pytest

from marketeq.equilibrium.verify import (
    assert_stable,
    check_outcome,
    deviation_gap,
    fairness_transform,
)
from marketeq.errors import VerificationError
from marketeq.game.game import CompetitionGame, Outcome, Partition
from marketeq.game.io import load_outcome
from marketeq.game.valuations import WeightedValuation


@pytest.fixture
def half_pay(triangle_game):
    return load_outcome(triangle_game, "triangle_half_pay_outcome")


def test_stable_triangle(triangle_game):
    """Test that paying each worker its value minus one is an equilibrium"""
    outcome = load_outcome(triangle_game, "triangle_outcome")
    assert outcome.profits == (1, 1, 1)
    report = check_outcome(triangle_game, outcome)
    assert report.passed
    assert report.gap.stable


def test_half_pay_gap(triangle_game, half_pay):
    """Test that firm 1 gains 1 by hiring a and b"""
    report = deviation_gap(triangle_game, half_pay)
    assert report.firm == 1
    assert report.bundle == 0b011
    assert report.gain == 1
    assert report.to_dict() == {"firm": 1, "bundle": [0, 1], "gain": "1"}


def test_half_pay_normalized(triangle_game, half_pay):
    """Test that the gain is divided by the deviating firm's profit"""
    report = deviation_gap(triangle_game, half_pay, normalized=True)
    assert report.firm == 1
    assert report.normalized == Fraction(2, 3)
    assert not report.unnormalizable


def test_half_pay_predicates(triangle_game, half_pay):
    """Test that envy and marginal bounds flag the unstable outcome"""
    report = check_outcome(triangle_game, half_pay)
    assert not report.passed
    assert report.individually_rational.passed
    assert not report.envy_free.passed
    assert (1, 2) in report.envy_free.witnesses
    assert not report.marginal_bounds.passed
    document = report.to_dict()
    assert document["gap"] == "1"
    assert document["verdicts"]["pspe"] is False


def test_unnormalizable_gain(four_workers_game):
    """Test that a zero-profit firm reports its raw gain"""
    outcome = Outcome.build(four_workers_game, Partition((1, 1, 1, 2), 2), [1, 2, 3, 4])
    report = deviation_gap(four_workers_game, outcome, normalized=True)
    assert report.firm == 1
    assert report.bundle == 0b1000
    assert report.normalized == report.gain == 1
    assert report.unnormalizable


def test_five_worker_synergy_outcome(load):
    """Test that pairs and a single worker each leave profit 1"""
    game = load("five_worker_synergy")
    outcome = load_outcome(game, "five_worker_synergy_outcome")
    assert outcome.profits == (1, 1, 1)
    assert outcome.welfare == 17
    assert check_outcome(game, outcome).gap.gain == 0


def test_fairness_transform():
    """Test that same-type workers at one firm end up paid their average"""
    game = CompetitionGame.symmetric([1] * 4, WeightedValuation.from_increments([5, 3, 2, 1]), 2)
    outcome = Outcome.build(game, Partition((1, 1, 2, 2), 2), [2, 3, 2, 2])
    transformed = fairness_transform(game, outcome)
    assert transformed.payments == (Fraction(5, 2), Fraction(5, 2), 2, 2)
    assert transformed.profits == outcome.profits
    assert not check_outcome(game, outcome).fair.passed


def test_fairness_keeps_stability(four_workers_game):
    """Test that a stable outcome stays stable after averaging"""
    outcome = Outcome.build(four_workers_game, Partition((1, 1, 1, 2), 2), [1, 1, 1, 2])
    transformed = fairness_transform(four_workers_game, outcome, check_stable=True)
    assert deviation_gap(four_workers_game, transformed).stable


def test_assert_stable(triangle_game, half_pay):
    """Test that an unstable outcome raises with the deviation"""
    with pytest.raises(VerificationError, match="firm 1 gains 1"):
        assert_stable(triangle_game, half_pay, "half pay")


def test_fairness_flags_unequal_pay_across_firms(caplog):
    """Test that same-type workers paid differently by different firms are reported before averaging"""
    game = CompetitionGame.symmetric([1] * 4, WeightedValuation.from_increments([5, 3, 2, 1]), 2)
    outcome = Outcome.build(game, Partition((1, 1, 2, 2), 2), [2, 2, 3, 3])
    with caplog.at_level(logging.WARNING, logger="marketeq.equilibrium.verify"):
        transformed = fairness_transform(game, outcome)
    assert transformed.payments == outcome.payments
    assert "not a PSPE" in caplog.text
    assert "(0, 2)" in caplog.text


def test_fairness_quiet_within_one_firm(caplog):
    """Test that no warning is logged when the unequal pay is all inside one firm"""
    game = CompetitionGame.symmetric([1] * 4, WeightedValuation.from_increments([5, 3, 2, 1]), 2)
    outcome = Outcome.build(game, Partition((1, 1, 1, 1), 2), [1, 3, 2, 2])
    with caplog.at_level(logging.WARNING, logger="marketeq.equilibrium.verify"):
        fairness_transform(game, outcome)
    assert "not a PSPE" not in caplog.text

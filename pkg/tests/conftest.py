from fractions import Fraction

import numpy as np
import pytest

from marketeq.game.game import CompetitionGame
from marketeq.game.io import load_fixture
from marketeq.game.valuations import WeightedValuation
from marketeq.network.constructions import build_crossed_pairs


@pytest.fixture
def load():
    """Load a bundled fixture game by name"""
    return load_fixture


@pytest.fixture
def nonconcave_game():
    return load_fixture("nonconcave_three_workers")


@pytest.fixture
def capped_nine_game():
    return load_fixture("capped_nine_workers")


@pytest.fixture
def four_workers_game():
    return load_fixture("four_workers_cap6")


@pytest.fixture
def triangle_game():
    return load_fixture("triangle_synergy")


@pytest.fixture
def three_worker_synergy_game():
    return load_fixture("three_worker_synergy")


@pytest.fixture(scope="session")
def crossed_pairs():
    return build_crossed_pairs()


@pytest.fixture
def rng():
    """Seeded generator for property tests"""
    return np.random.default_rng(20240601)


@pytest.fixture
def random_weighted_game(rng):
    """Factory of small concave weighted games with quarter-integer increments"""

    def draw(symmetric=True, max_workers=6, max_firms=3):
        n = int(rng.integers(2, max_workers + 1))
        k = int(rng.integers(2, max_firms + 1))
        weights = [int(w) for w in rng.integers(1, 5, size=n)]
        total = sum(weights)

        def valuation():
            increments = sorted(
                (Fraction(int(d), 4) for d in rng.integers(0, 12, size=total)), reverse=True
            )
            return WeightedValuation.from_increments(increments)

        if symmetric:
            return CompetitionGame.symmetric(weights, valuation(), k)
        return CompetitionGame(weights=tuple(weights), valuations=tuple(valuation() for _ in range(k)))

    return draw

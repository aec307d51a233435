"""Four-worker valuations without an equilibrium and the influence networks realizing them."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from marketeq.errors import VerificationError
from marketeq.game.game import CompetitionGame
from marketeq.game.subsets import mask_of, members_of, popcount
from marketeq.game.valuations import ExplicitValuation, InfluenceValuation
from marketeq.network.influence import InfluenceNetwork, influence_exact

logger = logging.getLogger(__name__)

FOUR_WORKERS = 4
CYCLE_FIRST = ((0, 1), (1, 2), (2, 3), (3, 0))
CYCLE_SECOND = ((0, 2), (2, 1), (1, 3), (3, 0))
SHARED_NODES = 5


def _pair_valuation(special: Sequence[Tuple[int, int]]) -> ExplicitValuation:
    """2 for one worker, 3 for a pair (4 for a special pair), 4 for three or more"""
    special_masks = {mask_of(pair) for pair in special}

    def value(mask: int) -> int:
        size = popcount(mask)
        if size == 0:
            return 0
        if size == 1:
            return 2
        if size == 2:
            return 4 if mask in special_masks else 3
        return 4

    return ExplicitValuation.from_function(FOUR_WORKERS, value)


def _cycle_network(pairs: Sequence[Tuple[int, int]]) -> InfluenceNetwork:
    """One node per pair of the cycle, reached by both of its workers"""
    edges = []
    for offset, (j, jj) in enumerate(pairs):
        node = FOUR_WORKERS + offset
        edges += [(j, node, Fraction(1)), (jj, node, Fraction(1))]
    return InfluenceNetwork(FOUR_WORKERS + len(pairs), tuple(range(FOUR_WORKERS)), tuple(edges))


@dataclass(frozen=True)
class PairGames:
    """
    The two four-worker valuations, their networks, and the combined network
    of the six-worker symmetric game (workers 0..3 plus x = 4 and y = 5).
    """

    first: ExplicitValuation
    second: ExplicitValuation
    first_network: InfluenceNetwork
    second_network: InfluenceNetwork
    combined_network: InfluenceNetwork

    def two_firm_game(self) -> CompetitionGame:
        return CompetitionGame(
            weights=(1,) * FOUR_WORKERS,
            valuations=(self.first, self.second),
            metadata={"description": "two firms with crossed pair valuations"},
        )

    def symmetric_game(self) -> CompetitionGame:
        valuation = InfluenceValuation(network=self.combined_network)
        return CompetitionGame(
            weights=(1,) * (FOUR_WORKERS + 2),
            valuations=(valuation, valuation),
            names=("0", "1", "2", "3", "x", "y"),
            metadata={"description": "two identical firms on the combined 3-sparse network"},
        )


def build_crossed_pairs() -> PairGames:
    """Build and cross-check the crossed-pair valuations and their networks"""
    first = _pair_valuation(((0, 2), (1, 3)))
    second = _pair_valuation(((0, 1), (2, 3)))
    first_network = _cycle_network(CYCLE_FIRST)
    second_network = _cycle_network(CYCLE_SECOND)

    for valuation, network in ((first, first_network), (second, second_network)):
        for mask in range(1 << FOUR_WORKERS):
            reached = influence_exact(network, members_of(mask))
            if reached != valuation.table[mask]:
                raise VerificationError(
                    f"Network influence {reached} differs from value {valuation.table[mask]} "
                    f"on {members_of(mask)}"
                )

    x, y = FOUR_WORKERS, FOUR_WORKERS + 1
    first_nodes = range(6, 6 + len(CYCLE_FIRST))
    second_nodes = range(first_nodes.stop, first_nodes.stop + len(CYCLE_SECOND))
    shared_nodes = range(second_nodes.stop, second_nodes.stop + SHARED_NODES)
    edges = []
    for node, pair in zip(first_nodes, CYCLE_FIRST):
        edges += [(j, node, Fraction(1)) for j in pair]
        edges.append((y, node, Fraction(1)))
    for node, pair in zip(second_nodes, CYCLE_SECOND):
        edges += [(j, node, Fraction(1)) for j in pair]
        edges.append((x, node, Fraction(1)))
    for node in shared_nodes:
        edges += [(x, node, Fraction(1)), (y, node, Fraction(1))]
    combined = InfluenceNetwork(shared_nodes.stop, tuple(range(FOUR_WORKERS + 2)), tuple(edges))
    logger.debug("Combined network: %d nodes, %d edges", combined.nodes, len(edges))
    return PairGames(first, second, first_network, second_network, combined)

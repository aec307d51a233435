from typing import List

from marketeq.network.constructions import PairGames, build_crossed_pairs
from marketeq.network.influence import (
    InfluenceEstimate,
    InfluenceNetwork,
    influence_exact,
    influence_monte_carlo,
    reach_counts,
    sparsity,
)
from marketeq.network.moebius import MoebiusTable, moebius_decomposition
from marketeq.network.symmetrize import symmetrize
from marketeq.network.synergy import SynergyMatrix, network_to_synergy, synergy_to_network

__all__: List[str] = [
    "InfluenceEstimate",
    "InfluenceNetwork",
    "MoebiusTable",
    "PairGames",
    "SynergyMatrix",
    "build_crossed_pairs",
    "influence_exact",
    "influence_monte_carlo",
    "moebius_decomposition",
    "network_to_synergy",
    "reach_counts",
    "sparsity",
    "symmetrize",
    "synergy_to_network",
]

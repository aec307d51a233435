from typing import List

from marketeq.game.analysis import (
    Demand,
    GSViolation,
    best_response,
    demand_set,
    gs_sweep,
    gs_violation,
    is_concave_weighted,
    is_submodular,
    is_subadditive_pairwise,
    marginal,
    worker_types,
)
from marketeq.game.game import CompetitionGame, Outcome, Partition
from marketeq.game.io import load_fixture, load_game, load_outcome
from marketeq.game.valuations import (
    ExplicitValuation,
    InfluenceValuation,
    SynergyValuation,
    Valuation,
    WeightedValuation,
    evaluate,
    tabulate,
    valuation_from_dict,
)

__all__: List[str] = [
    "CompetitionGame",
    "Demand",
    "ExplicitValuation",
    "GSViolation",
    "InfluenceValuation",
    "Outcome",
    "Partition",
    "SynergyValuation",
    "Valuation",
    "WeightedValuation",
    "best_response",
    "demand_set",
    "evaluate",
    "gs_sweep",
    "gs_violation",
    "is_concave_weighted",
    "is_submodular",
    "is_subadditive_pairwise",
    "load_fixture",
    "load_game",
    "load_outcome",
    "marginal",
    "tabulate",
    "valuation_from_dict",
    "worker_types",
]

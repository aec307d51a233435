from typing import List

from .equilibrium.constructions import (
    balanced_pspe,
    homogeneous_min_delta,
    synergy_two_firm_pspe,
    two_firm_weighted_pspe,
)
from .equilibrium.search import cartel_proof_outcome, find_pspe, payment_extremes
from .equilibrium.verify import check_outcome, deviation_gap
from .errors import (
    GuardExceededError,
    InvalidGameError,
    MarketEqError,
    NotApplicableError,
    PreconditionError,
    VerificationError,
)
from .game.game import CompetitionGame, Outcome, Partition
from .game.io import load_fixture, load_game, load_outcome
from .game.valuations import (
    ExplicitValuation,
    InfluenceValuation,
    SynergyValuation,
    WeightedValuation,
)
from .partition.configuration import configuration_lp
from .partition.enumerate import enumerate_optimal_partitions
from .partition.weighted import optimal_partition_weighted
from .stores.csv import CSVStore
from .stores.duckdb import DuckDBStore

__all__: List[str] = [
    "CompetitionGame",
    "Outcome",
    "Partition",
    "WeightedValuation",
    "ExplicitValuation",
    "SynergyValuation",
    "InfluenceValuation",
    "load_game",
    "load_outcome",
    "load_fixture",
    "optimal_partition_weighted",
    "enumerate_optimal_partitions",
    "configuration_lp",
    "find_pspe",
    "payment_extremes",
    "cartel_proof_outcome",
    "check_outcome",
    "deviation_gap",
    "two_firm_weighted_pspe",
    "balanced_pspe",
    "homogeneous_min_delta",
    "synergy_two_firm_pspe",
    "CSVStore",
    "DuckDBStore",
    "MarketEqError",
    "InvalidGameError",
    "GuardExceededError",
    "PreconditionError",
    "NotApplicableError",
    "VerificationError",
]

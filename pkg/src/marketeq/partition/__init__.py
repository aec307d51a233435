from typing import List

from marketeq.partition.configuration import GapReport, configuration_lp, configuration_program
from marketeq.partition.enumerate import enumerate_optimal_partitions, optimal_welfare
from marketeq.partition.maxcut import max_cut_two_firm, synergy_matrix_of
from marketeq.partition.weighted import (
    WeightProfile,
    almost_balanced_partition,
    min_gap_optimal_partition,
    optimal_partition_weighted,
    optimal_profiles,
    profile_table,
)

__all__: List[str] = [
    "GapReport",
    "WeightProfile",
    "almost_balanced_partition",
    "configuration_lp",
    "configuration_program",
    "enumerate_optimal_partitions",
    "max_cut_two_firm",
    "min_gap_optimal_partition",
    "optimal_partition_weighted",
    "optimal_profiles",
    "optimal_welfare",
    "profile_table",
    "synergy_matrix_of",
]

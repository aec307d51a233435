from typing import List

from marketeq.equilibrium.constructions import (
    TwoFirmConstruction,
    UniformPayment,
    balanced_pspe,
    heuristic_delta,
    heuristic_payments,
    homogeneous_min_delta,
    revenue_baseline,
    stable_interval,
    synergy_two_firm_pspe,
    two_firm_weighted_pspe,
)
from marketeq.equilibrium.search import (
    SearchResult,
    cartel_proof_outcome,
    find_pspe,
    payment_extremes,
)
from marketeq.equilibrium.stability import (
    RowTag,
    StabilityLP,
    StabilitySolution,
    build_stability_lp,
    solve_lazily,
    solve_partition,
    solve_stability_lp,
)
from marketeq.equilibrium.verify import (
    DeviationReport,
    OutcomeReport,
    check_outcome,
    deviation_gap,
    fairness_transform,
)

__all__: List[str] = [
    "DeviationReport",
    "OutcomeReport",
    "RowTag",
    "SearchResult",
    "StabilityLP",
    "StabilitySolution",
    "TwoFirmConstruction",
    "UniformPayment",
    "balanced_pspe",
    "build_stability_lp",
    "cartel_proof_outcome",
    "check_outcome",
    "deviation_gap",
    "fairness_transform",
    "find_pspe",
    "heuristic_delta",
    "heuristic_payments",
    "homogeneous_min_delta",
    "payment_extremes",
    "revenue_baseline",
    "solve_lazily",
    "solve_partition",
    "solve_stability_lp",
    "stable_interval",
    "synergy_two_firm_pspe",
    "two_firm_weighted_pspe",
]

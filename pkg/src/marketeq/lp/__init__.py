from marketeq.lp.simplex import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearConstraint,
    LPResult,
    RationalLP,
    irreducible_conflict,
    solve,
)

__all__ = [
    "INFEASIBLE",
    "OPTIMAL",
    "UNBOUNDED",
    "LPResult",
    "LinearConstraint",
    "RationalLP",
    "irreducible_conflict",
    "solve",
]

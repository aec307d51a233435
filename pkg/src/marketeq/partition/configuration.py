"""Configuration LP: fractional allocation of bundles to firms.

Identical firms are merged into classes and bundles into type-count vectors.
Any fractional solution can be averaged over relabelings of identical firms
and of same-type workers without changing its value, so the aggregated LP has
the same optimum as the one with a variable per firm and worker subset.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Any, Dict, List, Tuple

from marketeq.errors import GuardExceededError, VerificationError
from marketeq.game.analysis import worker_types
from marketeq.game.game import CompetitionGame
from marketeq.lp.simplex import OPTIMAL, LinearConstraint, RationalLP, solve
from marketeq.partition.enumerate import optimal_welfare
from marketeq.rational import format_rational

logger = logging.getLogger(__name__)

MAX_CONFIGURATION_VARIABLES = 1 << 16


@dataclass(frozen=True)
class GapReport:
    """Integral and fractional welfare optima; `ratio` is 1 exactly when they agree"""

    integral: Fraction
    fractional: Fraction

    @property
    def ratio(self) -> Fraction:
        if self.integral == 0:
            return Fraction(1)
        return self.fractional / self.integral

    def to_dict(self) -> Dict[str, Any]:
        return {
            "integral": format_rational(self.integral),
            "fractional": format_rational(self.fractional),
            "ratio": format_rational(self.ratio),
        }


def configuration_program(
    game: CompetitionGame, unsafe_limits: bool = False
) -> Tuple[RationalLP, List[Tuple[Tuple[int, ...], Tuple[int, ...]]]]:
    """The aggregated LP and, per variable, its (firm class, type-count vector)"""
    types = worker_types(game)
    classes = game.firm_classes()
    bundles = [b for b in product(*(range(len(t) + 1) for t in types)) if any(b)]
    size = len(classes) * len(bundles)
    if size > MAX_CONFIGURATION_VARIABLES and not unsafe_limits:
        raise GuardExceededError("configuration LP variables", size, MAX_CONFIGURATION_VARIABLES)

    columns = [(group, bundle) for group in classes for bundle in bundles]
    objective = []
    for group, bundle in columns:
        mask = 0
        for members, count in zip(types, bundle):
            for j in members[:count]:
                mask |= 1 << j
        objective.append(game.value(group[0], mask))

    rows = []
    for group in classes:
        rows.append(
            LinearConstraint(
                tuple(1 if g == group else 0 for g, _ in columns),
                len(group),
                tag=("firms", group),
            )
        )
    for t, members in enumerate(types):
        rows.append(
            LinearConstraint(
                tuple(b[t] for _, b in columns),
                len(members),
                tag=("workers", members),
            )
        )
    names = tuple(f"y_{group[0]}_{'_'.join(map(str, b))}" for group, b in columns)
    return RationalLP(len(columns), tuple(rows), tuple(objective), names), columns


def configuration_lp(game: CompetitionGame, unsafe_limits: bool = False) -> GapReport:
    """Fractional and integral welfare of `game` with their ratio"""
    program, _ = configuration_program(game, unsafe_limits)
    result = solve(program)
    if result.status != OPTIMAL:
        raise VerificationError(f"Configuration LP ended {result.status}; x = 0 is always feasible")
    integral = optimal_welfare(game, unsafe_limits)
    report = GapReport(integral=integral, fractional=result.objective_value)
    if report.fractional < report.integral:
        raise VerificationError(
            f"Fractional optimum {report.fractional} below integral optimum {report.integral}"
        )
    logger.info(
        "Configuration LP: integral %s, fractional %s, ratio %s",
        integral,
        report.fractional,
        report.ratio,
    )
    return report

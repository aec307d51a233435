import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

from marketeq.equilibrium.stability import FEASIBLE, StabilitySolution, solve_partition
from marketeq.equilibrium.verify import assert_stable
from marketeq.game.game import CompetitionGame, Outcome
from marketeq.lp.simplex import INFEASIBLE, UNBOUNDED
from marketeq.partition.enumerate import enumerate_optimal_partitions

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchResult:
    """
    Result of searching every optimal partition for stable payments.

    `verdicts` holds the stability solution of each partition tried, in
    canonical order; the search stops at the first stable one.
    """

    outcome: Optional[Outcome]
    verdicts: Tuple[StabilitySolution, ...]
    unbounded: bool = False

    @property
    def exists(self) -> bool:
        return self.outcome is not None

    def to_dict(self) -> Dict[str, Any]:
        if self.exists:
            document = {"verdict": "pspe", **self.outcome.to_dict()}
            if self.unbounded:
                document["objective"] = "unbounded"
            return document
        return {
            "verdict": "nonexistence",
            "partitions": [solution.to_dict() for solution in self.verdicts],
        }


def _solve(
    game: CompetitionGame, partition, objective: str, **options
) -> Tuple[StabilitySolution, bool]:
    solution = solve_partition(game, partition, objective=objective, **options)
    if solution.status == UNBOUNDED:
        return solve_partition(game, partition, objective="feasible", **options), True
    return solution, False


def find_pspe(
    game: CompetitionGame,
    objective: str = "feasible",
    collapse: bool = True,
    lazy: Optional[bool] = None,
    certify: bool = True,
    unsafe_limits: bool = False,
) -> SearchResult:
    """First stable outcome over the optimal partitions, or a certificate per partition.

    Only welfare-maximizing partitions can be stabilized, so refuting all of
    them proves that no equilibrium exists.
    """
    verdicts: List[StabilitySolution] = []
    options = dict(collapse=collapse, lazy=lazy, certify=certify, unsafe_limits=unsafe_limits)
    for partition in enumerate_optimal_partitions(game, unsafe_limits):
        solution, unbounded = _solve(game, partition, objective, **options)
        verdicts.append(solution)
        logger.info("Partition %s: %s", partition, solution.status)
        if solution.status == FEASIBLE:
            outcome = solution.outcome()
            assert_stable(game, outcome, f"LP solution on {partition}")
            return SearchResult(outcome, tuple(verdicts), unbounded)
    return SearchResult(None, tuple(verdicts))


def payment_extremes(
    game: CompetitionGame, collapse: bool = True, unsafe_limits: bool = False
) -> Optional[Tuple[Outcome, Optional[Outcome]]]:
    """Stable outcomes of least and greatest total pay over every optimal partition.

    Returns None when no partition is stable; the second entry is None when
    total pay is unbounded.
    """
    lowest: Optional[Outcome] = None
    highest: Optional[Outcome] = None
    unbounded = False
    for partition in enumerate_optimal_partitions(game, unsafe_limits):
        low = solve_partition(
            game, partition, collapse, "min-pay", certify=False, unsafe_limits=unsafe_limits
        )
        if low.status == INFEASIBLE:
            continue
        candidate = low.outcome()
        if lowest is None or candidate.total_pay < lowest.total_pay:
            lowest = candidate
        high = solve_partition(
            game, partition, collapse, "max-pay", certify=False, unsafe_limits=unsafe_limits
        )
        if high.status == UNBOUNDED:
            unbounded = True
            continue
        candidate = high.outcome()
        if highest is None or candidate.total_pay > highest.total_pay:
            highest = candidate
    if lowest is None:
        return None
    for outcome in (lowest, highest):
        if outcome is not None:
            assert_stable(game, outcome, "extreme-pay LP solution")
    return lowest, None if unbounded else highest


def cartel_proof_outcome(
    game: CompetitionGame, collapse: bool = True, unsafe_limits: bool = False
) -> Optional[Outcome]:
    """The stable outcome with the least total pay, if any"""
    lowest: Optional[Outcome] = None
    for partition in enumerate_optimal_partitions(game, unsafe_limits):
        solution = solve_partition(
            game, partition, collapse, "min-pay", certify=False, unsafe_limits=unsafe_limits
        )
        if solution.status == INFEASIBLE:
            continue
        candidate = solution.outcome()
        if lowest is None or candidate.total_pay < lowest.total_pay:
            lowest = candidate
    return lowest

"""Outcome verification: deviation gap, rationality, envy, fairness and marginal bounds."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from marketeq.errors import VerificationError
from marketeq.game.analysis import best_response, worker_types
from marketeq.game.game import CompetitionGame, Outcome
from marketeq.game.subsets import members_of
from marketeq.rational import format_rational

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DeviationReport:
    """
    Largest profit increase available to a single firm at the posted payments.

    `gain` is raw; `normalized` divides by the deviating firm's profit, except
    when that profit is not positive, in which case the raw gain is used and
    `unnormalizable` is set.
    """

    firm: int
    bundle: int
    gain: Fraction
    normalized: Optional[Fraction] = None
    unnormalizable: bool = False

    @property
    def stable(self) -> bool:
        return self.gain == 0

    def to_dict(self) -> Dict[str, Any]:
        document = {
            "firm": self.firm,
            "bundle": members_of(self.bundle),
            "gain": format_rational(self.gain),
        }
        if self.normalized is not None:
            document["normalized"] = format_rational(self.normalized)
            document["unnormalizable"] = self.unnormalizable
        return document


def deviation_gap(
    game: CompetitionGame,
    outcome: Outcome,
    normalized: bool = False,
    unsafe_limits: bool = False,
) -> DeviationReport:
    """max over firms i and bundles S' of (v_i(S') - x(S')) - r_i; lowest firm wins ties"""
    outcome.partition.check_against(game)
    best: Optional[DeviationReport] = None
    key: Optional[Fraction] = None
    for firm in range(1, game.k + 1):
        profit, bundle = best_response(
            game.valuation(firm), outcome.payments, game.weights, unsafe_limits
        )
        current = outcome.profits[firm - 1]
        gain = profit - current
        if gain == 0:
            bundle = outcome.partition.mask(firm)
        report = DeviationReport(firm, bundle, gain)
        if normalized:
            if current > 0:
                report = DeviationReport(firm, bundle, gain, gain / current)
            else:
                report = DeviationReport(firm, bundle, gain, gain, unnormalizable=gain > 0)
        score = report.normalized if normalized else report.gain
        if key is None or score > key:
            best, key = report, score
    logger.debug("Deviation gap %s by firm %d", best.gain, best.firm)
    return best


@dataclass(frozen=True)
class Predicate:
    """A named verdict with witnesses for its failures"""

    passed: bool
    witnesses: Tuple[Any, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {"passed": self.passed, "witnesses": [list(w) for w in self.witnesses]}


@dataclass(frozen=True)
class OutcomeReport:
    individually_rational: Predicate
    envy_free: Predicate
    fair: Predicate
    marginal_bounds: Predicate
    gap: DeviationReport
    outcome: Outcome = field(repr=False, default=None)

    @property
    def passed(self) -> bool:
        return (
            self.individually_rational.passed
            and self.envy_free.passed
            and self.fair.passed
            and self.marginal_bounds.passed
            and self.gap.stable
        )

    def to_dict(self) -> Dict[str, Any]:
        document = self.outcome.to_dict() if self.outcome is not None else {}
        document["gap"] = format_rational(self.gap.gain)
        document["verdicts"] = {
            "pspe": self.passed,
            "individually_rational": self.individually_rational.to_dict(),
            "envy_free": self.envy_free.to_dict(),
            "fair": self.fair.to_dict(),
            "marginal_bounds": self.marginal_bounds.to_dict(),
            "deviation": self.gap.to_dict(),
        }
        return document


def _individually_rational(outcome: Outcome) -> Predicate:
    witnesses = [("worker", j) for j, x in enumerate(outcome.payments) if x < 0]
    witnesses += [("firm", i) for i, r in enumerate(outcome.profits, start=1) if r < 0]
    return Predicate(not witnesses, tuple(witnesses))


def _envy_free(game: CompetitionGame, outcome: Outcome) -> Predicate:
    """No firm prefers another firm's workforce at that firm's payments"""
    masks = outcome.partition.masks()
    witnesses = []
    for i in range(1, game.k + 1):
        for t in range(1, game.k + 1):
            if t == i:
                continue
            other = game.value(i, masks[t]) - outcome.cost(masks[t])
            if other > outcome.profits[i - 1]:
                witnesses.append((i, t))
    return Predicate(not witnesses, tuple(witnesses))


def _fair(game: CompetitionGame, outcome: Outcome, types: Sequence[Sequence[int]]) -> Predicate:
    witnesses = []
    for members in types:
        for j, jj in zip(members, members[1:]):
            if outcome.payments[j] != outcome.payments[jj]:
                witnesses.append((j, jj))
    return Predicate(not witnesses, tuple(witnesses))


def _marginal_bounds(game: CompetitionGame, outcome: Outcome) -> Predicate:
    """m_i(j, S_i - j) >= x_j >= m_i'(j, S_i') for the employer i and every other firm i'"""
    masks = outcome.partition.masks()
    assignment = outcome.partition.assignment
    witnesses = []
    for j, x in enumerate(outcome.payments):
        employer = assignment[j]
        if employer:
            rest = masks[employer] & ~(1 << j)
            upper = game.value(employer, masks[employer]) - game.value(employer, rest)
            if x > upper:
                witnesses.append(("upper", j, employer))
        for firm in range(1, game.k + 1):
            if firm == employer:
                continue
            lower = game.value(firm, masks[firm] | 1 << j) - game.value(firm, masks[firm])
            if x < lower:
                witnesses.append(("lower", j, firm))
    return Predicate(not witnesses, tuple(witnesses))


def check_outcome(
    game: CompetitionGame,
    outcome: Outcome,
    normalized: bool = False,
    unsafe_limits: bool = False,
) -> OutcomeReport:
    """Evaluate every outcome predicate independently"""
    types = worker_types(game)
    return OutcomeReport(
        individually_rational=_individually_rational(outcome),
        envy_free=_envy_free(game, outcome),
        fair=_fair(game, outcome, types),
        marginal_bounds=_marginal_bounds(game, outcome),
        gap=deviation_gap(game, outcome, normalized, unsafe_limits),
        outcome=outcome,
    )


def fairness_transform(
    game: CompetitionGame,
    outcome: Outcome,
    types: Optional[Sequence[Sequence[int]]] = None,
    check_stable: bool = False,
) -> Outcome:
    """Average payments within every (firm, worker type) cell.

    Profits are unchanged by construction; with `check_stable`, a stable input
    must stay stable. Same-type workers paid unequally at different firms are
    logged as a warning before averaging, since no PSPE pays them differently.
    """
    if types is None:
        types = worker_types(game)
    poachable = _unequal_across_firms(outcome, types)
    if poachable:
        logger.warning(
            "Outcome is not a PSPE before averaging: same-type workers paid unequally at different firms %s",
            poachable,
        )
    payments = list(outcome.payments)
    for members in types:
        cells: Dict[int, List[int]] = {}
        for j in members:
            cells.setdefault(outcome.partition.assignment[j], []).append(j)
        for cell in cells.values():
            average = sum((payments[j] for j in cell), Fraction(0)) / len(cell)
            for j in cell:
                payments[j] = average
    transformed = Outcome.build(game, outcome.partition, payments)
    if transformed.profits != outcome.profits:
        raise VerificationError("Averaging payments changed firm profits")
    if check_stable and deviation_gap(game, outcome).stable:
        if not deviation_gap(game, transformed).stable:
            raise VerificationError("Averaging payments broke stability")
    return transformed


def _unequal_across_firms(
    outcome: Outcome, types: Sequence[Sequence[int]]
) -> List[Tuple[int, int]]:
    assignment = outcome.partition.assignment
    pairs = []
    for members in types:
        for a, j in enumerate(members):
            for jj in members[a + 1 :]:
                if assignment[j] != assignment[jj] and outcome.payments[j] != outcome.payments[jj]:
                    pairs.append((j, jj))
    return pairs


def assert_stable(game: CompetitionGame, outcome: Outcome, what: str) -> None:
    report = deviation_gap(game, outcome)
    if not report.stable:
        raise VerificationError(
            f"{what}: firm {report.firm} gains {report.gain} with {members_of(report.bundle)}"
        )

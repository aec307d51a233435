"""The stability linear program LP(G, P).

For a fixed partition, a payment vector is stable when no firm gains by
dismissing some of its workers A and recruiting some outsiders B:

    v_i(S_i) - x(A) >= v_i((S_i - A) + B) - x(B)

Payments are expressed through a variable map: worker j is paid
`coefficient_j * y[variable_j]`. One variable per worker type gives the
collapsed system, one variable per worker the full one, and a single
variable with coefficient `w_j` gives proportional payments.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from marketeq.errors import GuardExceededError, InvalidGameError
from marketeq.game.analysis import best_response, worker_types
from marketeq.game.game import CompetitionGame, Outcome, Partition
from marketeq.game.subsets import members_of
from marketeq.lp.simplex import (
    INFEASIBLE,
    UNBOUNDED,
    LinearConstraint,
    RationalLP,
    irreducible_conflict,
    solve,
)
from marketeq.rational import format_rational

logger = logging.getLogger(__name__)

OBJECTIVES = ("feasible", "min-pay", "max-pay")

MAX_STABILITY_ROWS = 10**6
LAZY_ROW_THRESHOLD = 2000

FEASIBLE = "feasible"


@dataclass(frozen=True)
class RowTag:
    """Origin of a stability row: firm `firm` dismisses `dismissed` and recruits `recruited`"""

    firm: int
    dismissed: int
    recruited: int
    kind: str = "deviation"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "firm": self.firm,
            "dismissed": members_of(self.dismissed),
            "recruited": members_of(self.recruited),
            "kind": self.kind,
        }

    def __str__(self) -> str:
        if self.kind == "ir":
            return f"x{members_of(self.dismissed)[0]} >= 0"
        return f"firm {self.firm} -{members_of(self.dismissed)} +{members_of(self.recruited)}"


@dataclass(frozen=True)
class StabilityLP:
    """
    LP(G, P) in the variables of a payment map.

    Args:
        game (`CompetitionGame`):
            The game.
        partition (`Partition`):
            The partition to stabilize.
        variable_map (`Tuple[Tuple[int, Fraction], ...]`):
            Per worker, the variable index and coefficient of its payment.
        variable_names (`Tuple[str, ...]`):
            One name per variable.
        rows (`Tuple[Tuple[RowTag, LinearConstraint], ...]`):
            Deviation and individual-rationality rows, tightest bound per coefficient vector.
        objective (`str`):
            One of `feasible`, `min-pay`, `max-pay`.
    """

    game: CompetitionGame
    partition: Partition
    variable_map: Tuple[Tuple[int, Fraction], ...]
    variable_names: Tuple[str, ...]
    rows: Tuple[Tuple[RowTag, LinearConstraint], ...] = ()
    objective: str = "feasible"

    @property
    def num_variables(self) -> int:
        return len(self.variable_names)

    def payments(self, values: Sequence[Fraction]) -> Tuple[Fraction, ...]:
        return tuple(c * values[v] for v, c in self.variable_map)

    def objective_coefficients(self) -> Optional[Tuple[Fraction, ...]]:
        if self.objective == "feasible":
            return None
        sign = -1 if self.objective == "min-pay" else 1
        coefficients = [Fraction(0)] * self.num_variables
        for v, c in self.variable_map:
            coefficients[v] += sign * c
        return tuple(coefficients)

    def program(self) -> RationalLP:
        return RationalLP(
            self.num_variables,
            tuple(row for _, row in self.rows),
            self.objective_coefficients(),
            self.variable_names,
        )

    def to_listing(self) -> str:
        return self.program().to_listing()


@dataclass(frozen=True)
class StabilitySolution:
    """Verdict of LP(G, P); `conflict` lists rows that cannot hold together"""

    status: str
    lp: StabilityLP
    payments: Optional[Tuple[Fraction, ...]] = None
    conflict: Tuple[RowTag, ...] = ()
    lazy: bool = False
    rows_used: int = 0

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE

    def outcome(self) -> Optional[Outcome]:
        if self.payments is None:
            return None
        return Outcome.build(self.lp.game, self.lp.partition, self.payments)

    def to_dict(self) -> Dict[str, Any]:
        document: Dict[str, Any] = {
            "assignment": list(self.lp.partition.assignment),
            "status": self.status,
            "rows": self.rows_used,
        }
        if self.payments is not None:
            document["payments"] = [format_rational(x) for x in self.payments]
        if self.conflict:
            document["conflict"] = [tag.to_dict() for tag in self.conflict]
        return document


def variable_map(
    game: CompetitionGame, collapse: bool = True, proportional: bool = False
) -> Tuple[Tuple[Tuple[int, Fraction], ...], Tuple[str, ...], List[Tuple[int, ...]]]:
    """Payment map, variable names and the worker groups enumerated as units"""
    if proportional:
        groups = worker_types(game)
        return tuple((0, Fraction(w)) for w in game.weights), ("delta",), groups
    if collapse:
        groups = worker_types(game)
        mapping = [None] * game.n
        for t, members in enumerate(groups):
            for j in members:
                mapping[j] = (t, Fraction(1))
        names = tuple(f"x_type{t}" for t in range(len(groups)))
        return tuple(mapping), names, groups
    groups = [(j,) for j in range(game.n)]
    return tuple((j, Fraction(1)) for j in range(game.n)), tuple(f"x{j}" for j in range(game.n)), groups


def _row(
    game: CompetitionGame,
    partition: Partition,
    mapping: Sequence[Tuple[int, Fraction]],
    num_variables: int,
    firm: int,
    dismissed: int,
    recruited: int,
) -> LinearConstraint:
    """x(A) - x(B) <= v_i(S_i) - v_i((S_i - A) + B)"""
    coefficients = [Fraction(0)] * num_variables
    for j in members_of(dismissed):
        v, c = mapping[j]
        coefficients[v] += c
    for j in members_of(recruited):
        v, c = mapping[j]
        coefficients[v] -= c
    current = partition.mask(firm)
    bound = game.value(firm, current) - game.value(firm, (current & ~dismissed) | recruited)
    return LinearConstraint(tuple(coefficients), bound, "<=", RowTag(firm, dismissed, recruited))


def full_row_count(
    game: CompetitionGame, partition: Partition, groups: Sequence[Sequence[int]]
) -> int:
    total = 0
    for firm in range(1, game.k + 1):
        current = partition.mask(firm)
        count = 1
        for members in groups:
            inside = sum(1 for j in members if current >> j & 1)
            count *= (inside + 1) * (len(members) - inside + 1)
        total += count
    return total


def _deviations(partition: Partition, firm: int, groups: Sequence[Sequence[int]]):
    """All (A, B) pairs up to interchangeable workers within each group"""
    current = partition.mask(firm)
    options = []
    for members in groups:
        inside = [j for j in members if current >> j & 1]
        outside = [j for j in members if not current >> j & 1]
        choices = []
        for a in range(len(inside) + 1):
            dismissed = sum(1 << j for j in inside[:a])
            for b in range(len(outside) + 1):
                choices.append((dismissed, sum(1 << j for j in outside[:b])))
        options.append(choices)

    def combine(index: int, dismissed: int, recruited: int):
        if index == len(options):
            yield dismissed, recruited
            return
        for a, b in options[index]:
            yield from combine(index + 1, dismissed | a, recruited | b)

    yield from combine(0, 0, 0)


def _ir_rows(game: CompetitionGame, mapping, num_variables: int) -> List[Tuple[RowTag, LinearConstraint]]:
    rows = []
    seen = set()
    for j in range(game.n):
        v, c = mapping[j]
        if v in seen:
            continue
        seen.add(v)
        coefficients = [Fraction(0)] * num_variables
        coefficients[v] = -c
        tag = RowTag(0, 1 << j, 0, "ir")
        rows.append((tag, LinearConstraint(tuple(coefficients), 0, "<=", tag)))
    return rows


class _RowSet:
    """Rows keyed by coefficient vector, keeping the tightest bound"""

    def __init__(self):
        self.rows: Dict[Tuple[Fraction, ...], Tuple[RowTag, LinearConstraint]] = {}

    def add(self, tag: RowTag, row: LinearConstraint) -> bool:
        key = row.coefficients
        if not any(key):
            if row.bound >= 0:
                return False
        known = self.rows.get(key)
        if known is not None and known[1].bound <= row.bound:
            return False
        self.rows[key] = (tag, row)
        return True

    def ordered(self) -> Tuple[Tuple[RowTag, LinearConstraint], ...]:
        return tuple(self.rows.values())


def build_stability_lp(
    game: CompetitionGame,
    partition: Partition,
    collapse: bool = True,
    objective: str = "feasible",
    proportional: bool = False,
    unsafe_limits: bool = False,
) -> StabilityLP:
    """Full LP(G, P) with every deviation row"""
    if objective not in OBJECTIVES:
        raise InvalidGameError(f"Unknown objective {objective!r}, expected one of {OBJECTIVES}")
    partition.check_against(game)
    mapping, names, groups = variable_map(game, collapse, proportional)
    count = full_row_count(game, partition, groups)
    if count > MAX_STABILITY_ROWS and not unsafe_limits:
        raise GuardExceededError("stability LP rows", count, MAX_STABILITY_ROWS)
    rows = _RowSet()
    for tag, row in _ir_rows(game, mapping, len(names)):
        rows.add(tag, row)
    for firm in range(1, game.k + 1):
        for dismissed, recruited in _deviations(partition, firm, groups):
            row = _row(game, partition, mapping, len(names), firm, dismissed, recruited)
            rows.add(row.tag, row)
    logger.debug(
        "LP for %s: %d variables, %d rows from %d deviations",
        partition,
        len(names),
        len(rows.rows),
        count,
    )
    return StabilityLP(game, partition, mapping, names, rows.ordered(), objective)


def solve_stability_lp(lp: StabilityLP, certify: bool = True) -> StabilitySolution:
    """Solve exactly; infeasible systems come with a conflicting row subset"""
    program = lp.program()
    result = solve(program)
    if result.status == INFEASIBLE:
        conflict = result.conflict
        if certify:
            conflict = irreducible_conflict(program, conflict)
        tags = tuple(lp.rows[i][0] for i in conflict)
        return StabilitySolution(INFEASIBLE, lp, conflict=tags, rows_used=len(lp.rows))
    if result.status == UNBOUNDED:
        return StabilitySolution(UNBOUNDED, lp, rows_used=len(lp.rows))
    return StabilitySolution(FEASIBLE, lp, lp.payments(result.values), rows_used=len(lp.rows))


def _seed_rows(game: CompetitionGame, partition: Partition, mapping, num_variables: int) -> _RowSet:
    """Individual rationality, single dismissals, single recruitments and firm rationality"""
    rows = _RowSet()
    for tag, row in _ir_rows(game, mapping, num_variables):
        rows.add(tag, row)
    for firm in range(1, game.k + 1):
        current = partition.mask(firm)
        pairs = [(current, 0)]
        for j in range(game.n):
            pairs.append((1 << j, 0) if current >> j & 1 else (0, 1 << j))
        for dismissed, recruited in pairs:
            row = _row(game, partition, mapping, num_variables, firm, dismissed, recruited)
            rows.add(row.tag, row)
    return rows


def _separate(
    game: CompetitionGame, partition: Partition, payments: Sequence[Fraction], unsafe_limits: bool
) -> List[Tuple[int, int, int]]:
    """Per firm, its best deviation when it beats the current profit"""
    violated = []
    for firm in range(1, game.k + 1):
        current = partition.mask(firm)
        profit = game.value(firm, current) - sum(
            (payments[j] for j in members_of(current)), Fraction(0)
        )
        best, bundle = best_response(game.valuation(firm), payments, game.weights, unsafe_limits)
        if best > profit:
            violated.append((firm, current & ~bundle, bundle & ~current))
    return violated


def solve_lazily(
    game: CompetitionGame,
    partition: Partition,
    collapse: bool = True,
    objective: str = "feasible",
    proportional: bool = False,
    certify: bool = True,
    unsafe_limits: bool = False,
) -> StabilitySolution:
    """Cutting-plane solve of LP(G, P) with best responses as the separation oracle.

    A solution of the restricted system that no firm can improve on satisfies
    every deviation row, so verdicts agree with the full system.
    """
    if objective not in OBJECTIVES:
        raise InvalidGameError(f"Unknown objective {objective!r}, expected one of {OBJECTIVES}")
    partition.check_against(game)
    mapping, names, _ = variable_map(game, collapse, proportional)
    rows = _seed_rows(game, partition, mapping, len(names))
    current_objective = objective
    rounds = 0
    while True:
        rounds += 1
        lp = StabilityLP(game, partition, mapping, names, rows.ordered(), current_objective)
        solution = solve_stability_lp(lp, certify)
        if solution.status == INFEASIBLE:
            logger.debug("Lazy LP infeasible after %d rounds", rounds)
            return StabilitySolution(
                INFEASIBLE, lp, conflict=solution.conflict, lazy=True, rows_used=len(lp.rows)
            )
        if solution.status == UNBOUNDED:
            # settle feasibility first; a feasible system stays unbounded
            current_objective = "feasible"
            continue
        added = False
        for firm, dismissed, recruited in _separate(game, partition, solution.payments, unsafe_limits):
            row = _row(game, partition, mapping, len(names), firm, dismissed, recruited)
            added |= rows.add(row.tag, row)
        if not added:
            logger.debug("Lazy LP converged after %d rounds with %d rows", rounds, len(lp.rows))
            status = UNBOUNDED if current_objective != objective else FEASIBLE
            payments = None if status == UNBOUNDED else solution.payments
            return StabilitySolution(status, lp, payments, lazy=True, rows_used=len(lp.rows))


def solve_partition(
    game: CompetitionGame,
    partition: Partition,
    collapse: bool = True,
    objective: str = "feasible",
    proportional: bool = False,
    lazy: Optional[bool] = None,
    certify: bool = True,
    unsafe_limits: bool = False,
) -> StabilitySolution:
    """Decide LP(G, P), building the full system when it is small and solving lazily otherwise"""
    if lazy is None:
        _, _, groups = variable_map(game, collapse, proportional)
        lazy = full_row_count(game, partition, groups) > LAZY_ROW_THRESHOLD
    if lazy:
        return solve_lazily(
            game, partition, collapse, objective, proportional, certify, unsafe_limits
        )
    lp = build_stability_lp(game, partition, collapse, objective, proportional, unsafe_limits)
    return solve_stability_lp(lp, certify)

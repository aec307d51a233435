"""Exact rational linear programming.

Problems have non-negative variables and `<=` / `>=` rows. The solver keeps a
dictionary (basic variables expressed through the nonbasic ones), enters by
Bland's rule, and finds a first feasible dictionary with one auxiliary
variable when some right-hand side is negative.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

from marketeq.errors import InvalidGameError
from marketeq.rational import format_rational

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearConstraint:
    """
    `coefficients . y  <sense>  bound`, with an optional tag naming its origin.
    """

    coefficients: Tuple[Fraction, ...]
    bound: Fraction
    sense: str = "<="
    tag: Any = None

    def __post_init__(self):
        if self.sense not in ("<=", ">="):
            raise InvalidGameError(f"Unknown constraint sense {self.sense!r}")
        object.__setattr__(self, "coefficients", tuple(Fraction(a) for a in self.coefficients))
        object.__setattr__(self, "bound", Fraction(self.bound))

    def as_upper(self) -> Tuple[Tuple[Fraction, ...], Fraction]:
        if self.sense == "<=":
            return self.coefficients, self.bound
        return tuple(-a for a in self.coefficients), -self.bound

    def violation(self, values: Sequence[Fraction]) -> Fraction:
        coefficients, bound = self.as_upper()
        lhs = sum((a * y for a, y in zip(coefficients, values)), Fraction(0))
        return max(Fraction(0), lhs - bound)


@dataclass(frozen=True)
class RationalLP:
    """
    Linear program over non-negative rational variables.

    Args:
        num_variables (`int`):
            Number of variables `y_0..y_{m-1}`, all constrained to be `>= 0`.
        constraints (`Tuple[LinearConstraint, ...]`):
            The rows.
        objective (`Tuple[Fraction, ...]`, *optional*):
            Coefficients to maximize; `None` asks for any feasible point.
        variable_names (`Tuple[str, ...]`, *optional*):
            Names used by `to_listing`.
    """

    num_variables: int
    constraints: Tuple[LinearConstraint, ...]
    objective: Optional[Tuple[Fraction, ...]] = None
    variable_names: Optional[Tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for row in self.constraints:
            if len(row.coefficients) != self.num_variables:
                raise InvalidGameError(
                    f"Row has {len(row.coefficients)} coefficients, expected {self.num_variables}"
                )
        if self.objective is not None:
            object.__setattr__(self, "objective", tuple(Fraction(c) for c in self.objective))
            if len(self.objective) != self.num_variables:
                raise InvalidGameError("Objective length does not match the variables")

    def restricted(self, indices: Sequence[int], objective: bool = True) -> "RationalLP":
        return RationalLP(
            self.num_variables,
            tuple(self.constraints[i] for i in indices),
            self.objective if objective else None,
            self.variable_names,
        )

    def name(self, v: int) -> str:
        return self.variable_names[v] if self.variable_names else f"y{v}"

    def to_listing(self) -> str:
        """Plain-text listing for debugging"""

        def term_list(coefficients):
            terms = [
                f"{'-' if a < 0 else '+'} {format_rational(abs(a))} {self.name(v)}"
                for v, a in enumerate(coefficients)
                if a
            ]
            return " ".join(terms).lstrip("+ ") or "0"

        lines = []
        if self.objective is None:
            lines.append("find")
        else:
            lines.append(f"maximize {term_list(self.objective)}")
        lines.append("subject to")
        for i, row in enumerate(self.constraints):
            tag = f"  [{row.tag}]" if row.tag is not None else ""
            lines.append(
                f"  c{i}: {term_list(row.coefficients)} {row.sense} {format_rational(row.bound)}{tag}"
            )
        lines.append("  " + ", ".join(self.name(v) for v in range(self.num_variables)) + " >= 0")
        return "\n".join(lines)


@dataclass(frozen=True)
class LPResult:
    """
    Outcome of a solve. `conflict` lists row indices forming an infeasible subsystem.
    """

    status: str
    values: Optional[Tuple[Fraction, ...]] = None
    objective_value: Optional[Fraction] = None
    conflict: Tuple[int, ...] = ()
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


class _Dictionary:
    """x_B[r] + sum_s A[r][s] x_N[s] = b[r];  z = z0 + sum_s c[s] x_N[s]"""

    def __init__(self, rows: List[List[Fraction]], rhs: List[Fraction], num_variables: int):
        self.A = rows
        self.b = rhs
        self.basic = [num_variables + r for r in range(len(rows))]
        self.nonbasic = list(range(num_variables))
        self.c: List[Fraction] = [Fraction(0)] * num_variables
        self.z = Fraction(0)
        self.pivots = 0

    def pivot(self, r: int, s: int) -> None:
        row = self.A[r]
        inverse = 1 / row[s]
        new_row = [a * inverse for a in row]
        new_row[s] = inverse
        new_rhs = self.b[r] * inverse
        self.A[r] = new_row
        self.b[r] = new_rhs
        for i, other in enumerate(self.A):
            if i == r:
                continue
            f = other[s]
            if not f:
                continue
            other[s] = Fraction(0)
            self.A[i] = [a - f * p if p else a for a, p in zip(other, new_row)]
            self.b[i] -= f * new_rhs
        f = self.c[s]
        if f:
            self.c[s] = Fraction(0)
            self.c = [a - f * p if p else a for a, p in zip(self.c, new_row)]
            self.z += f * new_rhs
        self.basic[r], self.nonbasic[s] = self.nonbasic[s], self.basic[r]
        self.pivots += 1

    def optimize(self) -> str:
        """Primal simplex with Bland's rule from a feasible dictionary"""
        while True:
            entering = None
            for s, cs in enumerate(self.c):
                if cs > 0 and (entering is None or self.nonbasic[s] < self.nonbasic[entering]):
                    entering = s
            if entering is None:
                return OPTIMAL
            leaving = None
            best = None
            for r, row in enumerate(self.A):
                a = row[entering]
                if a > 0:
                    ratio = self.b[r] / a
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basic[r] < self.basic[leaving])
                    ):
                        leaving, best = r, ratio
            if leaving is None:
                return UNBOUNDED
            self.pivot(leaving, entering)

    def set_objective(self, objective: Sequence[Fraction]) -> None:
        """Express `objective . y` through the current nonbasic variables"""
        self.c = [Fraction(0)] * len(self.nonbasic)
        self.z = Fraction(0)
        position = {v: s for s, v in enumerate(self.nonbasic)}
        for r, v in enumerate(self.basic):
            if v < len(objective) and objective[v]:
                coefficient = objective[v]
                self.z += coefficient * self.b[r]
                for s, a in enumerate(self.A[r]):
                    if a:
                        self.c[s] -= coefficient * a
        for v, coefficient in enumerate(objective):
            if coefficient and v in position:
                self.c[position[v]] += coefficient

    def values(self, num_variables: int) -> Tuple[Fraction, ...]:
        values = [Fraction(0)] * num_variables
        for r, v in enumerate(self.basic):
            if v < num_variables:
                values[v] = self.b[r]
        return tuple(values)


def solve(lp: RationalLP) -> LPResult:
    """Solve `lp` exactly; infeasible results carry a Farkas-supported conflict set"""
    m = len(lp.constraints)
    n = lp.num_variables
    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    for constraint in lp.constraints:
        coefficients, bound = constraint.as_upper()
        rows.append(list(coefficients))
        rhs.append(bound)
    dictionary = _Dictionary(rows, rhs, n)

    if any(b < 0 for b in rhs):
        auxiliary = n + m
        for row in dictionary.A:
            row.append(Fraction(-1))
        dictionary.nonbasic.append(auxiliary)
        dictionary.c = [Fraction(0)] * n + [Fraction(-1)]
        start = min(range(m), key=lambda r: (dictionary.b[r], dictionary.basic[r]))
        dictionary.pivot(start, n)
        dictionary.optimize()
        if dictionary.z < 0:
            multipliers = {}
            for s, v in enumerate(dictionary.nonbasic):
                if n <= v < n + m and dictionary.c[s] < 0:
                    multipliers[v - n] = -dictionary.c[s]
            logger.debug(
                "Infeasible after %d pivots, %d rows in the Farkas support",
                dictionary.pivots,
                len(multipliers),
            )
            return LPResult(
                INFEASIBLE, conflict=tuple(sorted(multipliers)), pivots=dictionary.pivots
            )
        if auxiliary in dictionary.basic:
            r = dictionary.basic.index(auxiliary)
            s = min(
                (s for s, a in enumerate(dictionary.A[r]) if a and dictionary.nonbasic[s] != auxiliary),
                key=lambda s: dictionary.nonbasic[s],
                default=None,
            )
            if s is not None:
                dictionary.pivot(r, s)
            else:
                # row reads x_aux = 0 alone; drop it
                del dictionary.A[r]
                del dictionary.b[r]
                del dictionary.basic[r]
        s = dictionary.nonbasic.index(auxiliary)
        for row in dictionary.A:
            del row[s]
        del dictionary.nonbasic[s]

    if lp.objective is None:
        return LPResult(OPTIMAL, dictionary.values(n), Fraction(0), pivots=dictionary.pivots)

    dictionary.set_objective(lp.objective)
    status = dictionary.optimize()
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=dictionary.pivots)
    values = dictionary.values(n)
    logger.debug("Optimal after %d pivots, objective %s", dictionary.pivots, dictionary.z)
    return LPResult(OPTIMAL, values, dictionary.z, pivots=dictionary.pivots)


def irreducible_conflict(lp: RationalLP, candidates: Sequence[int]) -> Tuple[int, ...]:
    """Shrink an infeasible row subset by greedy deletion until every row is needed"""
    kept = list(candidates)
    for index in list(candidates):
        trial = [i for i in kept if i != index]
        if solve(lp.restricted(trial, objective=False)).status == INFEASIBLE:
            kept = trial
    return tuple(kept)

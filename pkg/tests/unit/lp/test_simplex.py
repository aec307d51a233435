from fractions import Fraction

import pytest

from marketeq.errors import InvalidGameError
from marketeq.lp.simplex import (
    INFEASIBLE,
    OPTIMAL,
    UNBOUNDED,
    LinearConstraint,
    RationalLP,
    irreducible_conflict,
    solve,
)


def row(coefficients, bound, sense="<=", tag=None):
    return LinearConstraint(tuple(coefficients), bound, sense, tag)


def test_two_variable_optimum():
    """Test that the optimum is the exact vertex (8/5, 6/5)"""
    lp = RationalLP(2, (row([1, 2], 4), row([3, 1], 6)), objective=(1, 1))
    result = solve(lp)
    assert result.status == OPTIMAL
    assert result.values == (Fraction(8, 5), Fraction(6, 5))
    assert result.objective_value == Fraction(14, 5)


def test_lower_bounded_rows_need_a_first_phase():
    """Test that >= rows with a minimizing objective reach the boundary"""
    lp = RationalLP(2, (row([1, 1], 2, ">="), row([1, 0], 5)), objective=(-1, -1))
    result = solve(lp)
    assert result.status == OPTIMAL
    assert result.objective_value == -2
    assert sum(result.values) == 2


def test_feasibility_only():
    """Test that a feasibility problem returns a point satisfying every row"""
    rows = (row([1, -1], -1), row([1, 1], 3), row([0, 1], 1, ">="))
    lp = RationalLP(2, rows)
    result = solve(lp)
    assert result.status == OPTIMAL
    assert all(r.violation(result.values) == 0 for r in rows)


def test_unbounded():
    """Test that an unbounded direction is reported"""
    lp = RationalLP(2, (row([1, -1], 1),), objective=(1, 0))
    assert solve(lp).status == UNBOUNDED


def test_infeasible_conflict_is_irreducible():
    """Test that the conflict set shrinks to the two clashing rows"""
    lp = RationalLP(2, (row([1, 0], 3, ">="), row([1, 0], 2), row([0, 1], 5)))
    result = solve(lp)
    assert result.status == INFEASIBLE
    assert not result.feasible
    assert {0, 1} <= set(result.conflict)
    assert irreducible_conflict(lp, result.conflict) == (0, 1)


def test_degenerate_rows_terminate():
    """Test that Bland's rule terminates on a degenerate vertex"""
    rows = (
        row([1, 1, 0], 1),
        row([1, 0, 1], 1),
        row([0, 1, 1], 1),
        row([1, 1, 1], Fraction(3, 2)),
    )
    result = solve(RationalLP(3, rows, objective=(1, 1, 1)))
    assert result.status == OPTIMAL
    assert result.objective_value == Fraction(3, 2)


def test_violation_and_listing():
    """Test that violations are measured on the <= form and rows are listed"""
    constraint = row([1, 2], 3, ">=", tag="demo")
    assert constraint.violation((1, 0)) == 2
    assert constraint.violation((1, 1)) == 0
    listing = RationalLP(2, (constraint,), variable_names=("a", "b")).to_listing()
    assert "1 a + 2 b >= 3  [demo]" in listing


def test_row_length_is_checked():
    """Test that rows must match the variable count"""
    with pytest.raises(InvalidGameError):
        RationalLP(3, (row([1, 2], 3),))

from itertools import product

import pytest

from marketeq.errors import PreconditionError
from marketeq.game.game import Partition
from marketeq.network.synergy import SynergyMatrix
from marketeq.partition.maxcut import max_cut_two_firm, synergy_matrix_of


def brute_force_cut(matrix):
    best = None
    for rest in product((1, 2), repeat=matrix.n - 1):
        assignment = (1,) + rest
        weight = matrix.cut_weight(Partition(assignment, 2).mask(1))
        if best is None or weight > best[0]:
            best = (weight, assignment)
    return best


def test_triangle_cut():
    """Test that {a, b} against {c} cuts weight 5"""
    matrix = SynergyMatrix.from_rows([[0, 1, 2], [1, 0, 3], [2, 3, 0]])
    partition = max_cut_two_firm(matrix)
    assert partition.assignment == (1, 1, 2)
    assert matrix.cut_weight(partition.mask(1)) == 5


def test_three_worker_synergy_cut(three_worker_synergy_game):
    """Test that B alone against A and C is the maximal cut"""
    matrix = synergy_matrix_of(three_worker_synergy_game)
    assert max_cut_two_firm(matrix).assignment == (1, 2, 1)


def test_ties_pick_smallest_assignment():
    """Test that a matrix without edges puts every worker on firm 1"""
    matrix = SynergyMatrix.from_rows([[1, 0, 0], [0, 2, 0], [0, 0, 3]])
    assert max_cut_two_firm(matrix).assignment == (1, 1, 1)


def test_single_worker():
    """Test that a lone worker joins firm 1"""
    assert max_cut_two_firm(SynergyMatrix.from_rows([[4]])).assignment == (1,)


def test_fractional_entries():
    """Test that rational weights are scaled without changing the cut"""
    matrix = SynergyMatrix.from_rows([[0, "1/2", "1/3"], ["1/2", 0, "1/6"], ["1/3", "1/6", 0]])
    weight, assignment = brute_force_cut(matrix)
    assert max_cut_two_firm(matrix).assignment == assignment


def test_matches_brute_force(rng):
    """Test that the vectorized search finds the smallest maximal cut"""
    for _ in range(50):
        n = int(rng.integers(2, 8))
        upper = rng.integers(0, 4, size=(n, n))
        rows = [[int(upper[min(j, jj), max(j, jj)]) for jj in range(n)] for j in range(n)]
        matrix = SynergyMatrix.from_rows(rows)
        weight, assignment = brute_force_cut(matrix)
        partition = max_cut_two_firm(matrix)
        assert partition.assignment == assignment
        assert matrix.cut_weight(partition.mask(1)) == weight


def test_needs_two_firm_synergy(triangle_game, four_workers_game):
    """Test that only symmetric two-firm synergy games expose a matrix"""
    with pytest.raises(PreconditionError):
        synergy_matrix_of(triangle_game)
    with pytest.raises(PreconditionError):
        synergy_matrix_of(four_workers_game)

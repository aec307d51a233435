import logging
import math
from typing import Optional

import numpy as np

from marketeq.errors import GuardExceededError, PreconditionError
from marketeq.game.game import CompetitionGame, Partition
from marketeq.game.valuations import SynergyValuation
from marketeq.network.synergy import SynergyMatrix

logger = logging.getLogger(__name__)

MAX_CUT_WORKERS = 24
CUT_CHUNK = 1 << 16


def _integer_off_diagonal(matrix: SynergyMatrix) -> np.ndarray:
    n = matrix.n
    scale = 1
    for j in range(n):
        for jj in range(n):
            if j != jj:
                scale = math.lcm(scale, matrix[j, jj].denominator)
    entries = [
        [0 if j == jj else int(matrix[j, jj] * scale) for jj in range(n)] for j in range(n)
    ]
    largest = max((max(row) for row in entries), default=0)
    dtype = np.int64 if largest * n * n < 2**62 else object
    return np.array(entries, dtype=dtype)


def max_cut_two_firm(matrix: SynergyMatrix, unsafe_limits: bool = False) -> Partition:
    """Two-firm partition of maximal cut weight; ties go to the smallest assignment vector.

    Worker 0 stays with firm 1 and the other `n - 1` sides are enumerated in
    vectorized chunks. With `s_j = +1` for firm 1 and `-1` for firm 2, the cut
    weight is `(sum(M) - s M s) / 4` over the off-diagonal part of `M`.
    """
    n = matrix.n
    if n > MAX_CUT_WORKERS and not unsafe_limits:
        raise GuardExceededError("max-cut workers", n, MAX_CUT_WORKERS)
    if n <= 1:
        return Partition((1,) * n, 2)
    weights = _integer_off_diagonal(matrix)
    total = weights.sum()
    rest = n - 1
    shifts = np.arange(rest, dtype=np.int64)
    # lexicographic key: worker 1 is the most significant position
    order = (1 << (rest - 1 - shifts)).astype(np.int64)

    best_cut = None
    best_key: Optional[int] = None
    for start in range(0, 1 << rest, CUT_CHUNK):
        masks = np.arange(start, min(start + CUT_CHUNK, 1 << rest), dtype=np.int64)
        bits = (masks[:, None] >> shifts) & 1
        sides = np.concatenate([np.ones((len(masks), 1), dtype=np.int64), 1 - 2 * bits], axis=1)
        if weights.dtype == object:
            sides = sides.astype(object)
        quadratic = ((sides @ weights) * sides).sum(axis=1)
        cuts = total - quadratic
        top = cuts.max()
        keys = bits @ order
        key = int(keys[cuts == top].min())
        if best_cut is None or top > best_cut or (top == best_cut and key < best_key):
            best_cut, best_key = top, key
    assignment = [1] + [1 + (best_key >> (rest - 1 - j) & 1) for j in range(rest)]
    partition = Partition(tuple(assignment), 2)
    logger.debug("Max cut %s weight %s", partition, matrix.cut_weight(partition.mask(1)))
    return partition


def synergy_matrix_of(game: CompetitionGame) -> SynergyMatrix:
    """The shared matrix of a symmetric two-firm synergy game"""
    if game.k != 2 or not game.is_symmetric:
        raise PreconditionError("Needs a symmetric two-firm game")
    valuation = game.valuations[0]
    if not isinstance(valuation, SynergyValuation):
        raise PreconditionError("Needs synergy valuations")
    return valuation.matrix

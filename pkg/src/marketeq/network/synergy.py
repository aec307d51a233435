"""Synergy matrices and their conversion to and from 2-sparse influence networks."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, List, Sequence, Tuple

from marketeq.errors import InvalidGameError, NotApplicableError, VerificationError
from marketeq.game.subsets import full_mask, members_of
from marketeq.network.influence import (
    InfluenceNetwork,
    influence_exact,
    reach_counts,
)
from marketeq.rational import format_rational, parse_rational

logger = logging.getLogger(__name__)

MAX_CHECKED_WORKERS = 12


@dataclass(frozen=True)
class SynergyMatrix:
    """
    Symmetric non-negative matrix; `M[j][j]` is the self-edge of worker `j`.

    Args:
        entries (`Tuple[Tuple[Fraction, ...], ...]`):
            Row-major entries.
    """

    entries: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        for j, row in enumerate(rows):
            if len(row) != n:
                raise InvalidGameError(f"Synergy matrix row {j} has {len(row)} entries, expected {n}")
            for jj, x in enumerate(row):
                if x < 0:
                    raise InvalidGameError(f"Synergy entry ({j}, {jj}) is negative")
                if rows[jj][j] != x:
                    raise InvalidGameError(f"Synergy matrix is not symmetric at ({j}, {jj})")

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, index: Tuple[int, int]) -> Fraction:
        j, jj = index
        return self.entries[j][jj]

    def row_total(self, j: int) -> Fraction:
        return sum(self.entries[j], Fraction(0))

    def value(self, mask: int) -> Fraction:
        """v_M(S): self-edges and in-set edges of S plus every edge leaving S"""
        inside = members_of(mask)
        total = sum((self.row_total(j) for j in inside), Fraction(0))
        for j, jj in combinations(inside, 2):
            total -= self.entries[j][jj]
        return total

    def cut_weight(self, mask: int) -> Fraction:
        """Total weight of edges between `mask` and its complement"""
        inside = members_of(mask)
        outside = [j for j in range(self.n) if not mask >> j & 1]
        return sum(
            (self.entries[j][jj] for j in inside for jj in outside), Fraction(0)
        )

    @property
    def is_integer(self) -> bool:
        return all(x.denominator == 1 for row in self.entries for x in row)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]]) -> "SynergyMatrix":
        return cls(tuple(tuple(parse_rational(x) for x in row) for row in rows))

    @classmethod
    def from_dict(cls, data: Any) -> "SynergyMatrix":
        try:
            rows = data["matrix"] if isinstance(data, dict) else data
            return cls.from_rows(rows)
        except (KeyError, TypeError) as e:
            raise InvalidGameError(f"Malformed synergy matrix document: {e!r}")

    def to_dict(self) -> Dict[str, Any]:
        return {"matrix": [[format_rational(x) for x in row] for row in self.entries]}


def network_to_synergy(
    network: InfluenceNetwork, check: bool = False, unsafe_limits: bool = False
) -> SynergyMatrix:
    """Synergy matrix with the same value as the influence of a 2-sparse network.

    Off-diagonal entries are the expected number of nodes activated by both
    workers, I(j) + I(j') - I({j, j'}); the diagonal holds what remains of I(j).
    """
    counts = reach_counts(network)
    crowded = [u for u, c in counts.items() if c > 2]
    if crowded:
        raise NotApplicableError(
            f"Network is not 2-sparse: node {crowded[0]} is reached by {counts[crowded[0]]} workers",
            witness=crowded[0],
        )
    n = network.n
    single = [influence_exact(network, [j], unsafe_limits) for j in range(n)]
    entries: List[List[Fraction]] = [[Fraction(0)] * n for _ in range(n)]
    for j, jj in combinations(range(n), 2):
        shared = single[j] + single[jj] - influence_exact(network, [j, jj], unsafe_limits)
        entries[j][jj] = entries[jj][j] = shared
    for j in range(n):
        entries[j][j] = single[j] - sum(
            (entries[j][jj] for jj in range(n) if jj != j), Fraction(0)
        )
    matrix = SynergyMatrix(tuple(tuple(row) for row in entries))
    if check:
        assert_matches_network(matrix, network, unsafe_limits)
    return matrix


def synergy_to_network(matrix: SynergyMatrix, check: bool = False) -> InfluenceNetwork:
    """Deterministic network with one fresh node per unit of every matrix entry.

    Workers occupy nodes `0..n-1`; entry (j, j') contributes `M(j, j')` nodes
    reached from both j and j' (from j alone on the diagonal).
    """
    if not matrix.is_integer:
        raise InvalidGameError("Synergy matrix must be integer; scale it before conversion")
    n = matrix.n
    edges = []
    node = n
    for j in range(n):
        for jj in range(j, n):
            for _ in range(int(matrix[j, jj])):
                edges.append((j, node, Fraction(1)))
                if jj != j:
                    edges.append((jj, node, Fraction(1)))
                node += 1
    network = InfluenceNetwork(nodes=node, workers=tuple(range(n)), edges=tuple(edges))
    logger.debug("Built network with %d nodes from a %d-worker synergy matrix", node, n)
    if check:
        assert_matches_network(matrix, network)
    return network


def assert_matches_network(
    matrix: SynergyMatrix, network: InfluenceNetwork, unsafe_limits: bool = False
) -> None:
    if matrix.n > MAX_CHECKED_WORKERS and not unsafe_limits:
        logger.debug("Skipping subset check for %d workers", matrix.n)
        return
    for mask in range(full_mask(matrix.n) + 1):
        expected = influence_exact(network, members_of(mask), unsafe_limits)
        if matrix.value(mask) != expected:
            raise VerificationError(
                f"v_M({members_of(mask)}) = {matrix.value(mask)} but influence is {expected}"
            )

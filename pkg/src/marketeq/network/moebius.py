import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from marketeq.errors import GuardExceededError
from marketeq.game.subsets import full_mask, members_of
from marketeq.game.valuations import Valuation, tabulate
from marketeq.rational import format_rational

logger = logging.getLogger(__name__)

MAX_MOEBIUS_WORKERS = 12


@dataclass(frozen=True)
class MoebiusTable:
    """
    Coefficients f(T) with v(S) = sum of f(T) over every T meeting S.

    An influence network assigns each node the set of workers reaching it,
    so influence values have non-negative coefficients; a negative one rules
    the valuation out.
    """

    n: int
    coefficients: Tuple[Fraction, ...]

    @property
    def negative(self) -> List[int]:
        return [mask for mask, f in enumerate(self.coefficients) if f < 0]

    @property
    def representable(self) -> bool:
        return not self.negative

    @property
    def witness(self) -> Optional[int]:
        negative = self.negative
        return negative[0] if negative else None

    def reconstruct(self, mask: int) -> Fraction:
        return sum(
            (f for t, f in enumerate(self.coefficients) if t & mask), Fraction(0)
        )

    def to_dict(self) -> Dict[str, Any]:
        document: Dict[str, Any] = {
            "coefficients": [
                [members_of(mask), format_rational(f)]
                for mask, f in enumerate(self.coefficients)
                if mask
            ],
            "representable": self.representable,
        }
        if self.witness is not None:
            document["witness"] = {
                "subset": members_of(self.witness),
                "value": format_rational(self.coefficients[self.witness]),
            }
        return document


def moebius_decomposition(
    valuation: Valuation, weights: Sequence[int], unsafe_limits: bool = False
) -> MoebiusTable:
    """Solve for f by inverting F(R) = v(N) - v(N - R) = sum of f(T) over nonempty T inside R"""
    n = len(weights)
    if n > MAX_MOEBIUS_WORKERS and not unsafe_limits:
        raise GuardExceededError("Moebius workers", n, MAX_MOEBIUS_WORKERS)
    table = tabulate(valuation, weights).table
    everyone = full_mask(n)
    coefficients = [table[everyone] - table[everyone & ~mask] for mask in range(1 << n)]
    for j in range(n):
        bit = 1 << j
        for mask in range(1 << n):
            if mask & bit:
                coefficients[mask] -= coefficients[mask ^ bit]
    result = MoebiusTable(n, tuple(coefficients))
    logger.debug("Moebius table: %d negative coefficients", len(result.negative))
    return result

"""Closed-form equilibrium constructions for weighted, homogeneous and synergy games."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from marketeq.equilibrium.stability import FEASIBLE, solve_partition
from marketeq.equilibrium.verify import assert_stable
from marketeq.errors import PreconditionError, VerificationError
from marketeq.game.analysis import is_concave_weighted
from marketeq.game.game import CompetitionGame, Outcome, Partition
from marketeq.game.valuations import WeightedValuation
from marketeq.partition.enumerate import enumerate_optimal_partitions
from marketeq.partition.maxcut import max_cut_two_firm, synergy_matrix_of
from marketeq.partition.weighted import almost_balanced_partition, min_gap_optimal_partition
from marketeq.rational import format_rational

logger = logging.getLogger(__name__)


def _proportional(game: CompetitionGame, partition: Partition, delta: Fraction) -> Outcome:
    return Outcome.build(game, partition, [delta * w for w in game.weights])


def subset_sums(weights: Sequence[int]) -> List[int]:
    """Every total weight some subset of `weights` reaches"""
    reachable = 1
    for w in weights:
        reachable |= reachable << w
    return [t for t in range(sum(weights) + 1) if reachable >> t & 1]


def stable_interval(
    game: CompetitionGame, totals: Sequence[int]
) -> Tuple[Fraction, Optional[Fraction]]:
    """Unit payments δ for which x = δ·w is stable given the firms' weight totals.

    A firm hiring total weight q_i gains by moving to any reachable total q
    unless (v_i(q) - v_i(q_i)) <= δ (q - q_i). The upper end is None when no
    constraint bounds δ from above.
    """
    low, high = Fraction(0), None
    for valuation, current in zip(game.valuations, totals):
        values = valuation.values
        for q in subset_sums(game.weights):
            if q > current:
                low = max(low, (values[q] - values[current]) / (q - current))
            elif q < current:
                slope = (values[current] - values[q]) / (current - q)
                high = slope if high is None else min(high, slope)
    return low, high


@dataclass(frozen=True)
class TwoFirmConstruction:
    """
    Quantities behind the proportional two-firm payments.

    Per firm: hired weight `q`, lightest member weight `light`, the slopes
    `y` (dismissing the lightest own member) and `z` (adding the other firm's
    lightest member), the step `d_star` and its slope `z_star`. `delta` is the
    unit payment used; `fallback` is set when the closed-form value fell
    outside the exact `interval` of stable unit payments and its lower end was
    used instead.
    """

    q: Tuple[int, int]
    light: Optional[Tuple[int, int]]
    y: Optional[Tuple[Fraction, Fraction]]
    z: Optional[Tuple[Fraction, Fraction]]
    d_star: Optional[Tuple[int, int]]
    z_star: Optional[Tuple[Fraction, Fraction]]
    delta: Fraction
    interval: Tuple[Fraction, Optional[Fraction]]
    fallback: bool = False

    def to_dict(self) -> Dict[str, Any]:
        def pair(values):
            if values is None:
                return None
            return [format_rational(v) if isinstance(v, Fraction) else v for v in values]

        low, high = self.interval
        return {
            "q": list(self.q),
            "light": pair(self.light),
            "y": pair(self.y),
            "z": pair(self.z),
            "d_star": pair(self.d_star),
            "z_star": pair(self.z_star),
            "delta": format_rational(self.delta),
            "interval": [format_rational(low), None if high is None else format_rational(high)],
            "fallback": self.fallback,
        }


def _require_concave_weighted(game: CompetitionGame) -> None:
    if not game.is_weighted:
        raise PreconditionError("Needs weighted valuations")
    for i, valuation in enumerate(game.valuations, start=1):
        if not is_concave_weighted(valuation):
            raise PreconditionError(f"Valuation of firm {i} is not concave")


def two_firm_weighted_pspe(
    game: CompetitionGame, unsafe_limits: bool = False
) -> Tuple[Outcome, TwoFirmConstruction]:
    """Proportional equilibrium of a two-firm concave weighted game.

    Uses the optimal partition with the smallest spread between the firms'
    totals. When a firm hires nobody, δ = v_i(w*)/w* with w* the lightest
    weight of all; otherwise δ = max(z*_1, z*_2).
    """
    if game.k != 2:
        raise PreconditionError(f"Needs exactly two firms, got {game.k}")
    _require_concave_weighted(game)
    partition, profile = min_gap_optimal_partition(game, unsafe_limits)
    q = profile.totals
    v = [valuation.values for valuation in game.valuations]
    interval = stable_interval(game, q)

    light = y = z = d_star = z_star = None
    if 0 in q:
        empty_firm = q.index(0)
        lightest = min(game.weights)
        delta = v[empty_firm][lightest] / lightest
    else:
        light = tuple(min(game.weights[j] for j in partition.members(i)) for i in (1, 2))
        y = tuple((v[i][q[i]] - v[i][q[i] - light[i]]) / light[i] for i in (0, 1))
        z = tuple((v[i][q[i] + light[1 - i]] - v[i][q[i]]) / light[1 - i] for i in (0, 1))
        steps = []
        for i in (0, 1):
            for d in range(1, light[1 - i] + 1):
                if (v[i][q[i] + d] - v[i][q[i]]) / d <= y[1 - i]:
                    steps.append(d)
                    break
            else:
                raise VerificationError(f"No step d for firm {i + 1} up to {light[1 - i]}")
        d_star = tuple(steps)
        z_star = tuple((v[i][q[i] + d_star[i]] - v[i][q[i]]) / d_star[i] for i in (0, 1))
        delta = max(z_star)

    low, high = interval
    if high is not None and low > high:
        raise VerificationError(f"Empty stable interval [{low}, {high}] on {partition}")
    fallback = delta < low or (high is not None and delta > high)
    if fallback:
        logger.warning(
            "Closed-form unit payment %s outside stable interval [%s, %s]; using %s",
            delta,
            low,
            high,
            low,
        )
        delta = low
    construction = TwoFirmConstruction(
        q=q,
        light=light,
        y=y,
        z=z,
        d_star=d_star,
        z_star=z_star,
        delta=delta,
        interval=interval,
        fallback=fallback,
    )
    outcome = _proportional(game, partition, delta)
    assert_stable(game, outcome, "two-firm proportional payments")
    return outcome, construction


def _require_symmetric_weighted(game: CompetitionGame) -> WeightedValuation:
    if not (game.is_weighted and game.is_symmetric):
        raise PreconditionError("Needs a symmetric weighted game")
    return game.valuations[0]


def balanced_pspe(game: CompetitionGame, unsafe_limits: bool = False) -> Optional[Outcome]:
    """Proportional payments δ = v(q+1) - v(q) on an almost-balanced partition, q = floor(W/k).

    Returns None when no almost-balanced partition exists.
    """
    valuation = _require_symmetric_weighted(game)
    found = almost_balanced_partition(game, unsafe_limits)
    if found is None:
        return None
    partition, _ = found
    q = game.total_weight // game.k
    delta = valuation.values[q + 1] - valuation.values[q]
    outcome = _proportional(game, partition, delta)
    assert_stable(game, outcome, "balanced proportional payments")
    return outcome


def heuristic_delta(game: CompetitionGame, partition: Partition) -> Fraction:
    """Slope of v between the lightest and heaviest firm totals"""
    valuation = _require_symmetric_weighted(game)
    totals = partition.weights(game)
    heavy, light = max(totals), min(totals)
    if heavy == light:
        q = game.total_weight // game.k
        return valuation.values[q + 1] - valuation.values[q]
    return (valuation.values[heavy] - valuation.values[light]) / (heavy - light)


def heuristic_payments(game: CompetitionGame, partition: Partition) -> Tuple[Fraction, ...]:
    delta = heuristic_delta(game, partition)
    return tuple(delta * w for w in game.weights)


def revenue_baseline(
    game: CompetitionGame, unsafe_limits: bool = False, partition: Optional[Partition] = None
) -> Fraction:
    """r0 = v(q) - δ q with q = floor(W/k) and the heuristic δ of `partition`.

    Without a partition, the optimal one with the smallest spread between firm
    totals is used.
    """
    valuation = _require_symmetric_weighted(game)
    if partition is None:
        partition, _ = min_gap_optimal_partition(game, unsafe_limits)
    q = game.total_weight // game.k
    return valuation.values[q] - heuristic_delta(game, partition) * q


@dataclass(frozen=True)
class UniformPayment:
    """Smallest uniform payment over the optimal size profiles and the marginal bounds it meets"""

    outcome: Outcome
    delta: Fraction
    lower: Fraction
    upper: Fraction

    @property
    def attains_lower(self) -> bool:
        return self.delta == self.lower

    @property
    def sizes(self) -> Tuple[int, ...]:
        partition = self.outcome.partition
        return tuple(len(partition.members(i)) for i in range(1, partition.k + 1))


def marginal_bounds(game: CompetitionGame, sizes: Sequence[int]) -> Tuple[Fraction, Fraction]:
    """max_i (v_i(n_i + 1) - v_i(n_i)) and min_i (v_i(n_i) - v_i(n_i - 1)) over firms with workers"""
    lower = Fraction(0)
    upper = None
    for valuation, size in zip(game.valuations, sizes):
        values = valuation.values
        if size + 1 < len(values):
            lower = max(lower, values[size + 1] - values[size])
        if size > 0:
            drop = values[size] - values[size - 1]
            upper = drop if upper is None else min(upper, drop)
    return lower, upper


def homogeneous_min_delta(
    game: CompetitionGame, unsafe_limits: bool = False
) -> Optional[UniformPayment]:
    """Least uniform payment that stabilizes some optimal partition of a unit-weight game"""
    if not game.is_homogeneous:
        raise PreconditionError("Needs a homogeneous game (weighted, all weights 1)")
    best: Optional[UniformPayment] = None
    for partition in enumerate_optimal_partitions(game, unsafe_limits):
        solution = solve_partition(
            game, partition, objective="min-pay",
            proportional=True,
            certify=False,
            unsafe_limits=unsafe_limits,
        )
        if solution.status != FEASIBLE:
            continue
        delta = solution.payments[0] if game.n else Fraction(0)
        sizes = tuple(len(partition.members(i)) for i in range(1, game.k + 1))
        lower, upper = marginal_bounds(game, sizes)
        if delta < lower or (upper is not None and delta > upper):
            raise VerificationError(f"Uniform payment {delta} outside [{lower}, {upper}]")
        if best is None or delta < best.delta:
            best = UniformPayment(solution.outcome(), delta, lower, upper)
    if best is not None:
        logger.info("Least uniform payment %s on sizes %s", best.delta, best.sizes)
    return best


def synergy_two_firm_pspe(game: CompetitionGame, unsafe_limits: bool = False) -> Outcome:
    """Max-cut partition paid x_j = (v({j}) + M(j, j)) / 2; both firms earn half the cut"""
    matrix = synergy_matrix_of(game)
    partition = max_cut_two_firm(matrix, unsafe_limits)
    payments = [(matrix.row_total(j) + matrix[j, j]) / 2 for j in range(matrix.n)]
    outcome = Outcome.build(game, partition, payments)
    half = matrix.cut_weight(partition.mask(1)) / 2
    if any(r != half for r in outcome.profits):
        raise VerificationError(f"Profits {outcome.profits} differ from half the cut {half}")
    assert_stable(game, outcome, "two-firm synergy payments")
    return outcome

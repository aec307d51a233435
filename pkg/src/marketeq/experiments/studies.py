"""Stability, existence and revenue studies over generated datasets."""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Sequence, Tuple

from tqdm import tqdm

from marketeq.equilibrium.constructions import heuristic_delta, revenue_baseline
from marketeq.equilibrium.search import find_pspe, payment_extremes
from marketeq.equilibrium.stability import solve_partition
from marketeq.equilibrium.verify import deviation_gap
from marketeq.errors import InvalidGameError, MarketEqError
from marketeq.experiments.generators import GeneratorSpec
from marketeq.experiments.records import STUDIES, ExperimentRecord, SurvivalPoint
from marketeq.game.game import CompetitionGame, Outcome
from marketeq.partition.weighted import almost_balanced_partition, optimal_partition_weighted
from marketeq.rational import format_decimal

logger = logging.getLogger(__name__)

SURVIVAL_THRESHOLDS = tuple(Fraction(i, 100) for i in range(0, 31))
NEAR_STABLE = Fraction(5, 100)


@dataclass(frozen=True)
class StudyConfig:
    """
    Runtime knobs shared by the studies.

    Args:
        workers (`int`):
            Threads processing instances; results do not depend on it.
        normalized (`bool`):
            Divide the deviation gain by the deviating firm's profit.
        strict (`bool`):
            Test every optimal partition instead of the canonical one only.
        progress (`bool`):
            Show a progress bar on stderr.
        unsafe_limits (`bool`):
            Bypass the enumeration guards.
    """

    workers: int = 1
    normalized: bool = True
    strict: bool = False
    progress: bool = False
    unsafe_limits: bool = False


@dataclass(frozen=True)
class ExperimentSpec:
    """A dataset and the studies to run on it"""

    dataset: GeneratorSpec
    studies: Tuple[str, ...] = ("stability", "census")
    strict: bool = False

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentSpec":
        if not isinstance(data, dict):
            raise InvalidGameError("Experiment spec must be a JSON object")
        unknown = sorted(set(data) - {"dataset", "studies", "strict", "description"})
        if unknown:
            raise InvalidGameError(f"Unknown experiment keys: {', '.join(unknown)}")
        if "dataset" not in data:
            raise InvalidGameError("Experiment spec needs a 'dataset'")
        studies = tuple(data.get("studies", ("stability", "census")))
        for study in studies:
            if study not in STUDIES:
                raise InvalidGameError(f"Unknown study {study!r}, expected one of {STUDIES}")
        return cls(
            dataset=GeneratorSpec.from_dict(data["dataset"]),
            studies=studies,
            strict=bool(data.get("strict", False)),
        )


def _base_record(game: CompetitionGame, study: str) -> ExperimentRecord:
    return ExperimentRecord(
        id=game.metadata.get("id", ""),
        study=study,
        n=game.n,
        types=len(set(game.weights)),
        weights=list(game.weights),
        total_weight=game.total_weight,
        digest=game.metadata.get("digest", ""),
        alpha=game.metadata.get("alpha"),
    )


def _run(
    games: Sequence[CompetitionGame],
    task: Callable[[CompetitionGame], ExperimentRecord],
    config: StudyConfig,
    label: str,
) -> List[ExperimentRecord]:
    with ThreadPoolExecutor(max_workers=max(1, config.workers)) as pool:
        records = list(
            tqdm(
                pool.map(task, games),
                total=len(games),
                desc=label,
                disable=not config.progress,
            )
        )
    return sorted(records, key=lambda r: r.sort_key)


def _has_pspe(game: CompetitionGame, partition, config: StudyConfig) -> bool:
    if config.strict:
        return find_pspe(game, certify=False, unsafe_limits=config.unsafe_limits).exists
    solution = solve_partition(game, partition, certify=False, unsafe_limits=config.unsafe_limits)
    return solution.feasible


def stability_record(game: CompetitionGame, config: StudyConfig) -> ExperimentRecord:
    """Heuristic proportional payments on the canonical optimal partition and their gap"""
    record = _base_record(game, "stability")
    try:
        partition, profile = optimal_partition_weighted(game, config.unsafe_limits)
        record.profile = list(profile.totals)
        record.d = profile.gap
        record.delta = heuristic_delta(game, partition)
        outcome = Outcome.build(game, partition, [record.delta * w for w in game.weights])
        report = deviation_gap(game, outcome, config.normalized, config.unsafe_limits)
        record.h = report.normalized if config.normalized else report.gain
        record.h_unnormalizable = report.unnormalizable
        record.balanced = almost_balanced_partition(game, config.unsafe_limits) is not None
        record.pspe = report.stable or _has_pspe(game, partition, config)
    except MarketEqError as e:
        logger.info("Instance %s skipped: %s", record.id, e)
        record.error = f"{type(e).__name__}: {e}"
    return record


def census_record(game: CompetitionGame, config: StudyConfig) -> ExperimentRecord:
    """Whether the canonical optimal partition (every optimal one when strict) can be stabilized"""
    record = _base_record(game, "census")
    try:
        partition, profile = optimal_partition_weighted(game, config.unsafe_limits)
        record.profile = list(profile.totals)
        record.d = profile.gap
        record.pspe = _has_pspe(game, partition, config)
    except MarketEqError as e:
        logger.info("Instance %s skipped: %s", record.id, e)
        record.error = f"{type(e).__name__}: {e}"
    return record


def revenue_record(game: CompetitionGame, config: StudyConfig) -> ExperimentRecord:
    """Least and greatest per-firm revenue over all stable outcomes, against the baseline r0.

    r0 takes its δ from the same canonical optimal partition as the other studies.
    """
    record = _base_record(game, "revenue")
    try:
        partition, profile = optimal_partition_weighted(game, config.unsafe_limits)
        record.profile = list(profile.totals)
        record.d = profile.gap
        record.r0 = revenue_baseline(game, config.unsafe_limits, partition)
        extremes = payment_extremes(game, unsafe_limits=config.unsafe_limits)
        if extremes is None:
            record.pspe = False
            record.error = "no-pspe"
            return record
        lowest_pay, highest_pay = extremes
        record.pspe = True
        record.r_max = (lowest_pay.welfare - lowest_pay.total_pay) / game.k
        if highest_pay is not None:
            record.r_min = (highest_pay.welfare - highest_pay.total_pay) / game.k
    except MarketEqError as e:
        logger.info("Instance %s skipped: %s", record.id, e)
        record.error = f"{type(e).__name__}: {e}"
    return record


def survival_curve(records: Sequence[ExperimentRecord]) -> List[SurvivalPoint]:
    """Fraction of instances with h at most each threshold, overall and per gap d"""
    usable = [r for r in records if r.error is None and r.h is not None]
    strata: Dict[str, List[ExperimentRecord]] = {"all": usable}
    for r in usable:
        strata.setdefault(str(r.d), []).append(r)
    points = []
    for name, members in strata.items():
        if not members:
            continue
        for threshold in SURVIVAL_THRESHOLDS:
            below = sum(1 for r in members if r.h <= threshold)
            points.append(SurvivalPoint(threshold, Fraction(below, len(members)), name))
    return sorted(points, key=lambda p: p.sort_key)


def _rate(count: int, total: int) -> Fraction:
    return Fraction(count, total) if total else Fraction(0)


@dataclass
class StudyResult:
    """Records of every study that ran, the survival curve and headline numbers"""

    records: Dict[str, List[ExperimentRecord]] = field(default_factory=dict)
    survival: List[SurvivalPoint] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)


def stability_study(games: Sequence[CompetitionGame], config: StudyConfig = StudyConfig()) -> StudyResult:
    records = _run(games, lambda g: stability_record(g, config), config, "stability")
    usable = [r for r in records if r.error is None]
    summary = {
        "instances": len(records),
        "errors": len(records) - len(usable),
        "h_zero_rate": _rate(sum(1 for r in usable if r.h == 0), len(usable)),
        "h_near_rate": _rate(sum(1 for r in usable if r.h <= NEAR_STABLE), len(usable)),
        "balanced_rate": _rate(sum(1 for r in usable if r.balanced), len(usable)),
    }
    logger.info("Stability study: %s", {k: str(v) for k, v in summary.items()})
    return StudyResult({"stability": records}, survival_curve(records), summary)


def existence_census(games: Sequence[CompetitionGame], config: StudyConfig = StudyConfig()) -> StudyResult:
    records = _run(games, lambda g: census_record(g, config), config, "census")
    usable = [r for r in records if r.error is None]
    found = sum(1 for r in usable if r.pspe)
    summary = {
        "instances": len(records),
        "errors": len(records) - len(usable),
        "pspe_found": found,
        "lp_infeasible": len(usable) - found,
        "infeasible_ids": [r.id for r in usable if not r.pspe],
        "stable_rate": _rate(found, len(usable)),
        "strict": config.strict,
    }
    logger.info("Census: %d stable, %d infeasible", found, len(usable) - found)
    return StudyResult({"census": records}, [], summary)


def revenue_study(games: Sequence[CompetitionGame], config: StudyConfig = StudyConfig()) -> StudyResult:
    records = _run(games, lambda g: revenue_record(g, config), config, "revenue")
    bounded = [r for r in records if r.r_min is not None and r.r_max is not None]
    inside = sum(1 for r in bounded if r.r_min <= r.r0 <= r.r_max)
    summary = {
        "instances": len(records),
        "with_pspe": sum(1 for r in records if r.pspe),
        "sandwich_rate": _rate(inside, len(bounded)),
    }
    logger.info("Revenue study: r0 inside the range for %d of %d", inside, len(bounded))
    return StudyResult({"revenue": records}, [], summary)


_RUNNERS = {
    "stability": stability_study,
    "census": existence_census,
    "revenue": revenue_study,
}


def run_experiment(
    spec: ExperimentSpec, games: Sequence[CompetitionGame], config: StudyConfig
) -> StudyResult:
    """Run every study the spec names and merge their results"""
    if spec.strict and not config.strict:
        config = StudyConfig(
            workers=config.workers,
            normalized=config.normalized,
            strict=True,
            progress=config.progress,
            unsafe_limits=config.unsafe_limits,
        )
    merged = StudyResult(summary={"dataset": spec.dataset.to_dict()})
    for study in spec.studies:
        result = _RUNNERS[study](games, config)
        merged.records.update(result.records)
        merged.survival.extend(result.survival)
        merged.summary[study] = result.summary
    return merged


def summary_document(summary: Dict[str, Any]) -> Dict[str, Any]:
    """JSON-ready copy of a summary, rationals as 12-digit decimals"""

    def convert(value):
        if isinstance(value, Fraction):
            return format_decimal(value)
        if isinstance(value, dict):
            return {k: convert(v) for k, v in value.items()}
        if isinstance(value, list):
            return [convert(v) for v in value]
        return value

    return convert(summary)

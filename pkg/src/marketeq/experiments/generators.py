"""Random weighted games for the empirical studies.

Every instance draws from its own Philox stream keyed by the master seed and
its index, so datasets are reproducible and can be extended or generated in
parallel without changing earlier instances.
"""

import hashlib
import json
import logging
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from marketeq.errors import InvalidGameError
from marketeq.game.game import CompetitionGame
from marketeq.game.valuations import WeightedValuation
from marketeq.rational import format_rational, parse_rational

logger = logging.getLogger(__name__)

DATASETS = ("D1", "D2", "D3")
VALUATION_MODES = ("random-concave", "random-unconstrained", "power")
DYADIC_BITS = 53
MAX_ATTEMPTS = 1000

_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "D1": dict(workers=(5, 14), types=(2, 4), weights=(2, 15), max_total=79),
    "D2": dict(workers=(4, 11), types=None, weights=(2, 15), max_total=79),
    "D3": dict(
        workers=(5, 14),
        types=(2, 4),
        weights=(2, 15),
        max_total=79,
        valuation="power",
        alphas=tuple(Fraction(i, 10) for i in range(1, 10)),
    ),
}


@dataclass(frozen=True)
class GeneratorSpec:
    """
    Parameters of a random dataset.

    Args:
        kind (`str`):
            `D1` draws a few worker types, each with its own weight; `D2` draws
            every worker's weight independently; `D3` takes the `D1` instances
            and replaces their valuations with `w ** alpha`.
        count (`int`):
            Number of instances.
        workers (`Tuple[int, int]`):
            Inclusive range of the worker count.
        types (`Tuple[int, int]`, *optional*):
            Inclusive range of the type count (`D1` and `D3` only).
        weights (`Tuple[int, int]`):
            Inclusive weight range, per type for `D1`/`D3` and per worker for `D2`.
        max_total (`int`):
            Largest admissible total weight; instances above it are redrawn.
        valuation (`str`):
            `random-concave`, `random-unconstrained` or `power`.
        alphas (`Tuple[Fraction, ...]`):
            Exponents for `power`; instance `i` uses `alphas[i % len(alphas)]`.
        firms (`int`):
            Number of identical firms.
        master_seed (`int`):
            Seed of the whole dataset.
    """

    kind: str = "D1"
    count: int = 0
    workers: Tuple[int, int] = (5, 14)
    types: Optional[Tuple[int, int]] = (2, 4)
    weights: Tuple[int, int] = (2, 15)
    max_total: int = 79
    valuation: str = "random-concave"
    alphas: Tuple[Fraction, ...] = ()
    firms: int = 3
    master_seed: int = 0

    def __post_init__(self):
        if self.kind not in DATASETS:
            raise InvalidGameError(f"Unknown dataset kind {self.kind!r}, expected one of {DATASETS}")
        if self.valuation not in VALUATION_MODES:
            raise InvalidGameError(f"Unknown valuation mode {self.valuation!r}")
        if self.count < 0:
            raise InvalidGameError(f"count must be non-negative, got {self.count}")
        ranges = [("workers", self.workers), ("weights", self.weights)]
        if self.kind != "D2":
            if self.types is None:
                raise InvalidGameError(f"{self.kind} needs a type range")
            ranges.append(("types", self.types))
        for name, (low, high) in ranges:
            if low < 1 or low > high:
                raise InvalidGameError(f"Empty or invalid {name} range [{low}, {high}]")
        if self.max_total < self.weights[1]:
            raise InvalidGameError(
                f"max_total {self.max_total} is below the largest weight {self.weights[1]}"
            )
        if self.valuation == "power":
            if not self.alphas:
                raise InvalidGameError("power valuations need a non-empty alpha list")
            if any(not 0 < a < 1 for a in self.alphas):
                raise InvalidGameError("alphas must lie strictly between 0 and 1")
        if self.firms < 2:
            raise InvalidGameError(f"Need at least 2 firms, got {self.firms}")

    @classmethod
    def for_kind(cls, kind: str, **overrides) -> "GeneratorSpec":
        """Spec with the dataset's default ranges"""
        if kind not in _DEFAULTS:
            raise InvalidGameError(f"Unknown dataset kind {kind!r}, expected one of {DATASETS}")
        return cls(kind=kind, **{**_DEFAULTS[kind], **overrides})

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GeneratorSpec":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidGameError(f"Unknown dataset keys: {', '.join(unknown)}")
        values = dict(data)
        for key in ("workers", "types", "weights"):
            if values.get(key) is not None:
                values[key] = tuple(values[key])
        if "alphas" in values:
            values["alphas"] = tuple(parse_rational(a) for a in values["alphas"])
        kind = values.pop("kind", "D1")
        return cls.for_kind(kind, **values)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "count": self.count,
            "workers": list(self.workers),
            "types": list(self.types) if self.types else None,
            "weights": list(self.weights),
            "max_total": self.max_total,
            "valuation": self.valuation,
            "alphas": [format_rational(a) for a in self.alphas],
            "firms": self.firms,
            "master_seed": self.master_seed,
        }


def instance_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(master_seed, spawn_key=(index,)))
    )


def gen_random_concave_value(
    total: int, rng: np.random.Generator, sort: bool = True
) -> WeightedValuation:
    """Increments uniform on [0, 1) as dyadic rationals; sorted decreasingly unless `sort` is False"""
    numerators = [int(k) for k in rng.integers(0, 1 << DYADIC_BITS, size=total, dtype=np.int64)]
    if sort:
        numerators.sort(reverse=True)
    return WeightedValuation.from_increments([Fraction(k, 1 << DYADIC_BITS) for k in numerators])


def _split(total: int, parts: int, rng: np.random.Generator) -> List[int]:
    """Random composition of `total` into `parts` positive counts"""
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, total), size=parts - 1, replace=False))
    bounds = [0] + cuts + [total]
    return [b - a for a, b in zip(bounds, bounds[1:])]


def _draw_weights(spec: GeneratorSpec, rng: np.random.Generator) -> List[int]:
    low, high = spec.weights
    for _ in range(MAX_ATTEMPTS):
        n = int(rng.integers(spec.workers[0], spec.workers[1] + 1))
        if spec.kind == "D2":
            weights = [int(w) for w in rng.integers(low, high + 1, size=n)]
        else:
            available = high - low + 1
            t_high = min(spec.types[1], n, available)
            if t_high < spec.types[0]:
                continue
            t = int(rng.integers(spec.types[0], t_high + 1))
            type_weights = sorted(int(w) for w in rng.choice(np.arange(low, high + 1), size=t, replace=False))
            counts = _split(n, t, rng) if t > 1 else [n]
            weights = [w for w, c in zip(type_weights, counts) for _ in range(c)]
        if sum(weights) <= spec.max_total:
            return weights
    raise InvalidGameError(
        f"No instance within max_total {spec.max_total} after {MAX_ATTEMPTS} attempts"
    )


def valuation_digest(valuation: WeightedValuation) -> str:
    payload = json.dumps(valuation.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(payload).hexdigest()[:16]


def generate_instance(spec: GeneratorSpec, index: int) -> CompetitionGame:
    rng = instance_rng(spec.master_seed, index)
    weights = _draw_weights(spec, rng)
    total = sum(weights)
    alpha = None
    if spec.valuation == "power":
        alpha = spec.alphas[index % len(spec.alphas)]
        valuation = WeightedValuation.power(alpha, total)
    else:
        valuation = gen_random_concave_value(total, rng, sort=spec.valuation == "random-concave")
    metadata = {
        "id": f"{spec.kind}-{index:05d}",
        "digest": valuation_digest(valuation),
        "types": len(set(weights)),
    }
    if alpha is not None:
        metadata["alpha"] = alpha
    return CompetitionGame.symmetric(weights, valuation, spec.firms, **metadata)


def generate_dataset(spec: GeneratorSpec) -> List[CompetitionGame]:
    """`spec.count` instances; `D3` shares its weights with `D1` under the same seed"""
    games = [generate_instance(spec, index) for index in range(spec.count)]
    logger.info("Generated %d %s instances (seed %d)", len(games), spec.kind, spec.master_seed)
    return games

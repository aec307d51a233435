from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from marketeq.errors import InvalidGameError
from marketeq.game.subsets import full_mask, mask_of, mask_weight, members_of
from marketeq.game.valuations import (
    Valuation,
    WeightedValuation,
    valuation_from_dict,
    workers_of,
)
from marketeq.rational import format_rational, parse_rational


@dataclass(frozen=True)
class CompetitionGame:
    """
    Workers with integer weights competed for by `k >= 2` firms.

    Args:
        weights (`Tuple[int, ...]`):
            Positive integer weight of every worker (all 1 for set-function games).
        valuations (`Tuple[Valuation, ...]`):
            One valuation per firm; firm `i` is `valuations[i - 1]`.
        names (`Tuple[str, ...]`, *optional*):
            Display labels of the workers.
        metadata (`Dict[str, Any]`, *optional*):
            Free-form annotations (description, rationalization, instance id).
    """

    weights: Tuple[int, ...]
    valuations: Tuple[Valuation, ...]
    names: Optional[Tuple[str, ...]] = field(default=None, compare=False)
    metadata: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        object.__setattr__(self, "valuations", tuple(self.valuations))
        if len(self.valuations) < 2:
            raise InvalidGameError(f"A game needs at least 2 firms, got {len(self.valuations)}")
        for j, w in enumerate(self.weights):
            if isinstance(w, bool) or not isinstance(w, int) or w <= 0:
                raise InvalidGameError(f"Weight of worker {j} must be a positive integer, got {w!r}")
        total = sum(self.weights)
        for i, valuation in enumerate(self.valuations, start=1):
            if isinstance(valuation, WeightedValuation):
                if valuation.total_weight != total:
                    raise InvalidGameError(
                        f"Firm {i} tabulates weights 0..{valuation.total_weight}, expected 0..{total}"
                    )
            elif workers_of(valuation) != self.n:
                raise InvalidGameError(
                    f"Firm {i} valuation covers {workers_of(valuation)} workers, game has {self.n}"
                )
        if self.names is not None and len(self.names) != self.n:
            raise InvalidGameError("One name per worker expected")
        if any(v.rationalized for v in self.valuations):
            self.metadata.setdefault("rationalized", True)
            self.metadata.setdefault("denominator", 10**6)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def k(self) -> int:
        return len(self.valuations)

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    @property
    def is_symmetric(self) -> bool:
        return all(v == self.valuations[0] for v in self.valuations[1:])

    @property
    def is_weighted(self) -> bool:
        return all(isinstance(v, WeightedValuation) for v in self.valuations)

    @property
    def is_homogeneous(self) -> bool:
        return self.is_weighted and all(w == 1 for w in self.weights)

    @property
    def all_workers(self) -> int:
        return full_mask(self.n)

    def valuation(self, firm: int) -> Valuation:
        return self.valuations[firm - 1]

    def value(self, firm: int, mask: int) -> Fraction:
        """v_i(S) for firm `firm` in 1..k"""
        return self.valuations[firm - 1].value(mask, self.weights)

    def weight(self, mask: int) -> int:
        return mask_weight(mask, self.weights)

    def welfare(self, partition: "Partition") -> Fraction:
        return sum(
            (self.value(i, partition.mask(i)) for i in range(1, self.k + 1)), Fraction(0)
        )

    def firm_classes(self) -> List[Tuple[int, ...]]:
        """Groups of firms with equal valuations, in order of first appearance"""
        classes: List[List[int]] = []
        for i in range(1, self.k + 1):
            for group in classes:
                if self.valuation(group[0]) == self.valuation(i):
                    group.append(i)
                    break
            else:
                classes.append([i])
        return [tuple(group) for group in classes]

    def label(self, j: int) -> str:
        return self.names[j] if self.names else str(j)

    def with_valuations(self, valuations: Sequence[Valuation], **metadata) -> "CompetitionGame":
        return CompetitionGame(
            weights=self.weights,
            valuations=tuple(valuations),
            names=self.names,
            metadata={**self.metadata, **metadata},
        )

    @classmethod
    def symmetric(
        cls, weights: Sequence[int], valuation: Valuation, k: int, **metadata
    ) -> "CompetitionGame":
        return cls(weights=tuple(weights), valuations=(valuation,) * k, metadata=dict(metadata))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CompetitionGame":
        try:
            firms = data["firms"]
        except (KeyError, TypeError):
            raise InvalidGameError("Game document needs a 'firms' list")
        weights = data.get("weights")
        if weights is None:
            weights = [1] * _implied_workers(firms)
        valuations: List[Valuation] = []
        for entry in firms:
            valuation = valuation_from_dict(entry, weights)
            valuations.extend([valuation] * int(entry.get("copies", 1)))
        metadata = {key: data[key] for key in ("description", "metadata") if key in data}
        names = tuple(data["names"]) if data.get("names") else None
        return cls(weights=tuple(weights), valuations=tuple(valuations), names=names, metadata=metadata)

    def to_dict(self) -> Dict[str, Any]:
        firms: List[Dict[str, Any]] = []
        for valuation in self.valuations:
            payload = valuation.to_dict()
            if firms and firms[-1]["payload"] == payload:
                firms[-1]["copies"] += 1
            else:
                firms.append({"payload": payload, "copies": 1})
        document: Dict[str, Any] = {"weights": list(self.weights)}
        if self.names:
            document["names"] = list(self.names)
        if "description" in self.metadata:
            document["description"] = self.metadata["description"]
        document["firms"] = [
            {**f["payload"], "copies": f["copies"]} if f["copies"] > 1 else f["payload"]
            for f in firms
        ]
        return document


def _implied_workers(firms: Sequence[Dict[str, Any]]) -> int:
    try:
        for entry in firms:
            if entry.get("kind") == "synergy":
                return len(entry["matrix"])
            if entry.get("kind") == "influence":
                return len(entry["network"]["workers"])
    except (KeyError, TypeError, AttributeError) as e:
        raise InvalidGameError(f"Cannot infer the number of workers from the firms: {e!r}")
    raise InvalidGameError("Game document needs 'weights' unless a firm is synergy or influence")


@dataclass(frozen=True)
class Partition:
    """
    Assignment of every worker to a firm `1..k`, or to the idle pool `0`.
    """

    assignment: Tuple[int, ...]
    k: int

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(a) for a in self.assignment))
        for j, a in enumerate(self.assignment):
            if not 0 <= a <= self.k:
                raise InvalidGameError(f"Worker {j} assigned to {a}, expected 0..{self.k}")

    @property
    def n(self) -> int:
        return len(self.assignment)

    def mask(self, firm: int) -> int:
        return mask_of(j for j, a in enumerate(self.assignment) if a == firm)

    def members(self, firm: int) -> List[int]:
        return [j for j, a in enumerate(self.assignment) if a == firm]

    def masks(self) -> List[int]:
        """Masks of S_0, S_1, ..., S_k"""
        masks = [0] * (self.k + 1)
        for j, a in enumerate(self.assignment):
            masks[a] |= 1 << j
        return masks

    @property
    def idle(self) -> List[int]:
        return self.members(0)

    def weights(self, game: CompetitionGame) -> Tuple[int, ...]:
        """Total hired weight of every firm"""
        return tuple(game.weight(self.mask(i)) for i in range(1, self.k + 1))

    @classmethod
    def from_sets(cls, sets: Sequence[Iterable[int]], n: int) -> "Partition":
        """Build from `(S_1, ..., S_k)`; unlisted workers are idle"""
        assignment = [0] * n
        for i, members in enumerate(sets, start=1):
            for j in members:
                if assignment[j]:
                    raise InvalidGameError(f"Worker {j} appears in two firms")
                assignment[j] = i
        return cls(tuple(assignment), len(sets))

    def check_against(self, game: CompetitionGame) -> None:
        if self.n != game.n or self.k != game.k:
            raise InvalidGameError(
                f"Partition has {self.n} workers and {self.k} firms, game has {game.n} and {game.k}"
            )

    def __str__(self) -> str:
        parts = ["{" + ",".join(map(str, self.members(i))) + "}" for i in range(1, self.k + 1)]
        return "(" + ", ".join(parts) + ")"


@dataclass(frozen=True)
class Outcome:
    """
    Partition together with the realized payment of every worker.

    `profits[i - 1]` is r_i = v_i(S_i) - x(S_i); build outcomes with `Outcome.build`.
    """

    partition: Partition
    payments: Tuple[Fraction, ...]
    profits: Tuple[Fraction, ...]
    welfare: Fraction

    @classmethod
    def build(
        cls, game: CompetitionGame, partition: Partition, payments: Sequence[Any]
    ) -> "Outcome":
        partition.check_against(game)
        payments = tuple(Fraction(x) for x in payments)
        if len(payments) != game.n:
            raise InvalidGameError(f"Expected {game.n} payments, got {len(payments)}")
        profits = []
        for i in range(1, game.k + 1):
            mask = partition.mask(i)
            cost = sum((payments[j] for j in members_of(mask)), Fraction(0))
            profits.append(game.value(i, mask) - cost)
        return cls(partition, payments, tuple(profits), game.welfare(partition))

    @property
    def total_pay(self) -> Fraction:
        return sum(self.payments, Fraction(0))

    def cost(self, mask: int) -> Fraction:
        return sum((self.payments[j] for j in members_of(mask)), Fraction(0))

    @classmethod
    def from_dict(cls, game: CompetitionGame, data: Dict[str, Any]) -> "Outcome":
        try:
            assignment = tuple(data["assignment"])
            payments = [parse_rational(x) for x in data["payments"]]
        except (KeyError, TypeError):
            raise InvalidGameError("Outcome document needs 'assignment' and 'payments'")
        return cls.build(game, Partition(assignment, game.k), payments)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "assignment": list(self.partition.assignment),
            "payments": [format_rational(x) for x in self.payments],
            "profits": [format_rational(r) for r in self.profits],
            "welfare": format_rational(self.welfare),
        }

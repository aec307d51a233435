import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Any, Callable, ClassVar, Dict, Optional, Sequence, Tuple

from marketeq.errors import GuardExceededError, InvalidGameError, MarketEqError, PreconditionError
from marketeq.game.subsets import full_mask, mask_of, mask_weight, members_of, popcount
from marketeq.rational import format_rational, parse_rational, rationalize

if TYPE_CHECKING:
    from marketeq.network.influence import InfluenceNetwork
    from marketeq.network.synergy import SynergyMatrix

MAX_EXPLICIT_WORKERS = 20


@dataclass(frozen=True)
class Valuation(ABC):
    """
    Base class for firm value functions over worker subsets
    """

    kind: ClassVar[str]

    @abstractmethod
    def value(self, mask: int, weights: Sequence[int]) -> Fraction:
        """Return v(S) for the subset encoded by `mask`"""
        pass

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """Return the JSON payload of the valuation"""
        pass

    @property
    def rationalized(self) -> bool:
        return False


@dataclass(frozen=True)
class WeightedValuation(Valuation):
    """
    Value depends on total hired weight only: `values[t]` is v(t) for `t = 0..W`.
    """

    kind: ClassVar[str] = "weighted"
    values: Tuple[Fraction, ...] = ()
    is_rationalized: bool = field(default=False, compare=False)

    def __post_init__(self):
        values = tuple(Fraction(v) for v in self.values)
        object.__setattr__(self, "values", values)
        if not values:
            raise InvalidGameError("Weighted valuation needs at least v(0)")
        if values[0] != 0:
            raise InvalidGameError(f"v(0) must be 0, got {values[0]}")
        for t in range(1, len(values)):
            if values[t] < values[t - 1]:
                raise InvalidGameError(f"Weighted valuation decreases at total weight {t}")

    @property
    def total_weight(self) -> int:
        return len(self.values) - 1

    @property
    def rationalized(self) -> bool:
        return self.is_rationalized

    def at(self, total: int) -> Fraction:
        if not 0 <= total < len(self.values):
            raise InvalidGameError(f"Total weight {total} outside 0..{self.total_weight}")
        return self.values[total]

    def increments(self) -> Tuple[Fraction, ...]:
        return tuple(self.values[t] - self.values[t - 1] for t in range(1, len(self.values)))

    def value(self, mask: int, weights: Sequence[int]) -> Fraction:
        return self.at(mask_weight(mask, weights))

    @classmethod
    def from_increments(cls, increments: Sequence[Fraction]) -> "WeightedValuation":
        values = [Fraction(0)]
        for d in increments:
            values.append(values[-1] + Fraction(d))
        return cls(tuple(values))

    @classmethod
    def capped(cls, cap: Fraction, total: int) -> "WeightedValuation":
        """v(t) = min(t, cap)"""
        cap = Fraction(cap)
        return cls(tuple(min(Fraction(t), cap) for t in range(total + 1)))

    @classmethod
    def power(cls, alpha: Fraction, total: int) -> "WeightedValuation":
        """v(t) = t**alpha, rationalized when irrational"""
        alpha = Fraction(alpha)
        values = []
        exact = True
        for t in range(total + 1):
            if alpha.denominator == 1:
                values.append(Fraction(t) ** alpha.numerator)
            else:
                values.append(rationalize(math.pow(t, float(alpha))))
                exact = False
        return cls(tuple(values), is_rationalized=not exact)

    @classmethod
    def from_dict(cls, data: Dict[str, Any], weights: Sequence[int]) -> "WeightedValuation":
        total = sum(weights)
        if "values" in data:
            raw = data["values"]
            valuation = cls(
                tuple(parse_rational(v) for v in raw),
                is_rationalized=any(isinstance(v, float) for v in raw),
            )
        elif "cap" in data:
            valuation = cls.capped(parse_rational(data["cap"]), total)
        elif "power" in data:
            valuation = cls.power(parse_rational(data["power"]), total)
        else:
            raise InvalidGameError("Weighted valuation needs one of 'values', 'cap', 'power'")
        return valuation

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "values": [format_rational(v) for v in self.values]}


@dataclass(frozen=True)
class ExplicitValuation(Valuation):
    """
    Tabulated set function: `table[mask]` is v(S) for every subset of `n` workers.
    """

    kind: ClassVar[str] = "explicit"
    n: int = 0
    table: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.n > MAX_EXPLICIT_WORKERS:
            raise GuardExceededError("explicit workers", self.n, MAX_EXPLICIT_WORKERS)
        table = tuple(Fraction(v) for v in self.table)
        object.__setattr__(self, "table", table)
        if len(table) != 1 << self.n:
            raise InvalidGameError(
                f"Explicit table has {len(table)} entries, expected {1 << self.n}"
            )
        if table[0] != 0:
            raise InvalidGameError(f"v(empty set) must be 0, got {table[0]}")
        for mask in range(1, len(table)):
            j = 0
            rest = mask
            while rest:
                if rest & 1 and table[mask ^ (1 << j)] > table[mask]:
                    raise InvalidGameError(
                        f"Explicit valuation is not monotone at {members_of(mask)}"
                    )
                rest >>= 1
                j += 1

    def value(self, mask: int, weights: Sequence[int] = ()) -> Fraction:
        if mask >> self.n:
            raise InvalidGameError(f"Subset {members_of(mask)} outside {self.n} workers")
        return self.table[mask]

    @classmethod
    def from_function(cls, n: int, f: Callable[[int], Any]) -> "ExplicitValuation":
        """Tabulate `f(mask)` over all subsets"""
        if n > MAX_EXPLICIT_WORKERS:
            raise GuardExceededError("explicit workers", n, MAX_EXPLICIT_WORKERS)
        return cls(n=n, table=tuple(Fraction(f(mask)) for mask in range(1 << n)))

    @classmethod
    def by_size(cls, n: int, values: Sequence[Any]) -> "ExplicitValuation":
        """Cardinality-based valuation, `values[s]` for every subset of size s"""
        values = [parse_rational(v) for v in values]
        return cls.from_function(n, lambda mask: values[popcount(mask)])

    @classmethod
    def from_dict(cls, data: Dict[str, Any], n: int) -> "ExplicitValuation":
        if "by_size" in data:
            return cls.by_size(n, data["by_size"])
        if "table" not in data:
            raise InvalidGameError("Explicit valuation needs 'table' or 'by_size'")
        entries: Dict[int, Fraction] = {0: Fraction(0)}
        for subset, v in data["table"]:
            entries[mask_of(subset)] = parse_rational(v)
        missing = [m for m in range(1 << n) if m not in entries]
        if missing:
            raise InvalidGameError(
                f"Explicit table misses {len(missing)} subsets, e.g. {members_of(missing[0])}"
            )
        return cls(n=n, table=tuple(entries[m] for m in range(1 << n)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "table": [
                [members_of(mask), format_rational(v)]
                for mask, v in enumerate(self.table)
                if mask
            ],
        }


@dataclass(frozen=True)
class SynergyValuation(Valuation):
    """
    Value of a synergy graph, v_M(S).
    """

    kind: ClassVar[str] = "synergy"
    matrix: "SynergyMatrix" = None

    def value(self, mask: int, weights: Sequence[int] = ()) -> Fraction:
        if mask >> self.matrix.n:
            raise InvalidGameError(f"Subset {members_of(mask)} outside {self.matrix.n} workers")
        return self.matrix.value(mask)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SynergyValuation":
        from marketeq.network.synergy import SynergyMatrix

        return cls(matrix=SynergyMatrix.from_rows(data["matrix"]))

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, **self.matrix.to_dict()}


@dataclass(frozen=True)
class InfluenceValuation(Valuation):
    """
    Expected independent-cascade influence of the hired workers.

    Only `mode="exact"` can be evaluated as a valuation; sampled estimates go
    through `influence_monte_carlo`.
    """

    kind: ClassVar[str] = "influence"
    network: "InfluenceNetwork" = None
    mode: str = "exact"

    def __post_init__(self):
        if self.mode not in ("exact", "monte-carlo"):
            raise InvalidGameError(f"Unknown influence mode {self.mode!r}")

    def value(self, mask: int, weights: Sequence[int] = ()) -> Fraction:
        from marketeq.network.influence import influence_exact

        if self.mode != "exact":
            raise PreconditionError("Monte-Carlo influence cannot be evaluated exactly")
        if mask >> self.network.n:
            raise InvalidGameError(f"Subset {members_of(mask)} outside {self.network.n} workers")
        return influence_exact(self.network, members_of(mask))

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "InfluenceValuation":
        from marketeq.network.influence import InfluenceNetwork

        return cls(
            network=InfluenceNetwork.from_dict(data["network"]),
            mode=data.get("mode", "exact"),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "network": self.network.to_dict(), "mode": self.mode}


def evaluate(valuation: Valuation, subset, weights: Sequence[int]) -> Fraction:
    """v(S) for an iterable of worker indices"""
    workers = list(subset)
    for j in workers:
        if not 0 <= j < len(weights):
            raise InvalidGameError(f"Worker {j} outside 0..{len(weights) - 1}")
    return valuation.value(mask_of(workers), weights)


def tabulate(valuation: Valuation, weights: Sequence[int]) -> ExplicitValuation:
    """Explicit table of any valuation over `len(weights)` workers"""
    if isinstance(valuation, ExplicitValuation):
        return valuation
    n = len(weights)
    return ExplicitValuation.from_function(n, lambda mask: valuation.value(mask, weights))


def workers_of(valuation: Valuation) -> Optional[int]:
    """Worker count fixed by the valuation itself, if any"""
    if isinstance(valuation, ExplicitValuation):
        return valuation.n
    if isinstance(valuation, SynergyValuation):
        return valuation.matrix.n
    if isinstance(valuation, InfluenceValuation):
        return valuation.network.n
    return None


def valuation_from_dict(data: Dict[str, Any], weights: Sequence[int]) -> Valuation:
    """Build a valuation from its JSON payload, dispatching on `kind`"""
    if not isinstance(data, dict):
        raise InvalidGameError(f"Valuation must be an object, got {type(data).__name__}")
    kind = data.get("kind")
    builders: Dict[str, Callable[[], Valuation]] = {
        "weighted": lambda: WeightedValuation.from_dict(data, weights),
        "explicit": lambda: ExplicitValuation.from_dict(data, len(weights)),
        "synergy": lambda: SynergyValuation.from_dict(data),
        "influence": lambda: InfluenceValuation.from_dict(data),
    }
    if not isinstance(kind, str) or kind not in builders:
        raise InvalidGameError(f"Unknown valuation kind {kind!r}")
    try:
        return builders[kind]()
    except MarketEqError:
        raise
    except (KeyError, TypeError, IndexError, ValueError) as e:
        raise InvalidGameError(f"Malformed {kind} valuation: {e!r}")

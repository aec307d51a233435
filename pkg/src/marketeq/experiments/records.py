from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, List, Optional, Tuple

from marketeq.base import Record
from marketeq.rational import format_rational

STUDIES = ("stability", "census", "revenue")

_CSV_COLUMNS = {
    "stability": ["id", "n", "types", "W", "d", "delta", "h", "pspe"],
    "census": ["id", "n", "types", "W", "d", "pspe"],
    "revenue": ["id", "alpha_or_rand", "r_min", "r_max", "r0"],
}
_EXACT_COLUMNS = {
    "stability": ["delta", "h"],
    "census": [],
    "revenue": ["r_min", "r_max", "r0"],
}


@dataclass
class ExperimentRecord(Record):
    """
    Per-instance result of one study.

    `h` is the (normalized, when requested) deviation gap of the heuristic
    payments on the canonical optimal partition; `pspe` is whether stable
    payments were found; `error` names a guard or precondition that stopped
    the instance.
    """

    id: str = ""
    study: str = "stability"
    n: int = 0
    types: int = 0
    weights: List[int] = field(default_factory=list)
    total_weight: int = 0
    digest: str = ""
    profile: List[int] = field(default_factory=list)
    d: Optional[int] = None
    delta: Optional[Fraction] = None
    h: Optional[Fraction] = None
    h_unnormalizable: bool = False
    pspe: Optional[bool] = None
    balanced: Optional[bool] = None
    alpha: Optional[Fraction] = None
    r_min: Optional[Fraction] = None
    r_max: Optional[Fraction] = None
    r0: Optional[Fraction] = None
    error: Optional[str] = None

    @property
    def json_fields(self) -> List[str]:
        return ["weights", "profile"]

    @property
    def table_columns(self) -> List[str]:
        return [
            "id",
            "study",
            "n",
            "types",
            "weights",
            "total_weight",
            "digest",
            "profile",
            "d",
            "delta",
            "h",
            "h_unnormalizable",
            "pspe",
            "balanced",
            "alpha",
            "r_min",
            "r_max",
            "r0",
            "error",
        ]

    @property
    def duckdb_schema(self) -> str:
        return f"""
        CREATE TABLE IF NOT EXISTS {self.table_name} (
            id VARCHAR PRIMARY KEY,
            study VARCHAR,
            n INTEGER,
            types INTEGER,
            weights JSON,
            total_weight INTEGER,
            digest VARCHAR,
            profile JSON,
            d INTEGER,
            delta VARCHAR,
            h VARCHAR,
            h_unnormalizable BOOLEAN,
            pspe BOOLEAN,
            balanced BOOLEAN,
            alpha VARCHAR,
            r_min VARCHAR,
            r_max VARCHAR,
            r0 VARCHAR,
            error VARCHAR
        )
        """

    @property
    def table_name(self) -> str:
        return self.study

    @property
    def csv_columns(self) -> List[str]:
        return _CSV_COLUMNS[self.study]

    @property
    def exact_columns(self) -> List[str]:
        return _EXACT_COLUMNS[self.study]

    @property
    def sort_key(self) -> Tuple:
        return (self.id,)

    def csv_value(self, column: str) -> Any:
        if column == "W":
            return self.total_weight
        if column == "alpha_or_rand":
            return "rand" if self.alpha is None else format_rational(self.alpha)
        return super().csv_value(column)


@dataclass
class SurvivalPoint(Record):
    """Fraction of instances in a gap stratum whose deviation gap is at most `h_threshold`"""

    h_threshold: Fraction = Fraction(0)
    fraction: Fraction = Fraction(0)
    d_stratum: str = "all"

    @property
    def json_fields(self) -> List[str]:
        return []

    @property
    def table_columns(self) -> List[str]:
        return ["h_threshold", "fraction", "d_stratum"]

    @property
    def duckdb_schema(self) -> str:
        return f"""
        CREATE TABLE IF NOT EXISTS {self.table_name} (
            h_threshold VARCHAR,
            fraction VARCHAR,
            d_stratum VARCHAR,
            PRIMARY KEY (d_stratum, h_threshold)
        )
        """

    @property
    def table_name(self) -> str:
        return "survival"

    @property
    def csv_columns(self) -> List[str]:
        return ["h_threshold", "fraction", "d_stratum"]

    @property
    def exact_columns(self) -> List[str]:
        return ["h_threshold", "fraction"]

    @property
    def sort_key(self) -> Tuple:
        stratum = (0, 0) if self.d_stratum == "all" else (1, int(self.d_stratum))
        return stratum + (self.h_threshold,)

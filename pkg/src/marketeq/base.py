from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any, Dict, List, Tuple

from marketeq.rational import format_decimal, format_rational


@dataclass
class Record(ABC):
    """
    Base class for storing experiment results
    """

    @property
    @abstractmethod
    def json_fields(self) -> List[str]:
        """Return the DuckDB JSON fields for the record"""
        pass

    @property
    @abstractmethod
    def table_columns(self) -> List[str]:
        """Return the DuckDB table columns for the record"""
        pass

    @property
    @abstractmethod
    def duckdb_schema(self) -> str:
        """Return the DuckDB schema for the record"""
        pass

    @property
    @abstractmethod
    def table_name(self) -> str:
        """Return the table (and CSV file) name for the record"""
        pass

    @property
    @abstractmethod
    def csv_columns(self) -> List[str]:
        """Return the CSV columns, before the exact `p/q` companions"""
        pass

    @property
    @abstractmethod
    def exact_columns(self) -> List[str]:
        """Return the rational CSV columns that also get a `<col>_exact` column"""
        pass

    @property
    @abstractmethod
    def sort_key(self) -> Tuple:
        """Return the key ordering rows within a table"""
        pass

    def to_row(self) -> Dict[str, Any]:
        """Column values with rationals as `p/q` strings"""
        row = {}
        for key, value in asdict(self).items():
            if isinstance(value, Fraction):
                value = format_rational(value)
            elif isinstance(value, (list, tuple)):
                value = [format_rational(v) if isinstance(v, Fraction) else v for v in value]
            row[key] = value
        return row

    def csv_value(self, column: str) -> Any:
        return getattr(self, column)

    def csv_header(self) -> List[str]:
        return self.csv_columns + [f"{c}_exact" for c in self.exact_columns]

    def csv_row(self) -> List[str]:
        """Decimals with 12 significant digits, then the exact columns"""
        values = []
        for column in self.csv_columns:
            value = self.csv_value(column)
            if isinstance(value, Fraction):
                values.append(format_decimal(value))
            elif value is None:
                values.append("")
            elif isinstance(value, bool):
                values.append(str(int(value)))
            else:
                values.append(str(value))
        for column in self.exact_columns:
            value = self.csv_value(column)
            values.append("" if value is None else format_rational(value))
        return values

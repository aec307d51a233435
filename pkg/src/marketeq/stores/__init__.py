from typing import List

from marketeq.stores.base import Store
from marketeq.stores.csv import CSVStore
from marketeq.stores.duckdb import DuckDBStore

__all__: List[str] = ["Store", "CSVStore", "DuckDBStore"]

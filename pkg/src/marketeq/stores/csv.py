import asyncio
import csv
import logging
import os
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Dict, List

from marketeq.stores.base import Store

if TYPE_CHECKING:
    from marketeq.base import Record

logger = logging.getLogger(__name__)


@dataclass
class CSVStore(Store):
    """
    CSV store writing one `<table>.csv` per record table.

    Rows are buffered and written sorted by the record's `sort_key` when the
    store is flushed or closed, so the files do not depend on the order in
    which parallel workers finished. A table declared with `_init_table` is
    written even when it stays empty.
    """

    folder: str = field(default_factory=os.getcwd)
    _tables: Dict[str, List["Record"]] = field(default_factory=dict)
    _headers: Dict[str, List[str]] = field(default_factory=dict)

    def __post_init__(self):
        os.makedirs(self.folder, exist_ok=True)

    @classmethod
    def connect(cls, path: str = None) -> "CSVStore":
        return cls(folder=path or os.getcwd())

    def _init_table(self, record: "Record"):
        self._tables.setdefault(record.table_name, [])
        self._headers[record.table_name] = record.csv_header()

    def path_of(self, table_name: str) -> str:
        return os.path.join(self.folder, f"{table_name}.csv")

    def add(self, record: "Record"):
        if record.table_name not in self._tables:
            self._init_table(record)
        self._tables[record.table_name].append(record)

    async def add_async(self, record: "Record"):
        await asyncio.to_thread(self.add, record)

    def flush(self) -> List[str]:
        """Write every table and return the file paths"""
        paths = []
        for table_name, records in self._tables.items():
            path = self.path_of(table_name)
            rows = sorted(records, key=lambda r: r.sort_key)
            with open(path, "w", newline="") as f:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(self._headers[table_name])
                writer.writerows(r.csv_row() for r in rows)
            logger.info("Wrote %d rows to %s", len(rows), path)
            paths.append(path)
        return paths

    def close(self) -> None:
        self.flush()

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

if TYPE_CHECKING:
    from marketeq.base import Record


@dataclass
class Store(ABC):
    """
    Base class for storing experiment records
    """

    @abstractmethod
    def add(self, record: "Record"):
        """Add a new record to the store"""
        pass

    @abstractmethod
    async def add_async(self, record: "Record"):
        """Add a new record to the store asynchronously"""
        pass

    @classmethod
    @abstractmethod
    def connect(cls, path: str) -> "Store":
        """Connect to the store"""
        pass

    @abstractmethod
    def _init_table(self, record: "Record"):
        """Initialize the table"""
        pass

    @abstractmethod
    def close(self) -> None:
        """Flush pending records and release the store"""
        pass

    def declare(self, record: "Record"):
        """Create the table of `record` even if no rows follow"""
        if record.table_name not in self._tables:
            self._init_table(record)

    def add_all(self, records: Iterable["Record"]):
        for record in records:
            self.add(record)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()

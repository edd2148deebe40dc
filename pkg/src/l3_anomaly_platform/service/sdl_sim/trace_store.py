import logging
import threading
from pathlib import Path
from typing import Iterable, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from l3_anomaly_platform.core.converter.trace_converters import TraceFormat, TraceRecordConverter
from l3_anomaly_platform.core.exceptions import ConfigurationError
from l3_anomaly_platform.core.models.l3_models import TelemetryRecord

logger = logging.getLogger(__name__)

# Cursor position before anything has been delivered.
PRE_START = -1


class PollCursor(BaseModel):
    """Private read position of one consumer: the last delivered seq."""
    model_config = ConfigDict(frozen=True)

    position: int = Field(default=PRE_START, ge=PRE_START)


class TraceStore:
    """
    In-memory stand-in for the RIC shared data layer: an append-only record log
    with store-assigned sequence numbers and cursor-based polling.

    One writer appends; any number of readers poll with their own cursor.
    """

    def __init__(self) -> None:
        self._records: List[TelemetryRecord] = []
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._records)

    @property
    def next_seq(self) -> int:
        return len(self._records)

    def append(self, record: TelemetryRecord) -> int:
        with self._lock:
            seq = len(self._records)
            self._records.append(record.with_seq(seq))
        return seq

    def extend(self, records: Iterable[TelemetryRecord]) -> List[int]:
        return [self.append(record) for record in records]

    def poll(self, cursor: PollCursor, max_records: int) -> Tuple[List[TelemetryRecord], PollCursor]:
        """Return up to `max_records` records after the cursor and the advanced cursor."""
        if max_records < 1:
            raise ConfigurationError(f"poll batch size must be at least 1, got {max_records}")

        start = cursor.position + 1
        with self._lock:
            batch = self._records[start:start + max_records]

        if not batch:
            return [], cursor
        return batch, PollCursor(position=batch[-1].seq)

    def snapshot(self) -> List[TelemetryRecord]:
        with self._lock:
            return list(self._records)

    def save(self, path: Union[str, Path], fmt: Optional[TraceFormat] = None) -> Path:
        return TraceRecordConverter.write_trace(path, self.snapshot(), fmt)

    @classmethod
    def load(cls, path: Union[str, Path], fmt: Optional[TraceFormat] = None) -> "TraceStore":
        store = cls()
        store.extend(TraceRecordConverter.read_trace(path, fmt))
        logger.debug("Loaded store with %d records from %s", len(store), path)
        return store

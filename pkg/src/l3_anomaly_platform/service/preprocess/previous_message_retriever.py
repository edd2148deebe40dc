from typing import Dict, Optional, Sequence, TypeVar, Union

from l3_anomaly_platform.core.models.l3_models import TMSI_UNASSIGNED, RecordView, TelemetryRecord

RecordT = TypeVar("RecordT", RecordView, TelemetryRecord)


def previous_with_tmsi(history: Sequence[RecordT], tmsi: int) -> Optional[RecordT]:
    """Most recent record in `history` carrying `tmsi`; None for the unassigned TMSI."""
    if tmsi == TMSI_UNASSIGNED:
        return None
    for record in reversed(history):
        if record.tmsi == tmsi:
            return record
    return None


class PreviousMessageRetriever:
    """Incremental form of `previous_with_tmsi` for a stream: remembers the last
    record seen per TMSI."""

    def __init__(self) -> None:
        self._last_by_tmsi: Dict[int, RecordView] = {}

    def lookup(self, tmsi: int) -> Optional[RecordView]:
        if tmsi == TMSI_UNASSIGNED:
            return None
        return self._last_by_tmsi.get(tmsi)

    def observe(self, record: Union[RecordView, TelemetryRecord]) -> None:
        if record.tmsi == TMSI_UNASSIGNED:
            return
        self._last_by_tmsi[record.tmsi] = record.view() if isinstance(record, TelemetryRecord) else record

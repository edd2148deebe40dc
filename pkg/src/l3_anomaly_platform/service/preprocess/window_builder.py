import logging
from collections import deque
from typing import Deque, Iterable, Iterator, List, Optional, Sequence

from l3_anomaly_platform.core.exceptions import InsufficientDataError
from l3_anomaly_platform.core.formatter.record_formatter import RecordFormatter
from l3_anomaly_platform.core.models.l3_models import GroundTruth, TelemetryRecord
from l3_anomaly_platform.core.models.window_models import DetectionWindow, WindowConfig, WindowLabel
from l3_anomaly_platform.service.preprocess.previous_message_retriever import PreviousMessageRetriever

logger = logging.getLogger(__name__)


def label_window(labels: Iterable[GroundTruth], include_other_attacks: bool = False) -> WindowLabel:
    """Attacked iff any member is a Blind DoS record (or any attack, when generalized)."""
    for label in labels:
        if label.is_blind_dos or (include_other_attacks and label.is_attack):
            return WindowLabel.ATTACKED
    return WindowLabel.NORMAL


class WindowBuilder:
    """
    Stateful stream transformer turning records into overlapping detection windows.

    Every pushed record becomes the single new message of one window once `w`
    records have arrived. The previous same-TMSI record is looked up over
    everything pushed so far, not just the window.
    """

    def __init__(
        self,
        config: WindowConfig,
        mark_previous: bool = False,
        include_other_attacks: bool = False,
    ) -> None:
        self.config = config
        self.mark_previous = mark_previous
        self.include_other_attacks = include_other_attacks
        self._recent: Deque[TelemetryRecord] = deque(maxlen=config.w)
        self._retriever = PreviousMessageRetriever()
        self._pushed = 0

    @property
    def pushed(self) -> int:
        return self._pushed

    def push(self, record: TelemetryRecord) -> Optional[DetectionWindow]:
        previous = self._retriever.lookup(record.tmsi)
        self._retriever.observe(record)
        self._recent.append(record)
        index = self._pushed
        self._pushed += 1

        if len(self._recent) < self.config.w:
            return None

        members = list(self._recent)
        return DetectionWindow(
            history=tuple(RecordFormatter.format_record(member.view(), is_new=False) for member in members[:-1]),
            new_record=RecordFormatter.format_record(record.view(), is_new=True),
            prev_same_tmsi=(
                RecordFormatter.format_previous(previous, self.mark_previous) if previous is not None else None
            ),
            label=label_window((member.label for member in members), self.include_other_attacks),
            index=index,
        )

    def push_many(self, records: Iterable[TelemetryRecord]) -> List[DetectionWindow]:
        return [window for window in map(self.push, records) if window is not None]


def build_windows(
    trace: Sequence[TelemetryRecord],
    config: WindowConfig,
    mark_previous: bool = False,
    include_other_attacks: bool = False,
) -> Iterator[DetectionWindow]:
    """Yield the N - w + 1 windows of `trace` in stream order."""
    if len(trace) < config.w:
        raise InsufficientDataError(f"trace has {len(trace)} records, window size is {config.w}")

    builder = WindowBuilder(config, mark_previous, include_other_attacks)
    logger.debug("Building w=%d windows over %d records", config.w, len(trace))
    return (window for window in map(builder.push, trace) if window is not None)

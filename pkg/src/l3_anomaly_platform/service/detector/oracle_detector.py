import time
from typing import FrozenSet, Iterable, Optional, Sequence

from l3_anomaly_platform.core.converter.trace_converters import MessageTypeConverter
from l3_anomaly_platform.core.formatter.confusable_formatter import ConfusableFormatter
from l3_anomaly_platform.core.models.evasion_models import HypoglyphMap
from l3_anomaly_platform.core.models.l3_models import TMSI_UNASSIGNED, L3Message, MessageType, RecordView
from l3_anomaly_platform.core.models.llm_models import Verdict, VerdictClass
from l3_anomaly_platform.core.models.window_models import DetectionWindow
from l3_anomaly_platform.service.detector.base_detector import WindowDetector

BLIND_DOS_TRIGGERS: FrozenSet[L3Message] = frozenset({L3Message.RRC_SETUP_REQUEST})


def normalize_confusables(text: str, hypoglyphs: Optional[HypoglyphMap] = None) -> str:
    return ConfusableFormatter.normalize_confusables(text, hypoglyphs or HypoglyphMap.default())


def canonical_type(view: RecordView, hypoglyphs: Optional[HypoglyphMap] = None) -> MessageType:
    """Message type after undoing known confusables."""
    return MessageTypeConverter.canonicalize(normalize_confusables(view.message_text, hypoglyphs))


def is_spoofed_setup(
    new: RecordView,
    earlier: Iterable[RecordView],
    hypoglyphs: Optional[HypoglyphMap] = None,
    triggers: FrozenSet[L3Message] = BLIND_DOS_TRIGGERS,
) -> bool:
    """A trigger message presenting a TMSI some earlier record used with another RNTI."""
    if new.tmsi == TMSI_UNASSIGNED or canonical_type(new, hypoglyphs) not in triggers:
        return False
    return any(record.tmsi == new.tmsi and record.rnti != new.rnti for record in earlier)


def oracle_detect(
    window: DetectionWindow,
    trace_prefix: Sequence[RecordView],
    hypoglyphs: Optional[HypoglyphMap] = None,
    triggers: FrozenSet[L3Message] = BLIND_DOS_TRIGGERS,
) -> Verdict:
    """Rule-based Blind DoS verdict; latency is the compute time of the check."""
    start = time.perf_counter()
    anomalous = is_spoofed_setup(window.new_record.record, trace_prefix, hypoglyphs, triggers)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    return Verdict(
        classification=VerdictClass.ANOMALOUS if anomalous else VerdictClass.NORMAL,
        latency_ms=elapsed_ms,
        raw="oracle",
    )


class OracleDetector(WindowDetector):
    """
    Deterministic ground-truth detector.

    With `use_prefix` it checks every earlier record of the trace; without it only
    the window's own history is searched, which at w=1 means nothing at all.
    """
    concurrent = False

    def __init__(
        self,
        use_prefix: bool = True,
        hypoglyphs: Optional[HypoglyphMap] = None,
        triggers: FrozenSet[L3Message] = BLIND_DOS_TRIGGERS,
    ) -> None:
        self.use_prefix = use_prefix
        self.hypoglyphs = hypoglyphs or HypoglyphMap.default()
        self.triggers = triggers
        self.name = "oracle" if use_prefix else "oracle-noprev"
        self.needs_prefix = use_prefix

    def classify(self, window: DetectionWindow, prefix: Sequence[RecordView] = ()) -> Verdict:
        earlier = prefix if self.use_prefix else [item.record for item in window.history]
        return oracle_detect(window, earlier, self.hypoglyphs, self.triggers)

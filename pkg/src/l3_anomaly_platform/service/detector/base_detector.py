from abc import ABC, abstractmethod
from typing import Sequence

from l3_anomaly_platform.core.models.l3_models import RecordView
from l3_anomaly_platform.core.models.llm_models import Verdict
from l3_anomaly_platform.core.models.window_models import DetectionWindow


class WindowDetector(ABC):
    """Classifies one detection window. Implementations never see ground truth."""

    name: str = "detector"
    # Whether windows may be classified from several threads at once.
    concurrent: bool = False
    # Whether classify() reads the trace prefix.
    needs_prefix: bool = False

    @abstractmethod
    def classify(self, window: DetectionWindow, prefix: Sequence[RecordView] = ()) -> Verdict:
        """Classify `window`; `prefix` holds every record before its new record."""
        pass

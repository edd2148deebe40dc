from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from l3_anomaly_platform.core.models.l3_models import RecordView

MIN_WINDOW = 1
MAX_WINDOW = 10


class WindowLabel(str, Enum):
    NORMAL = "normal"
    ATTACKED = "attacked"


class FormattedRecord(BaseModel):
    """A record rendered as one LLM-friendly sentence, keeping its label-free view."""
    model_config = ConfigDict(frozen=True)

    text: str = Field(min_length=1)
    is_new: bool = False
    record: RecordView


class WindowConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    w: int = Field(default=1, ge=MIN_WINDOW, le=MAX_WINDOW)


class DetectionWindow(BaseModel):
    """w consecutive records where the last one is the single new message."""
    model_config = ConfigDict(frozen=True)

    history: Tuple[FormattedRecord, ...] = ()
    new_record: FormattedRecord
    # Builders never attach one for TMSI 0; hand-built windows may.
    prev_same_tmsi: Optional[FormattedRecord] = None
    # Ground truth for evaluation only; detectors never read it.
    label: WindowLabel = WindowLabel.NORMAL
    # Trace position of the new record.
    index: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_markers(self) -> "DetectionWindow":
        if not self.new_record.is_new:
            raise ValueError("the new record must carry the new-message marker")
        if any(item.is_new for item in self.history):
            raise ValueError("history records must not be marked new")
        return self

    @property
    def size(self) -> int:
        return len(self.history) + 1

    @property
    def records(self) -> Tuple[FormattedRecord, ...]:
        return self.history + (self.new_record,)

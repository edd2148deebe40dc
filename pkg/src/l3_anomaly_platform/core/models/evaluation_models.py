from typing import Annotated, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from l3_anomaly_platform.core.models.llm_models import Verdict
from l3_anomaly_platform.core.models.prompt_models import AlignmentGroup, PredicateCoverage
from l3_anomaly_platform.core.models.window_models import WindowLabel

DEFAULT_BOUND_MS = 1000.0

UnitFloat = Annotated[float, Field(ge=0.0, le=1.0)]


class ConfusionCounts(BaseModel):
    model_config = ConfigDict(frozen=True)

    tp: int = Field(default=0, ge=0)
    fp: int = Field(default=0, ge=0)
    tn: int = Field(default=0, ge=0)
    fn: int = Field(default=0, ge=0)
    unclassified: int = Field(default=0, ge=0)
    failed: int = Field(default=0, ge=0)

    @property
    def classified(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def total(self) -> int:
        return self.classified + self.unclassified + self.failed


class Metrics(BaseModel):
    model_config = ConfigDict(frozen=True)

    accuracy: UnitFloat
    precision: UnitFloat
    recall: UnitFloat
    f1: UnitFloat
    fpr: UnitFloat
    fnr: UnitFloat


class LatencyStats(BaseModel):
    model_config = ConfigDict(frozen=True)

    mean: float
    median: float
    p90: float
    p95: float
    p99: float
    max: float
    min: float
    frac_under_bound: UnitFloat
    bound: float = DEFAULT_BOUND_MS

    @model_validator(mode="after")
    def _ordered(self) -> "LatencyStats":
        chain = (self.min, self.median, self.p90, self.p95, self.p99, self.max)
        if any(lower > upper for lower, upper in zip(chain, chain[1:])):
            raise ValueError("latency statistics must satisfy min <= median <= p90 <= p95 <= p99 <= max")
        return self


class GroupStats(BaseModel):
    """F1 distribution of one alignment group. Empty groups keep n=0 and no statistics."""
    model_config = ConfigDict(frozen=True)

    group: AlignmentGroup
    n: int = Field(ge=0)
    mean_f1: Optional[float] = None
    median_f1: Optional[float] = None
    p10_f1: Optional[float] = None
    perfect_frac: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    ci95: Optional[Tuple[float, float]] = None


class WindowResult(BaseModel):
    """Outcome of one detection call; `verdict` is None when the backend failed."""
    model_config = ConfigDict(frozen=True)

    index: int
    label: WindowLabel
    verdict: Optional[Verdict] = None
    latency_ms: float = Field(default=0.0, ge=0.0)
    error: Optional[str] = None


class SweepRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    w: int
    windows: int
    attacked_windows: int
    counts: ConfusionCounts
    metrics: Optional[Metrics] = None
    latency: Optional[LatencyStats] = None


class CorrelationResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    coefficient: Optional[float] = None
    p_value: Optional[float] = None
    error: Optional[str] = None


class DescriptionRun(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    name: str
    body: str
    coverage: PredicateCoverage
    group: AlignmentGroup
    f1: float
    completed_f1: Optional[float] = None


class StudyResult(BaseModel):
    runs: List[DescriptionRun]
    groups: List[GroupStats]
    correlations: List[CorrelationResult]
    cliffs_delta: Dict[str, Optional[float]] = Field(default_factory=dict)
    mean_f1_before: Optional[float] = None
    mean_f1_after: Optional[float] = None

from collections import defaultdict
from typing import Dict, List, Sequence

import numpy as np

from l3_anomaly_platform.core.exceptions import EvaluationError
from l3_anomaly_platform.core.models.evaluation_models import DEFAULT_BOUND_MS, LatencyStats
from l3_anomaly_platform.core.models.llm_models import VerdictClass


def nearest_rank(ordered: Sequence[float], percent: int) -> float:
    """The ceil(percent * n / 100)-th smallest value (1-based, clamped to the first)."""
    n = len(ordered)
    rank = max(1, -(-percent * n // 100))
    return ordered[rank - 1]


def latency_stats(samples: Sequence[float], bound: float = DEFAULT_BOUND_MS) -> LatencyStats:
    if len(samples) == 0:
        raise EvaluationError("latency statistics need at least one sample")

    ordered = sorted(float(sample) for sample in samples)
    return LatencyStats(
        mean=float(np.mean(ordered)),
        median=nearest_rank(ordered, 50),
        p90=nearest_rank(ordered, 90),
        p95=nearest_rank(ordered, 95),
        p99=nearest_rank(ordered, 99),
        max=ordered[-1],
        min=ordered[0],
        frac_under_bound=sum(1 for sample in ordered if sample < bound) / len(ordered),
        bound=bound,
    )


def latency_by_class(samples: Sequence[float], classes: Sequence[VerdictClass]) -> Dict[str, float]:
    """Mean latency per verdict class; classes without samples are left out."""
    if len(samples) != len(classes):
        raise EvaluationError(f"{len(samples)} latency samples for {len(classes)} verdicts")

    grouped: Dict[str, List[float]] = defaultdict(list)
    for sample, verdict_class in zip(samples, classes):
        grouped[verdict_class.value].append(sample)
    return {name: float(np.mean(values)) for name, values in grouped.items()}

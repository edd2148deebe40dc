import logging
from collections import defaultdict
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from l3_anomaly_platform.core.exceptions import UndefinedMetricsError
from l3_anomaly_platform.core.models.evaluation_models import DescriptionRun, GroupStats, StudyResult
from l3_anomaly_platform.core.models.l3_models import TelemetryRecord
from l3_anomaly_platform.core.models.prompt_models import AlignmentGroup, AttackDescription
from l3_anomaly_platform.core.models.window_models import WindowConfig
from l3_anomaly_platform.service.detector.base_detector import WindowDetector
from l3_anomaly_platform.service.evaluation.confusion import UnclassifiedPolicy, metrics, tally_results
from l3_anomaly_platform.service.evaluation.rank_statistics import (
    DEFAULT_RESAMPLES,
    bootstrap_ci,
    cliffs_delta,
    correlate,
)
from l3_anomaly_platform.service.evaluation.sweep import detect_trace
from l3_anomaly_platform.service.prompting.description_linter import complete_description, lint

logger = logging.getLogger(__name__)

DetectorFactory = Callable[[AttackDescription], WindowDetector]

STUDY_WINDOW = WindowConfig(w=1)


def description_f1(
    trace: Sequence[TelemetryRecord],
    detector: WindowDetector,
    policy: UnclassifiedPolicy = UnclassifiedPolicy.EXCLUDE,
    max_in_flight: int = 1,
) -> float:
    """F1 of one full w=1 pass; a pass with nothing classified scores 0."""
    counts = tally_results(detect_trace(trace, STUDY_WINDOW, detector, max_in_flight), policy)
    try:
        return metrics(counts).f1
    except UndefinedMetricsError:
        return 0.0


def group_stats(group: AlignmentGroup, f1s: Sequence[float], resamples: int, seed: int) -> GroupStats:
    if not f1s:
        return GroupStats(group=group, n=0)

    values = np.asarray(f1s, dtype=float)
    return GroupStats(
        group=group,
        n=len(f1s),
        mean_f1=float(values.mean()),
        median_f1=float(np.median(values)),
        p10_f1=float(np.percentile(values, 10)),
        perfect_frac=float(np.mean(values == 1.0)),
        ci95=bootstrap_ci(values, resamples=resamples, level=0.95, seed=seed),
    )


def sensitivity_study(
    descriptions: Sequence[AttackDescription],
    trace: Sequence[TelemetryRecord],
    detector_factory: DetectorFactory,
    complete: bool = True,
    resamples: int = DEFAULT_RESAMPLES,
    seed: int = 0,
    policy: UnclassifiedPolicy = UnclassifiedPolicy.EXCLUDE,
    max_in_flight: int = 1,
) -> StudyResult:
    """
    Run the w=1 pipeline once per description and relate F1 to predicate coverage.

    With `complete`, every description is also rerun after the linter fills in
    its missing predicates, giving the before/after comparison.
    """
    runs: List[DescriptionRun] = []
    for index, description in enumerate(descriptions):
        linted = lint(description)
        f1 = description_f1(trace, detector_factory(description), policy, max_in_flight)

        completed_f1: Optional[float] = None
        if complete:
            completed = complete_description(description, linted.coverage)
            completed_f1 = f1 if completed == description else description_f1(
                trace, detector_factory(completed), policy, max_in_flight
            )

        runs.append(DescriptionRun(
            index=index,
            name=description.name,
            body=description.body,
            coverage=linted.coverage,
            group=linted.group,
            f1=f1,
            completed_f1=completed_f1,
        ))
        logger.info("Description %d (%s aligned): F1 %.3f", index, linted.group.value, f1)

    by_group: Dict[AlignmentGroup, List[float]] = defaultdict(list)
    for run in runs:
        by_group[run.group].append(run.f1)
    groups = [group_stats(group, by_group[group], resamples, seed) for group in AlignmentGroup]

    f1s = [run.f1 for run in runs]
    correlations = [
        correlate("spearman_predicates_f1", "spearman", [run.coverage.core_count for run in runs], f1s),
        correlate("kendall_predicates_f1", "kendall", [run.coverage.core_count for run in runs], f1s),
        correlate("spearman_length_f1", "spearman", [len(run.body.split()) for run in runs], f1s),
    ]

    deltas: Dict[str, Optional[float]] = {}
    for group in (AlignmentGroup.DIRECTLY, AlignmentGroup.CLOSELY, AlignmentGroup.SOMEWHAT):
        key = f"{group.value}_vs_{AlignmentGroup.NOT.value}"
        both = by_group[group] and by_group[AlignmentGroup.NOT]
        deltas[key] = cliffs_delta(by_group[group], by_group[AlignmentGroup.NOT]) if both else None

    after = [run.completed_f1 for run in runs if run.completed_f1 is not None]
    return StudyResult(
        runs=runs,
        groups=groups,
        correlations=correlations,
        cliffs_delta=deltas,
        mean_f1_before=float(np.mean(f1s)) if f1s else None,
        mean_f1_after=float(np.mean(after)) if complete and after else None,
    )

from enum import Enum
from typing import Optional, Sequence

from l3_anomaly_platform.core.exceptions import EvaluationError, UndefinedMetricsError
from l3_anomaly_platform.core.models.evaluation_models import ConfusionCounts, Metrics, WindowResult
from l3_anomaly_platform.core.models.llm_models import Verdict, VerdictClass
from l3_anomaly_platform.core.models.window_models import WindowLabel


class UnclassifiedPolicy(str, Enum):
    EXCLUDE = "exclude"          # count separately, keep out of the four cells
    PESSIMISTIC = "pessimistic"  # fn when Attacked, fp when Normal


def tally(
    verdicts: Sequence[Optional[Verdict]],
    labels: Sequence[WindowLabel],
    policy: UnclassifiedPolicy = UnclassifiedPolicy.EXCLUDE,
) -> ConfusionCounts:
    """Confusion counts over aligned verdicts and labels. A None verdict is a failed call."""
    if len(verdicts) != len(labels):
        raise EvaluationError(f"{len(verdicts)} verdicts for {len(labels)} window labels")

    cells = {"tp": 0, "fp": 0, "tn": 0, "fn": 0, "unclassified": 0, "failed": 0}
    for verdict, label in zip(verdicts, labels):
        attacked = label == WindowLabel.ATTACKED
        if verdict is None:
            cells["failed"] += 1
        elif verdict.classification == VerdictClass.ANOMALOUS:
            cells["tp" if attacked else "fp"] += 1
        elif verdict.classification == VerdictClass.NORMAL:
            cells["fn" if attacked else "tn"] += 1
        elif policy == UnclassifiedPolicy.PESSIMISTIC:
            cells["fn" if attacked else "fp"] += 1
        else:
            cells["unclassified"] += 1
    return ConfusionCounts(**cells)


def tally_results(
    results: Sequence[WindowResult],
    policy: UnclassifiedPolicy = UnclassifiedPolicy.EXCLUDE,
) -> ConfusionCounts:
    return tally([result.verdict for result in results], [result.label for result in results], policy)


def _ratio(numerator: int, denominator: int) -> float:
    return numerator / denominator if denominator else 0.0


def metrics(counts: ConfusionCounts) -> Metrics:
    tp, fp, tn, fn = counts.tp, counts.fp, counts.tn, counts.fn
    if counts.classified == 0:
        raise UndefinedMetricsError("no classified windows: all four confusion cells are zero")

    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return Metrics(
        accuracy=(tp + tn) / counts.classified,
        precision=precision,
        recall=recall,
        f1=f1,
        fpr=_ratio(fp, fp + tn),
        fnr=_ratio(fn, fn + tp),
    )

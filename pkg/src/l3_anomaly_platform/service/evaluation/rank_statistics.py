import logging
from typing import Sequence, Tuple

import numpy as np
from scipy import stats

from l3_anomaly_platform.core.exceptions import EvaluationError, UndefinedCorrelationError
from l3_anomaly_platform.core.models.evaluation_models import CorrelationResult

logger = logging.getLogger(__name__)

DEFAULT_RESAMPLES = 10000


def bootstrap_ci(
    values: Sequence[float],
    resamples: int = DEFAULT_RESAMPLES,
    level: float = 0.95,
    seed: int = 0,
) -> Tuple[float, float]:
    """
    Percentile bootstrap interval for the mean.

    The interval is clipped to [min(values), max(values)], which also keeps a
    constant input exactly degenerate despite float summation.
    """
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        raise EvaluationError("bootstrap needs at least one value")
    if not 0.0 < level < 1.0:
        raise EvaluationError(f"confidence level must lie in (0, 1), got {level}")
    if resamples < 1:
        raise EvaluationError(f"resamples must be at least 1, got {resamples}")

    rng = np.random.default_rng(seed)
    indices = rng.integers(0, data.size, size=(resamples, data.size))
    means = data[indices].mean(axis=1)

    alpha = (1.0 - level) / 2.0
    lower, upper = np.percentile(means, [100.0 * alpha, 100.0 * (1.0 - alpha)])
    low_bound, high_bound = float(data.min()), float(data.max())
    return float(np.clip(lower, low_bound, high_bound)), float(np.clip(upper, low_bound, high_bound))


def _paired(xs: Sequence[float], ys: Sequence[float]) -> Tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.size != y.size:
        raise EvaluationError(f"paired samples differ in length: {x.size} vs {y.size}")
    if x.size < 2:
        raise UndefinedCorrelationError("correlation needs at least two pairs")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise UndefinedCorrelationError("correlation is undefined for a constant sample")
    return x, y


def spearman_test(xs: Sequence[float], ys: Sequence[float]) -> Tuple[float, float]:
    """Spearman rho (average ranks for ties) and its two-sided p-value."""
    x, y = _paired(xs, ys)
    result = stats.spearmanr(x, y)
    return float(result.statistic), float(result.pvalue)


def kendall_test(xs: Sequence[float], ys: Sequence[float]) -> Tuple[float, float]:
    """Kendall tau-b and its two-sided p-value."""
    x, y = _paired(xs, ys)
    result = stats.kendalltau(x, y, variant="b")
    return float(result.statistic), float(result.pvalue)


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    return spearman_test(xs, ys)[0]


def kendall_tau(xs: Sequence[float], ys: Sequence[float]) -> float:
    return kendall_test(xs, ys)[0]


def cliffs_delta(a: Sequence[float], b: Sequence[float]) -> float:
    """(#(a > b) - #(a < b)) / (|a| * |b|) over all cross pairs."""
    left = np.asarray(a, dtype=float)
    right = np.asarray(b, dtype=float)
    if left.size == 0 or right.size == 0:
        raise EvaluationError("Cliff's delta needs two nonempty groups")

    greater = np.sum(left[:, None] > right[None, :])
    less = np.sum(left[:, None] < right[None, :])
    return float(greater - less) / float(left.size * right.size)


def correlate(name: str, method: str, xs: Sequence[float], ys: Sequence[float]) -> CorrelationResult:
    """Named correlation; an undefined result is reported, not raised."""
    test = {"spearman": spearman_test, "kendall": kendall_test}[method]
    try:
        coefficient, p_value = test(xs, ys)
    except UndefinedCorrelationError as e:
        logger.info("%s undefined: %s", name, e.message)
        return CorrelationResult(name=name, error=e.message)
    return CorrelationResult(name=name, coefficient=coefficient, p_value=p_value)

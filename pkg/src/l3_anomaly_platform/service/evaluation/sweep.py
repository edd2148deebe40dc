import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Iterator, List, Optional, Sequence

from l3_anomaly_platform.core.exceptions import BackendError, InsufficientDataError, UndefinedMetricsError
from l3_anomaly_platform.core.models.evaluation_models import DEFAULT_BOUND_MS, SweepRow, WindowResult
from l3_anomaly_platform.core.models.l3_models import RecordView, TelemetryRecord
from l3_anomaly_platform.core.models.window_models import DetectionWindow, WindowConfig, WindowLabel
from l3_anomaly_platform.service.detector.base_detector import WindowDetector
from l3_anomaly_platform.service.evaluation.confusion import UnclassifiedPolicy, metrics, tally_results
from l3_anomaly_platform.service.evaluation.latency import latency_stats
from l3_anomaly_platform.service.preprocess.window_builder import WindowBuilder, build_windows
from l3_anomaly_platform.service.sdl_sim.trace_store import PollCursor, TraceStore

logger = logging.getLogger(__name__)


def classify_window(
    detector: WindowDetector,
    window: DetectionWindow,
    prefix: Sequence[RecordView] = (),
) -> WindowResult:
    """Run one detection; backend failures become failed results, not exceptions."""
    try:
        verdict = detector.classify(window, prefix)
    except BackendError as e:
        return WindowResult(index=window.index, label=window.label, latency_ms=e.elapsed_ms, error=e.message)
    return WindowResult(index=window.index, label=window.label, verdict=verdict, latency_ms=verdict.latency_ms)


def detect_stream(
    records: Iterable[TelemetryRecord],
    config: WindowConfig,
    detector: WindowDetector,
    mark_previous: bool = False,
    include_other_attacks: bool = False,
) -> Iterator[WindowResult]:
    """Window and classify records one by one as they arrive."""
    builder = WindowBuilder(config, mark_previous, include_other_attacks)
    seen: List[RecordView] = []
    for record in records:
        window = builder.push(record)
        if window is not None:
            yield classify_window(detector, window, seen if detector.needs_prefix else ())
        seen.append(record.view())


def detect_trace(
    trace: Sequence[TelemetryRecord],
    config: WindowConfig,
    detector: WindowDetector,
    max_in_flight: int = 1,
    mark_previous: bool = False,
    include_other_attacks: bool = False,
) -> List[WindowResult]:
    """
    Results for every window of `trace`, in stream order.

    Detectors that allow it are called concurrently (at most `max_in_flight`
    requests at a time); the results are still returned in window order.
    """
    if len(trace) < config.w:
        raise InsufficientDataError(f"trace has {len(trace)} records, window size is {config.w}")

    if detector.concurrent and not detector.needs_prefix and max_in_flight > 1:
        windows = list(build_windows(trace, config, mark_previous, include_other_attacks))
        with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
            return list(pool.map(lambda window: classify_window(detector, window), windows))

    return list(detect_stream(trace, config, detector, mark_previous, include_other_attacks))


def drain(store: TraceStore, poll_batch: int, cursor: Optional[PollCursor] = None) -> Iterator[TelemetryRecord]:
    """Poll `store` until caught up, yielding records in seq order."""
    cursor = cursor or PollCursor()
    while True:
        batch, cursor = store.poll(cursor, poll_batch)
        if not batch:
            return
        logger.debug("Polled %d records up to seq %d", len(batch), cursor.position)
        yield from batch


def summarize(
    w: int,
    results: Sequence[WindowResult],
    policy: UnclassifiedPolicy = UnclassifiedPolicy.EXCLUDE,
    bound: float = DEFAULT_BOUND_MS,
) -> SweepRow:
    counts = tally_results(results, policy)
    try:
        row_metrics = metrics(counts)
    except UndefinedMetricsError:
        logger.warning("w=%d: metrics undefined, no window was classified", w)
        row_metrics = None

    return SweepRow(
        w=w,
        windows=len(results),
        attacked_windows=sum(1 for result in results if result.label == WindowLabel.ATTACKED),
        counts=counts,
        metrics=row_metrics,
        latency=latency_stats([result.latency_ms for result in results], bound) if results else None,
    )


def sweep(
    trace: Sequence[TelemetryRecord],
    w_values: Iterable[int],
    detector: WindowDetector,
    policy: UnclassifiedPolicy = UnclassifiedPolicy.EXCLUDE,
    bound: float = DEFAULT_BOUND_MS,
    max_in_flight: int = 1,
) -> List[SweepRow]:
    """One summary row per window size, ascending."""
    sizes = sorted(set(w_values))
    if sizes and sizes[-1] > len(trace):
        raise InsufficientDataError(f"trace has {len(trace)} records, largest window size is {sizes[-1]}")

    rows: List[SweepRow] = []
    for w in sizes:
        results = detect_trace(trace, WindowConfig(w=w), detector, max_in_flight)
        rows.append(summarize(w, results, policy, bound))
        logger.info("w=%d: %d windows, %d attacked", w, rows[-1].windows, rows[-1].attacked_windows)
    return rows

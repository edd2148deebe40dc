import csv
import io
import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, List, Mapping, Sequence, Tuple, Union

from l3_anomaly_platform.core.atomic_io import write_text_atomic
from l3_anomaly_platform.core.exceptions import EvaluationError
from l3_anomaly_platform.core.models.evaluation_models import LatencyStats, StudyResult, SweepRow

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

SWEEP_COLUMNS: List[str] = [
    "w", "windows", "attacked_windows",
    "tp", "fp", "tn", "fn", "unclassified", "failed",
    "accuracy", "precision", "recall", "f1", "fpr", "fnr",
    "lat_mean_ms", "lat_median_ms", "lat_p90_ms", "lat_p95_ms", "lat_p99_ms", "lat_max_ms", "lat_min_ms",
    "frac_under_bound",
]

STUDY_COLUMNS: List[str] = [
    "index", "name", "group", "p1", "p2", "p3", "p4", "p5", "p6",
    "core_predicates", "words", "f1", "completed_f1",
]

GROUP_COLUMNS: List[str] = ["group", "n", "mean_f1", "median_f1", "p10_f1", "perfect_frac", "ci_low", "ci_high"]

# Row labels of the latency table, in print order, with the LatencyStats field each shows.
LATENCY_ROWS: List[Tuple[str, str]] = [
    ("Mean (ms)", "mean"),
    ("Median (ms)", "median"),
    ("P90 (ms)", "p90"),
    ("P95 (ms)", "p95"),
    ("P99 (ms)", "p99"),
    ("Max (ms)", "max"),
    ("Min (ms)", "min"),
]
_BOUND_ROW = re.compile(r"^<([\d.]+) s \(%\)$")


def sweep_row_values(row: SweepRow) -> Dict[str, Any]:
    values: Dict[str, Any] = {"w": row.w, "windows": row.windows, "attacked_windows": row.attacked_windows}
    values.update(row.counts.model_dump())
    if row.metrics is not None:
        values.update(row.metrics.model_dump())
    if row.latency is not None:
        latency = row.latency
        values.update({
            "lat_mean_ms": latency.mean, "lat_median_ms": latency.median, "lat_p90_ms": latency.p90,
            "lat_p95_ms": latency.p95, "lat_p99_ms": latency.p99, "lat_max_ms": latency.max,
            "lat_min_ms": latency.min, "frac_under_bound": latency.frac_under_bound,
        })
    return values


def _csv_text(columns: Sequence[str], rows: Sequence[Mapping[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(columns), lineterminator="\n", restval="")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: _cell(row.get(key)) for key in columns})
    return buffer.getvalue()


def _cell(value: Any) -> Any:
    if isinstance(value, float):
        return f"{value:.6f}"
    return "" if value is None else value


def _dat_text(columns: Sequence[str], rows: Sequence[Mapping[str, Any]]) -> str:
    """Whitespace-separated columns with a commented header; gaps become NaN."""
    lines = ["# " + " ".join(columns)]
    for row in rows:
        cells = []
        for key in columns:
            value = row.get(key)
            cells.append("NaN" if value is None or value == "" else str(_cell(value)).replace(" ", "_"))
        lines.append(" ".join(cells))
    return "\n".join(lines) + "\n"


def write_sweep_csv(path: PathLike, rows: Sequence[SweepRow]) -> Path:
    return write_text_atomic(path, _csv_text(SWEEP_COLUMNS, [sweep_row_values(row) for row in rows]))


def write_sweep_dat(path: PathLike, rows: Sequence[SweepRow]) -> Path:
    return write_text_atomic(path, _dat_text(SWEEP_COLUMNS, [sweep_row_values(row) for row in rows]))


def study_run_values(study: StudyResult) -> List[Dict[str, Any]]:
    rows = []
    for run in study.runs:
        values = {"index": run.index, "name": run.name, "group": run.group.value, "f1": run.f1,
                  "completed_f1": run.completed_f1, "core_predicates": run.coverage.core_count,
                  "words": len(run.body.split())}
        values.update({key: int(flag) for key, flag in run.coverage.model_dump().items()})
        rows.append(values)
    return rows


def study_group_values(study: StudyResult) -> List[Dict[str, Any]]:
    rows = []
    for stats in study.groups:
        low, high = stats.ci95 if stats.ci95 is not None else (None, None)
        rows.append({"group": stats.group.value, "n": stats.n, "mean_f1": stats.mean_f1,
                     "median_f1": stats.median_f1, "p10_f1": stats.p10_f1,
                     "perfect_frac": stats.perfect_frac, "ci_low": low, "ci_high": high})
    return rows


def write_study_csv(path: PathLike, study: StudyResult) -> Path:
    return write_text_atomic(path, _csv_text(STUDY_COLUMNS, study_run_values(study)))


def write_groups_csv(path: PathLike, study: StudyResult) -> Path:
    return write_text_atomic(path, _csv_text(GROUP_COLUMNS, study_group_values(study)))


def write_groups_dat(path: PathLike, study: StudyResult) -> Path:
    return write_text_atomic(path, _dat_text(GROUP_COLUMNS, study_group_values(study)))


def write_json(path: PathLike, payload: Any) -> Path:
    """Pydantic models are dumped in JSON mode; plain data is written as is."""
    if hasattr(payload, "model_dump"):
        payload = payload.model_dump(mode="json")
    elif isinstance(payload, list):
        payload = [item.model_dump(mode="json") if hasattr(item, "model_dump") else item for item in payload]
    return write_text_atomic(path, json.dumps(payload, indent=2, ensure_ascii=False) + "\n")


##############################################################################
# Latency comparison table: one column per configuration, values in ms with
# two decimals and the under-bound share in percent.
##############################################################################

def render_latency_table(columns: Mapping[str, LatencyStats]) -> str:
    if not columns:
        raise EvaluationError("latency table needs at least one column")
    bounds = {stats.bound for stats in columns.values()}
    if len(bounds) != 1:
        raise EvaluationError("all latency columns must share one bound")

    rows = [["metric", *columns]]
    for label, field in LATENCY_ROWS:
        rows.append([label, *(f"{getattr(stats, field):.2f}" for stats in columns.values())])
    rows.append([f"<{bounds.pop() / 1000.0:g} s (%)",
                 *(f"{stats.frac_under_bound * 100.0:.2f}" for stats in columns.values())])

    buffer = io.StringIO()
    csv.writer(buffer, lineterminator="\n").writerows(rows)
    return buffer.getvalue()


def parse_latency_table(text: str) -> Dict[str, LatencyStats]:
    rows = [row for row in csv.reader(io.StringIO(text)) if row]
    if not rows or rows[0][0] != "metric":
        raise EvaluationError("latency table must start with a 'metric' header row")

    names = rows[0][1:]
    by_label = {row[0]: row[1:] for row in rows[1:]}
    bound_labels = [label for label in by_label if _BOUND_ROW.match(label)]
    if len(bound_labels) != 1:
        raise EvaluationError("latency table needs exactly one '<N s (%)' row")
    bound_ms = float(_BOUND_ROW.match(bound_labels[0]).group(1)) * 1000.0

    parsed: Dict[str, LatencyStats] = {}
    for column, name in enumerate(names):
        try:
            fields = {field: float(by_label[label][column]) for label, field in LATENCY_ROWS}
            fields["frac_under_bound"] = float(by_label[bound_labels[0]][column]) / 100.0
        except (KeyError, IndexError, ValueError) as e:
            raise EvaluationError(f"latency table column '{name}' is incomplete: {e}")
        parsed[name] = LatencyStats(bound=bound_ms, **fields)
    return parsed


def read_latency_table(path: PathLike) -> Dict[str, LatencyStats]:
    return parse_latency_table(Path(path).read_text(encoding="utf-8"))


def write_latency_table(path: PathLike, columns: Mapping[str, LatencyStats]) -> Path:
    return write_text_atomic(path, render_latency_table(columns))

import argparse
import json
import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional

from l3_anomaly_platform.cli.manifest import ManifestRecorder, manifest_path_for
from l3_anomaly_platform.core.atomic_io import write_text_atomic
from l3_anomaly_platform.core.client.llm_gateway.llm_gateway_client import LLMGatewayClient
from l3_anomaly_platform.core.converter.description_converters import DescriptionConverter
from l3_anomaly_platform.core.converter.trace_converters import TraceRecordConverter
from l3_anomaly_platform.core.decorator.cli_error_decorator import handle_cli_errors
from l3_anomaly_platform.core.exceptions import ConfigurationError, EvaluationError
from l3_anomaly_platform.core.models.evaluation_models import StudyResult, SweepRow, WindowResult
from l3_anomaly_platform.core.models.l3_models import TelemetryRecord
from l3_anomaly_platform.core.models.llm_models import BackendConfig
from l3_anomaly_platform.core.models.prompt_models import AttackDescription, PromptMode
from l3_anomaly_platform.core.models.window_models import DetectionWindow, WindowConfig
from l3_anomaly_platform.service.detector.base_detector import WindowDetector
from l3_anomaly_platform.service.detector.llm_detector import LLMDetector
from l3_anomaly_platform.service.detector.oracle_detector import OracleDetector
from l3_anomaly_platform.service.evaluation import report_writer
from l3_anomaly_platform.service.evaluation.confusion import UnclassifiedPolicy
from l3_anomaly_platform.service.evaluation.latency import latency_by_class, latency_stats
from l3_anomaly_platform.service.evaluation.sensitivity import sensitivity_study
from l3_anomaly_platform.service.evaluation.sweep import detect_stream, detect_trace, drain, summarize, sweep
from l3_anomaly_platform.service.preprocess.window_builder import build_windows
from l3_anomaly_platform.service.prompting.attack_catalog import BLIND_DOS_SOURCE, get_description
from l3_anomaly_platform.service.prompting.description_extractor import extract_description
from l3_anomaly_platform.service.prompting.description_linter import complete_description, gate_description, lint
from l3_anomaly_platform.service.sdl_sim.attack_injector import inject_blind_dos
from l3_anomaly_platform.service.sdl_sim.hypoglyph_mutator import hypoglyph_mutate, select_for_evasion
from l3_anomaly_platform.service.sdl_sim.session_generator import generate_ue_traces
from l3_anomaly_platform.service.sdl_sim.trace_mixer import interleave_shuffle
from l3_anomaly_platform.service.sdl_sim.trace_store import TraceStore

logger = logging.getLogger(__name__)

ORACLE_DETECTORS = {"oracle": True, "oracle-noprev": False}


######################################################################
# Shared resolution helpers
######################################################################

def load_backend_config(args: argparse.Namespace) -> BackendConfig:
    return BackendConfig.load(
        getattr(args, "config", None),
        endpoint=getattr(args, "endpoint", None),
        model=getattr(args, "model", None),
        max_output_tokens=getattr(args, "max_tokens", None),
        explanation_enabled=True if getattr(args, "explain", False) else None,
        max_in_flight=getattr(args, "max_in_flight", None),
    )


def resolve_description(args: argparse.Namespace, recorder: ManifestRecorder) -> AttackDescription:
    if getattr(args, "desc", None):
        return DescriptionConverter.read_descriptions(recorder.read(args.desc))[0]
    return get_description(args.attack)


def detector_factory(
    spec: str,
    config: BackendConfig,
    mode: PromptMode,
    include_previous: bool = True,
) -> Callable[[AttackDescription], WindowDetector]:
    """Builds detectors sharing one backend; oracles ignore the description.

    Without `include_previous` neither kind sees history outside the window:
    prompts drop the "Previous message" turn and the oracle searches the window only.
    """
    if spec in ORACLE_DETECTORS:
        oracle = OracleDetector(use_prefix=ORACLE_DETECTORS[spec] and include_previous)
        return lambda description: oracle

    backend = LLMGatewayClient.from_spec(spec, config)
    name = spec.split(":", 1)[0]
    return lambda description: LLMDetector(
        backend, config, description, mode, name=name, include_previous=include_previous,
    )


def window_dump_line(window: DetectionWindow) -> str:
    return json.dumps({
        "index": window.index,
        "prev": window.prev_same_tmsi.text if window.prev_same_tmsi is not None else None,
        "records": [record.text for record in window.records],
    }, ensure_ascii=False)


def result_line(result: WindowResult) -> str:
    verdict = result.verdict
    return json.dumps({
        "index": result.index,
        "label": result.label.value,
        "class": verdict.classification.value if verdict is not None else None,
        "explanation": verdict.explanation if verdict is not None else None,
        "latency_ms": round(result.latency_ms, 6),
        "error": result.error,
    }, ensure_ascii=False)


def metrics_line(row: SweepRow) -> str:
    counts = row.counts
    parts = [
        f"w={row.w}", f"windows={row.windows}", f"attacked={row.attacked_windows}",
        f"tp={counts.tp}", f"fp={counts.fp}", f"tn={counts.tn}", f"fn={counts.fn}",
        f"unclassified={counts.unclassified}", f"failed={counts.failed}",
    ]
    if row.metrics is not None:
        parts += [f"{name}={value:.3f}" for name, value in row.metrics.model_dump().items()]
    return " ".join(parts)


def latency_line(row: SweepRow, label: str) -> str:
    if row.latency is None:
        return f"{label}: no samples"
    lat = row.latency
    return (
        f"{label}: mean={lat.mean:.2f}ms median={lat.median:.2f}ms p90={lat.p90:.2f}ms p95={lat.p95:.2f}ms "
        f"p99={lat.p99:.2f}ms max={lat.max:.2f}ms min={lat.min:.2f}ms under_{lat.bound:g}ms={lat.frac_under_bound:.2%}"
    )


def parse_w_range(text: str) -> List[int]:
    """'1..10', '3' or '1,2,5'."""
    try:
        if ".." in text:
            low, high = (int(part) for part in text.split("..", 1))
            return list(range(low, high + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigurationError(f"invalid window range '{text}', use e.g. 1..10 or 1,2,5")


def parse_positions(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigurationError(f"invalid position list '{text}'")


def read_trace(path: str, recorder: ManifestRecorder) -> List[TelemetryRecord]:
    return TraceRecordConverter.read_trace(recorder.read(path))


class CommandController:
    """One entry point per CLI command. Each returns the process exit code."""

    @classmethod
    def _finish(cls, recorder: ManifestRecorder, args: argparse.Namespace, out: Optional[str]) -> int:
        recorder.write(manifest_path_for(recorder.command, out, getattr(args, "manifest", None)))
        return 0

    @classmethod
    @handle_cli_errors()
    def gen(cls, args: argparse.Namespace) -> int:
        recorder = ManifestRecorder("gen", args)
        recorder.seed("seed", args.seed)

        per_ue, shuffle_seed = generate_ue_traces(args.ues, args.sessions, args.seed, args.reuse_tmsi)
        trace = interleave_shuffle(per_ue, shuffle_seed)
        if args.records is not None:
            if args.records > len(trace):
                raise ConfigurationError(f"--records {args.records} exceeds the {len(trace)} generated records")
            trace = trace[:args.records]

        recorder.wrote(TraceRecordConverter.write_trace(args.out, trace))
        print(f"wrote {len(trace)} records to {args.out}")
        return cls._finish(recorder, args, args.out)

    @classmethod
    @handle_cli_errors()
    def inject(cls, args: argparse.Namespace) -> int:
        recorder = ManifestRecorder("inject", args)
        recorder.seed("seed", args.seed)

        trace = inject_blind_dos(read_trace(args.trace, recorder), args.count, args.min_gap, args.seed)
        recorder.wrote(TraceRecordConverter.write_trace(args.out, trace))
        attacks = sum(1 for record in trace if record.label.is_blind_dos)
        print(f"wrote {len(trace)} records ({attacks} blind_dos) to {args.out}")
        return cls._finish(recorder, args, args.out)

    @classmethod
    @handle_cli_errors()
    def mutate(cls, args: argparse.Namespace) -> int:
        recorder = ManifestRecorder("mutate", args)
        trace = read_trace(args.trace, recorder)

        if args.positions:
            selection = parse_positions(args.positions)
        else:
            recorder.seed("seed", args.seed)
            selection = select_for_evasion(trace, args.attacks, args.benign, args.seed)

        mutated = hypoglyph_mutate(trace, selection)
        recorder.wrote(TraceRecordConverter.write_trace(args.out, mutated))
        print(f"mutated seqs {','.join(map(str, selection))} into {args.out}")
        return cls._finish(recorder, args, args.out)

    @classmethod
    @handle_cli_errors()
    def run(cls, args: argparse.Namespace) -> int:
        recorder = ManifestRecorder("run", args)
        trace = read_trace(args.trace, recorder)
        config = load_backend_config(args)
        window_config = WindowConfig(w=args.w)
        factory = detector_factory(args.detector, config, PromptMode(args.mode), not args.no_prev)
        detector = factory(resolve_description(args, recorder))

        if args.dump_windows:
            lines = [window_dump_line(window) for window in build_windows(trace, window_config, args.mark_previous)]
            recorder.wrote(write_text_atomic(args.dump_windows, "\n".join(lines) + "\n"))

        if args.poll_batch:
            store = TraceStore()
            store.extend(trace)
            results = list(detect_stream(drain(store, args.poll_batch), window_config, detector, args.mark_previous))
        else:
            results = detect_trace(trace, window_config, detector, config.max_in_flight, args.mark_previous)

        policy = UnclassifiedPolicy(args.unclassified_policy)
        row = summarize(args.w, results, policy, args.bound_ms)
        label = "compute latency" if args.detector in ORACLE_DETECTORS else "latency"
        print(metrics_line(row))
        print(latency_line(row, label))

        answered = [result for result in results if result.verdict is not None]
        by_class = latency_by_class([r.latency_ms for r in answered], [r.verdict.classification for r in answered])
        if by_class:
            print("mean latency by class: " + " ".join(f"{name}={value:.2f}ms" for name, value in sorted(by_class.items())))

        if args.out:
            out = Path(args.out)
            recorder.wrote(write_text_atomic(out, "\n".join(result_line(result) for result in results) + "\n"))
            recorder.wrote(report_writer.write_json(out.with_suffix(".summary.json"), row))
        return cls._finish(recorder, args, args.out)

    @classmethod
    @handle_cli_errors()
    def sweep(cls, args: argparse.Namespace) -> int:
        recorder = ManifestRecorder("sweep", args)
        trace = read_trace(args.trace, recorder)
        config = load_backend_config(args)
        factory = detector_factory(args.detector, config, PromptMode(args.mode), not args.no_prev)
        detector = factory(resolve_description(args, recorder))

        rows = sweep(
            trace,
            parse_w_range(args.w_range),
            detector,
            UnclassifiedPolicy(args.unclassified_policy),
            args.bound_ms,
            config.max_in_flight,
        )
        for row in rows:
            print(metrics_line(row))

        out = Path(args.out)
        recorder.wrote(report_writer.write_sweep_csv(out, rows))
        recorder.wrote(report_writer.write_json(out.with_suffix(".json"), rows))
        recorder.wrote(report_writer.write_sweep_dat(out.with_suffix(".dat"), rows))
        return cls._finish(recorder, args, args.out)

    @classmethod
    @handle_cli_errors()
    def lint(cls, args: argparse.Namespace) -> int:
        recorder = ManifestRecorder("lint", args)
        if args.desc:
            descriptions = DescriptionConverter.read_descriptions(recorder.read(args.desc))
        else:
            descriptions = [get_description(args.attack)]

        linted = []
        for description in descriptions:
            result = lint(description)
            if args.complete:
                result = lint(complete_description(description, result.coverage))
            linted.append(result)
            print(f"{result.group.value}\t{','.join(result.coverage.satisfied()) or '-'}\t{description.name}")

        if args.out:
            annotated = [item.description.model_copy(update={"group": item.group.value}) for item in linted]
            recorder.wrote(DescriptionConverter.write_descriptions(args.out, annotated))
        return cls._finish(recorder, args, args.out)

    @classmethod
    @handle_cli_errors()
    def study(cls, args: argparse.Namespace) -> int:
        recorder = ManifestRecorder("study", args)
        recorder.seed("seed", args.seed)
        trace = read_trace(args.trace, recorder)
        descriptions = DescriptionConverter.read_descriptions(recorder.read(args.desc))
        config = load_backend_config(args)

        study = sensitivity_study(
            descriptions,
            trace,
            detector_factory(args.detector, config, PromptMode(args.mode), not args.no_prev),
            complete=not args.no_complete,
            resamples=args.resamples,
            seed=args.seed,
            policy=UnclassifiedPolicy(args.unclassified_policy),
            max_in_flight=config.max_in_flight,
        )

        for stats in study.groups:
            mean = f"{stats.mean_f1:.3f}" if stats.mean_f1 is not None else "-"
            print(f"{stats.group.value}\tn={stats.n}\tmean_f1={mean}")
        for correlation in study.correlations:
            value = f"{correlation.coefficient:.3f}" if correlation.coefficient is not None else correlation.error
            print(f"{correlation.name}\t{value}")

        out_dir = Path(args.out_dir)
        recorder.wrote(report_writer.write_json(out_dir / "study.json", study))
        recorder.wrote(report_writer.write_study_csv(out_dir / "study_runs.csv", study))
        recorder.wrote(report_writer.write_groups_csv(out_dir / "study_groups.csv", study))
        recorder.wrote(report_writer.write_groups_dat(out_dir / "study_groups.dat", study))
        return cls._finish(recorder, args, args.out_dir)

    @classmethod
    @handle_cli_errors()
    def report(cls, args: argparse.Namespace) -> int:
        recorder = ManifestRecorder("report", args)
        out_dir = Path(args.out_dir)
        if not (args.sweep or args.study or args.latency):
            raise ConfigurationError("nothing to report: pass --sweep, --study or --latency")

        if args.sweep:
            payload = json.loads(recorder.read(args.sweep).read_text(encoding="utf-8"))
            rows = [SweepRow.model_validate(item) for item in (payload if isinstance(payload, list) else [payload])]
            recorder.wrote(report_writer.write_sweep_csv(out_dir / "sweep.csv", rows))
            recorder.wrote(report_writer.write_sweep_dat(out_dir / "sweep.dat", rows))
            recorder.wrote(report_writer.write_json(out_dir / "sweep.json", rows))

        if args.study:
            study = StudyResult.model_validate_json(recorder.read(args.study).read_text(encoding="utf-8"))
            recorder.wrote(report_writer.write_study_csv(out_dir / "study_runs.csv", study))
            recorder.wrote(report_writer.write_groups_csv(out_dir / "study_groups.csv", study))
            recorder.wrote(report_writer.write_groups_dat(out_dir / "study_groups.dat", study))

        if args.latency:
            columns = {}
            for item in args.latency:
                name, _, path = item.partition("=")
                if not path:
                    raise ConfigurationError(f"--latency expects NAME=results.jsonl, got '{item}'")
                columns[name] = latency_stats(cls._result_latencies(recorder.read(path)), args.bound_ms)
            recorder.wrote(report_writer.write_latency_table(out_dir / "latency.csv", columns))
            print(report_writer.render_latency_table(columns), end="")

        return cls._finish(recorder, args, args.out_dir)

    @staticmethod
    def _result_latencies(path: Path) -> List[float]:
        samples = []
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                samples.append(float(json.loads(line)["latency_ms"]))
        if not samples:
            raise EvaluationError(f"{path} holds no results")
        return samples

    @classmethod
    @handle_cli_errors()
    def extract(cls, args: argparse.Namespace) -> int:
        recorder = ManifestRecorder("extract", args)
        source = recorder.read(args.source).read_text(encoding="utf-8") if args.source else BLIND_DOS_SOURCE
        if args.detector in ORACLE_DETECTORS:
            raise ConfigurationError("extraction needs a chat backend: use chat or mock:<file>")

        config = load_backend_config(args)
        backend = LLMGatewayClient.from_spec(args.detector, config)
        linted = extract_description(source, backend, args.samples, config, name=args.name)

        fallback = get_description(args.fallback)
        descriptions: List[AttackDescription] = []
        for item in linted:
            chosen = gate_description(item.description, fallback) if args.gate else item.description
            descriptions.append(chosen.model_copy(update={"group": lint(chosen).group.value}))
            print(f"{item.group.value}\t{item.description.body}")

        recorder.wrote(DescriptionConverter.write_descriptions(args.out, descriptions))
        return cls._finish(recorder, args, args.out)

    @classmethod
    def handlers(cls) -> Dict[str, Callable[[argparse.Namespace], int]]:
        return {
            "gen": cls.gen,
            "inject": cls.inject,
            "mutate": cls.mutate,
            "run": cls.run,
            "sweep": cls.sweep,
            "lint": cls.lint,
            "study": cls.study,
            "report": cls.report,
            "extract": cls.extract,
        }

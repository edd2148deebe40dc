import argparse
import logging
import sys
from typing import List, Optional

from l3_anomaly_platform.cli.command_controller import CommandController
from l3_anomaly_platform.core.models.evaluation_models import DEFAULT_BOUND_MS
from l3_anomaly_platform.core.models.prompt_models import PromptMode
from l3_anomaly_platform.core.observability.observability_facade import configure_facade, reset_facade
from l3_anomaly_platform.core.observability.provider.otel_provider import OpenTelemetryProvider
from l3_anomaly_platform.service.evaluation.confusion import UnclassifiedPolicy
from l3_anomaly_platform.service.evaluation.rank_statistics import DEFAULT_RESAMPLES
from l3_anomaly_platform.service.prompting.attack_catalog import CATALOG
from l3_anomaly_platform.service.sdl_sim.attack_injector import DEFAULT_MIN_GAP

SERVICE_NAME = "l3-anomaly"


def _add_backend_flags(parser: argparse.ArgumentParser, default_detector: str = "oracle") -> None:
    parser.add_argument("--detector", default=default_detector,
                        help="oracle | oracle-noprev | mock:<replay.jsonl> | chat")
    parser.add_argument("--config", help="JSON backend configuration file")
    parser.add_argument("--endpoint", help="chat-completion base URL")
    parser.add_argument("--model", help="model identifier sent to the backend")
    parser.add_argument("--max-tokens", type=int, dest="max_tokens", help="max output tokens per call")
    parser.add_argument("--max-in-flight", type=int, dest="max_in_flight", help="concurrent backend requests")
    parser.add_argument("--explain", action="store_true", help="ask Anomalous verdicts for a short reason")


def _add_history_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--no-prev", action="store_true", dest="no_prev",
                        help="leave out the previous message sharing the new record's TMSI")


def _add_detection_flags(parser: argparse.ArgumentParser) -> None:
    _add_backend_flags(parser)
    _add_history_flag(parser)
    parser.add_argument("--trace", required=True, help="trace file (.jsonl or .csv)")
    parser.add_argument("--mode", default=PromptMode.ZERO_SHOT.value, choices=[mode.value for mode in PromptMode])
    parser.add_argument("--desc", help="JSON-lines description file; the first entry is used")
    parser.add_argument("--attack", default="blind-dos", choices=sorted(CATALOG),
                        help="built-in description used when --desc is absent")
    parser.add_argument("--bound-ms", type=float, default=DEFAULT_BOUND_MS, dest="bound_ms")
    parser.add_argument("--unclassified-policy", default=UnclassifiedPolicy.EXCLUDE.value,
                        choices=[policy.value for policy in UnclassifiedPolicy], dest="unclassified_policy")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=SERVICE_NAME,
        description="Blind DoS detection over RRC/NAS telemetry with natural-language attack descriptions.",
    )
    parser.add_argument("--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--manifest", help="manifest path (default: next to the main output)")
    commands = parser.add_subparsers(dest="command", required=True)
    handlers = CommandController.handlers()

    gen = commands.add_parser("gen", help="generate a shuffled benign trace")
    gen.add_argument("--ues", type=int, default=4)
    gen.add_argument("--sessions", type=int, default=23, help="sessions per UE")
    gen.add_argument("--records", type=int, help="truncate the shuffled trace to this many records")
    gen.add_argument("--reuse-tmsi", action="store_true", dest="reuse_tmsi",
                     help="later sessions present the TMSI assigned by the previous one")
    gen.add_argument("--seed", type=int, default=1)
    gen.add_argument("--out", required=True)

    inject = commands.add_parser("inject", help="insert spoofed RRCSetupRequests")
    inject.add_argument("--trace", required=True)
    inject.add_argument("--count", type=int, default=20)
    inject.add_argument("--min-gap", type=int, default=DEFAULT_MIN_GAP, dest="min_gap")
    inject.add_argument("--seed", type=int, default=1)
    inject.add_argument("--out", required=True)

    mutate = commands.add_parser("mutate", help="disguise message names with hypoglyphs")
    mutate.add_argument("--trace", required=True)
    mutate.add_argument("--positions", help="comma-separated seqs to mutate")
    mutate.add_argument("--attacks", type=int, default=2, help="random Blind DoS records to mutate")
    mutate.add_argument("--benign", type=int, default=3, help="random benign RRCSetupRequests to mutate")
    mutate.add_argument("--seed", type=int, default=1)
    mutate.add_argument("--out", required=True)

    run = commands.add_parser("run", help="detect at one window size")
    _add_detection_flags(run)
    run.add_argument("--w", type=int, default=1)
    run.add_argument("--poll-batch", type=int, dest="poll_batch",
                     help="feed records through the SDL store in batches of this size")
    run.add_argument("--dump-windows", dest="dump_windows", help="write formatted windows as JSON-lines")
    run.add_argument("--mark-previous", action="store_true", dest="mark_previous",
                     help="also mark the previous-message line as new")
    run.add_argument("--out", help="per-window results (JSON-lines)")

    sweep = commands.add_parser("sweep", help="detect over a range of window sizes")
    _add_detection_flags(sweep)
    sweep.add_argument("--w-range", default="1..10", dest="w_range")
    sweep.add_argument("--out", required=True, help="CSV path; .json and .dat are written alongside")

    lint = commands.add_parser("lint", help="predicate coverage and alignment group of descriptions")
    lint.add_argument("--desc", help="JSON-lines description file")
    lint.add_argument("--attack", default="blind-dos", choices=sorted(CATALOG))
    lint.add_argument("--complete", action="store_true", help="lint after completing missing predicates")
    lint.add_argument("--out", help="write descriptions annotated with their group")

    study = commands.add_parser("study", help="description sensitivity study at w=1")
    _add_backend_flags(study)
    study.add_argument("--trace", required=True)
    study.add_argument("--desc", required=True)
    study.add_argument("--mode", default=PromptMode.ZERO_SHOT.value, choices=[mode.value for mode in PromptMode])
    _add_history_flag(study)
    study.add_argument("--resamples", type=int, default=DEFAULT_RESAMPLES)
    study.add_argument("--seed", type=int, default=0)
    study.add_argument("--no-complete", action="store_true", dest="no_complete",
                       help="skip the completed-description rerun")
    study.add_argument("--unclassified-policy", default=UnclassifiedPolicy.EXCLUDE.value,
                       choices=[policy.value for policy in UnclassifiedPolicy], dest="unclassified_policy")
    study.add_argument("--out-dir", required=True, dest="out_dir")

    report = commands.add_parser("report", help="render CSV/JSON/.dat reports")
    report.add_argument("--sweep", help="sweep JSON (or a run summary JSON)")
    report.add_argument("--study", help="study JSON")
    report.add_argument("--latency", action="append", help="NAME=results.jsonl, repeatable")
    report.add_argument("--bound-ms", type=float, default=DEFAULT_BOUND_MS, dest="bound_ms")
    report.add_argument("--out-dir", required=True, dest="out_dir")

    extract = commands.add_parser("extract", help="generate attack descriptions with a chat backend")
    _add_backend_flags(extract, default_detector="chat")
    extract.add_argument("--source", help="attack report text file (default: built-in Blind DoS prose)")
    extract.add_argument("--name", default="Blind DoS")
    extract.add_argument("--samples", type=int, default=25)
    extract.add_argument("--gate", action="store_true", help="replace weakly aligned outputs by --fallback")
    extract.add_argument("--fallback", default="blind-dos-detailed", choices=sorted(CATALOG))
    extract.add_argument("--out", required=True)

    for name, sub in (("gen", gen), ("inject", inject), ("mutate", mutate), ("run", run), ("sweep", sweep),
                      ("lint", lint), ("study", study), ("report", report), ("extract", extract)):
        sub.set_defaults(handler=handlers[name])
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    provider = OpenTelemetryProvider(SERVICE_NAME, log_level=getattr(logging, args.log_level))
    configure_facade(SERVICE_NAME, provider)
    try:
        return args.handler(args)
    finally:
        provider.shutdown()
        reset_facade()


if __name__ == "__main__":
    sys.exit(main())

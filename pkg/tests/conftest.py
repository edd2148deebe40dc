import os
import sys
from pathlib import Path
from typing import List

import pytest

# Add the source directory to the path so we can import the modules
sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from l3_anomaly_platform.core.formatter.record_formatter import RecordFormatter
from l3_anomaly_platform.core.models.l3_models import GroundTruth, L3Message, RecordView, TelemetryRecord
from l3_anomaly_platform.core.models.window_models import DetectionWindow
from l3_anomaly_platform.core.observability.observability_facade import reset_facade
from l3_anomaly_platform.service.sdl_sim.attack_injector import inject_blind_dos
from l3_anomaly_platform.service.sdl_sim.session_generator import generate_ue_traces
from l3_anomaly_platform.service.sdl_sim.trace_mixer import interleave_shuffle

FIXTURES = Path(__file__).parent / "fixtures"

# Acceptance dataset shape: 996 benign records plus 20 injected attacks.
BENIGN_RECORDS = 996
ATTACKS = 20
TRACE_SEED = 1


def build_benign_trace(records: int = BENIGN_RECORDS, seed: int = TRACE_SEED) -> List[TelemetryRecord]:
    per_ue, shuffle_seed = generate_ue_traces(4, 23, seed)
    return interleave_shuffle(per_ue, shuffle_seed)[:records]


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    """Keep backend settings and the global facade from leaking between tests."""
    for name in ("L3_DETECT_ENDPOINT", "L3_DETECT_MODEL", "L3_DETECT_TIMEOUT_S", "L3_DETECT_API_KEY",
                 "OTEL_EXPORTER_OTLP_ENDPOINT"):
        monkeypatch.delenv(name, raising=False)
    reset_facade()
    yield
    reset_facade()


@pytest.fixture(scope="session")
def benign_trace() -> List[TelemetryRecord]:
    return build_benign_trace()


@pytest.fixture(scope="session")
def injected_trace(benign_trace) -> List[TelemetryRecord]:
    """1016-record trace with 20 Blind DoS records at least 10 positions apart."""
    return inject_blind_dos(benign_trace, ATTACKS, min_gap=10, seed=TRACE_SEED)


@pytest.fixture
def reference_window() -> DetectionWindow:
    """RRCSetup (RNTI 26168, TMSI 0) with its RRCSetupRequest as the previous message,
    with the new-message marker on both lines."""
    previous = RecordView(seq=0, msg_type=L3Message.RRC_SETUP_REQUEST, rnti=26168, tmsi=0)
    current = RecordView(seq=1, msg_type=L3Message.RRC_SETUP, rnti=26168, tmsi=0)
    return DetectionWindow(
        new_record=RecordFormatter.format_record(current, is_new=True),
        prev_same_tmsi=RecordFormatter.format_previous(previous, mark_previous=True),
        index=1,
    )


def make_record(msg, rnti: int, tmsi: int, seq: int = 0, ue: str = "ue-1", label: str = "benign") -> TelemetryRecord:
    """Terse record constructor for hand-written traces."""
    return TelemetryRecord(
        seq=seq,
        ue_id=ue,
        msg_type=msg,
        rnti=rnti,
        tmsi=tmsi,
        label=GroundTruth.blind_dos() if label == "blind_dos" else GroundTruth(tag=label),
    )


@pytest.fixture
def record_factory():
    return make_record


@pytest.fixture
def small_attack_trace() -> List[TelemetryRecord]:
    """Victim registers and is assigned TMSI 777; an attacker later presents it with another RNTI."""
    rows = [
        (L3Message.RRC_SETUP_REQUEST, 100, 0, "ue-1", "benign"),
        (L3Message.RRC_SETUP, 100, 0, "ue-1", "benign"),
        (L3Message.REGISTRATION_ACCEPT, 100, 777, "ue-1", "benign"),
        (L3Message.RRC_SETUP_REQUEST, 200, 0, "ue-2", "benign"),
        (L3Message.RRC_SETUP_REQUEST, 300, 777, "attacker-1", "blind_dos"),
        (L3Message.RRC_SETUP, 200, 0, "ue-2", "benign"),
    ]
    return [make_record(msg, rnti, tmsi, seq, ue, label) for seq, (msg, rnti, tmsi, ue, label) in enumerate(rows)]

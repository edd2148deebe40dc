import random
from typing import List, Sequence

from l3_anomaly_platform.core.models.l3_models import TelemetryRecord


def renumber(trace: Sequence[TelemetryRecord]) -> List[TelemetryRecord]:
    return [record.with_seq(seq) for seq, record in enumerate(trace)]


def interleave_shuffle(per_ue_traces: Sequence[Sequence[TelemetryRecord]], seed: int) -> List[TelemetryRecord]:
    """
    Merge per-UE traces into one trace, uniformly over all interleavings, keeping
    each input's internal order. Sequence numbers are reassigned 0..N-1.
    """
    rng = random.Random(seed)
    draws = [source for source, trace in enumerate(per_ue_traces) for _ in trace]
    rng.shuffle(draws)

    cursors = [0] * len(per_ue_traces)
    merged: List[TelemetryRecord] = []
    for source in draws:
        merged.append(per_ue_traces[source][cursors[source]])
        cursors[source] += 1
    return renumber(merged)

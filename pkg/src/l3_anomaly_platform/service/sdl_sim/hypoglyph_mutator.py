import logging
import random
from typing import List, Optional, Sequence

from l3_anomaly_platform.core.converter.trace_converters import MessageTypeConverter
from l3_anomaly_platform.core.exceptions import SelectionError
from l3_anomaly_platform.core.formatter.confusable_formatter import ConfusableFormatter
from l3_anomaly_platform.core.models.evasion_models import HypoglyphMap
from l3_anomaly_platform.core.models.l3_models import L3Message, TelemetryRecord

logger = logging.getLogger(__name__)


def hypoglyph_mutate(
    trace: Sequence[TelemetryRecord],
    selection: Sequence[int],
    hypoglyphs: Optional[HypoglyphMap] = None,
) -> List[TelemetryRecord]:
    """Disguise the message-type text of the records whose seq is in `selection`."""
    hypoglyphs = hypoglyphs or HypoglyphMap.default()
    by_seq = {record.seq: position for position, record in enumerate(trace)}
    unknown = sorted(set(selection) - set(by_seq))
    if unknown:
        raise SelectionError(f"no record with seq {unknown[0]} in trace")

    mutated = list(trace)
    for seq in set(selection):
        position = by_seq[seq]
        record = mutated[position]
        text = ConfusableFormatter.disguise(record.message_text, hypoglyphs)
        mutated[position] = record.model_copy(update={"msg_type": MessageTypeConverter.canonicalize(text)})

    logger.info("Mutated %d of %d records", len(set(selection)), len(trace))
    return mutated


def select_for_evasion(
    trace: Sequence[TelemetryRecord],
    attacks: int,
    benign: int,
    seed: int,
) -> List[int]:
    """Seqs of `attacks` Blind DoS records and `benign` benign RRCSetupRequests, chosen at random."""
    attack_seqs = [record.seq for record in trace if record.label.is_blind_dos]
    benign_seqs = [
        record.seq for record in trace
        if record.label.is_benign and record.msg_type == L3Message.RRC_SETUP_REQUEST
    ]
    if attacks > len(attack_seqs) or benign > len(benign_seqs):
        raise SelectionError(
            f"asked for {attacks} attack and {benign} benign records, trace has "
            f"{len(attack_seqs)} and {len(benign_seqs)}"
        )

    rng = random.Random(seed)
    return sorted(rng.sample(attack_seqs, attacks) + rng.sample(benign_seqs, benign))

import logging
import random
from collections import defaultdict
from typing import Dict, List, Sequence, Set

from l3_anomaly_platform.core.exceptions import InjectionCapacityError
from l3_anomaly_platform.core.models.l3_models import (
    RNTI_MAX,
    TMSI_UNASSIGNED,
    GroundTruth,
    L3Message,
    TelemetryRecord,
)
from l3_anomaly_platform.service.sdl_sim.trace_mixer import renumber

logger = logging.getLogger(__name__)

DEFAULT_MIN_GAP = 10
MAX_PLACEMENT_ATTEMPTS = 1000

_BINDING_TYPES = {L3Message.REGISTRATION_ACCEPT, L3Message.RRC_SETUP_REQUEST}


def binding_index(trace: Sequence[TelemetryRecord]) -> Dict[int, int]:
    """TMSI -> position of the first record that binds it (RegistrationAccept or
    an RRCSetupRequest presenting it)."""
    bindings: Dict[int, int] = {}
    for position, record in enumerate(trace):
        if record.tmsi == TMSI_UNASSIGNED or record.tmsi in bindings:
            continue
        if record.msg_type in _BINDING_TYPES:
            bindings[record.tmsi] = position
    return bindings


def _attacker_rnti(rng: random.Random, taken: Set[int]) -> int:
    while True:
        rnti = rng.randint(1, RNTI_MAX)
        if rnti not in taken:
            return rnti


def _place(
    rng: random.Random,
    victim_bindings: List[int],
    length: int,
    min_gap: int,
) -> List[int]:
    """
    Pick one insertion index per victim (insert before that original index).

    Consecutive insertions end up at least `min_gap` apart in the output, and at
    least `min_gap - 1` original records follow the last one. Victims are given in
    binding order and each insertion lands strictly after its victim's binding.
    """
    count = len(victim_bindings)
    spacing = max(min_gap - 1, 0)
    low = max(victim_bindings[0] + 1, spacing)
    # Shifting slot i down by spacing*i turns the gap constraint into distinctness.
    high = length - spacing - spacing * (count - 1)
    if high - low + 1 < count:
        raise InjectionCapacityError(
            f"a trace of {length} records cannot hold {count} attacks {min_gap} positions apart"
        )

    for _ in range(MAX_PLACEMENT_ATTEMPTS):
        slots = sorted(rng.sample(range(low, high + 1), count))
        slots = [slot + spacing * i for i, slot in enumerate(slots)]
        if all(binding < slot for binding, slot in zip(victim_bindings, slots)):
            return slots

    raise InjectionCapacityError(
        f"could not place {count} attacks after their victims' bindings in {MAX_PLACEMENT_ATTEMPTS} attempts"
    )


def inject_blind_dos(
    trace: Sequence[TelemetryRecord],
    count: int,
    min_gap: int = DEFAULT_MIN_GAP,
    seed: int = 0,
) -> List[TelemetryRecord]:
    """
    Insert `count` spoofed RRCSetupRequests labeled blind_dos.

    Each one carries the TMSI of a distinct victim bound earlier in the trace and a
    random RNTI the victim never used. Victims are drawn without replacement.
    """
    if count < 0 or min_gap < 0:
        raise InjectionCapacityError("count and min_gap must be non-negative")
    if count == 0:
        return renumber(trace)

    bindings = binding_index(trace)
    if len(bindings) < count:
        raise InjectionCapacityError(f"trace binds {len(bindings)} TMSIs, {count} attacks requested")

    rntis_by_tmsi: Dict[int, Set[int]] = defaultdict(set)
    for record in trace:
        rntis_by_tmsi[record.tmsi].add(record.rnti)

    rng = random.Random(seed)
    victims = sorted(rng.sample(sorted(bindings), count), key=bindings.__getitem__)
    slots = _place(rng, [bindings[victim] for victim in victims], len(trace), min_gap)

    inserts: Dict[int, List[TelemetryRecord]] = defaultdict(list)
    for attack_no, (victim, slot) in enumerate(zip(victims, slots), start=1):
        inserts[slot].append(TelemetryRecord(
            ue_id=f"attacker-{attack_no}",
            msg_type=L3Message.RRC_SETUP_REQUEST,
            rnti=_attacker_rnti(rng, rntis_by_tmsi[victim]),
            tmsi=victim,
            label=GroundTruth.blind_dos(),
        ))

    augmented: List[TelemetryRecord] = []
    for position in range(len(trace) + 1):
        augmented.extend(inserts.get(position, ()))
        if position < len(trace):
            augmented.append(trace[position])

    logger.info("Injected %d Blind DoS records into a %d-record trace", count, len(trace))
    return renumber(augmented)

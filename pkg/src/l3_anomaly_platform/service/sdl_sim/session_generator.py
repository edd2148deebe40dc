import logging
import random
from enum import Enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from l3_anomaly_platform.core.models.l3_models import (
    RNTI_MAX,
    TMSI_MAX,
    TMSI_UNASSIGNED,
    GroundTruth,
    L3Message,
    TelemetryRecord,
)

logger = logging.getLogger(__name__)


class IdentityBinding(str, Enum):
    CARRY = "carry"    # keep the session's current TMSI (prior TMSI or 0)
    ASSIGN = "assign"  # network hands out the TMSI the UE keeps afterwards


class SessionTemplate(BaseModel):
    """Ordered message steps of one benign initial-access + registration flow."""
    model_config = ConfigDict(frozen=True)

    steps: Tuple[Tuple[L3Message, IdentityBinding], ...]

    @model_validator(mode="after")
    def _check_shape(self) -> "SessionTemplate":
        if not self.steps or self.steps[0][0] != L3Message.RRC_SETUP_REQUEST:
            raise ValueError("a session must start with RRCSetupRequest")
        assigning = [message for message, binding in self.steps if binding == IdentityBinding.ASSIGN]
        if assigning != [L3Message.REGISTRATION_ACCEPT]:
            raise ValueError("RegistrationAccept must be the only step assigning a TMSI")
        return self


# NAS security mode runs before RRC security mode, as in a typical SA registration.
DEFAULT_TEMPLATE = SessionTemplate(steps=(
    (L3Message.RRC_SETUP_REQUEST, IdentityBinding.CARRY),
    (L3Message.RRC_SETUP, IdentityBinding.CARRY),
    (L3Message.RRC_SETUP_COMPLETE, IdentityBinding.CARRY),
    (L3Message.REGISTRATION_REQUEST, IdentityBinding.CARRY),
    (L3Message.AUTHENTICATION_REQUEST, IdentityBinding.CARRY),
    (L3Message.AUTHENTICATION_RESPONSE, IdentityBinding.CARRY),
    (L3Message.NAS_SECURITY_MODE_COMMAND, IdentityBinding.CARRY),
    (L3Message.NAS_SECURITY_MODE_COMPLETE, IdentityBinding.CARRY),
    (L3Message.RRC_SECURITY_MODE_COMMAND, IdentityBinding.CARRY),
    (L3Message.RRC_SECURITY_MODE_COMPLETE, IdentityBinding.CARRY),
    (L3Message.REGISTRATION_ACCEPT, IdentityBinding.ASSIGN),
))


def generate_session(
    ue: str,
    prior_tmsi: Optional[int] = None,
    seed: int = 0,
    template: SessionTemplate = DEFAULT_TEMPLATE,
) -> List[TelemetryRecord]:
    """
    Emit one benign session for `ue`. All records share a fresh random RNTI.

    A UE that already holds `prior_tmsi` presents it from the RRCSetupRequest on and
    keeps it; otherwise it starts at TMSI 0 and RegistrationAccept assigns a fresh
    nonzero TMSI.
    """
    rng = random.Random(seed)
    rnti = rng.randint(1, RNTI_MAX)
    current = prior_tmsi if prior_tmsi else TMSI_UNASSIGNED

    records: List[TelemetryRecord] = []
    for message, binding in template.steps:
        if binding == IdentityBinding.ASSIGN and current == TMSI_UNASSIGNED:
            current = rng.randint(1, TMSI_MAX)
        records.append(TelemetryRecord(
            seq=len(records),
            ue_id=ue,
            msg_type=message,
            rnti=rnti,
            tmsi=current,
            label=GroundTruth.benign(),
        ))
    return records


def generate_ue_traces(
    ues: int,
    sessions_per_ue: int,
    seed: int,
    reuse_tmsi: bool = False,
) -> Tuple[List[List[TelemetryRecord]], int]:
    """
    Sessions for `ues` devices, one ordered list per UE, plus a derived shuffle seed.

    With `reuse_tmsi` a UE's later sessions start from the TMSI its previous session
    was assigned; by default every session registers from scratch.
    """
    rng = random.Random(seed)
    per_ue: List[List[TelemetryRecord]] = []
    for ue_index in range(1, ues + 1):
        ue = f"ue-{ue_index}"
        trace: List[TelemetryRecord] = []
        prior: Optional[int] = None
        for _ in range(sessions_per_ue):
            session = generate_session(ue, prior if reuse_tmsi else None, rng.getrandbits(64))
            prior = session[-1].tmsi
            trace.extend(session)
        per_ue.append(trace)

    logger.info("Generated %d sessions for %d UEs", ues * sessions_per_ue, ues)
    return per_ue, rng.getrandbits(64)

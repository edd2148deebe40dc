from enum import Enum
from typing import Annotated, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

##############################################################################
# Layer-3 identifiers. Widths follow the 3GPP fields: RNTI is 16-bit and the
# 5G-TMSI we keep is 32-bit. TMSI 0 means "no reusable identity yet".
##############################################################################

RNTI_MAX = 0xFFFF
TMSI_MAX = 0xFFFFFFFF
TMSI_UNASSIGNED = 0

Rnti = Annotated[int, Field(ge=0, le=RNTI_MAX)]
Tmsi = Annotated[int, Field(ge=0, le=TMSI_MAX)]


class L3Message(str, Enum):
    """Canonical RRC/NAS message names seen during initial access and registration."""
    RRC_SETUP_REQUEST = "RRCSetupRequest"
    RRC_SETUP = "RRCSetup"
    RRC_SETUP_COMPLETE = "RRCSetupComplete"
    REGISTRATION_REQUEST = "RegistrationRequest"
    AUTHENTICATION_REQUEST = "AuthenticationRequest"
    AUTHENTICATION_RESPONSE = "AuthenticationResponse"
    NAS_SECURITY_MODE_COMMAND = "NAS_SecurityModeCommand"
    NAS_SECURITY_MODE_COMPLETE = "NAS_SecurityModeComplete"
    RRC_SECURITY_MODE_COMMAND = "RRC_SecurityModeCommand"
    RRC_SECURITY_MODE_COMPLETE = "RRC_SecurityModeComplete"
    REGISTRATION_ACCEPT = "RegistrationAccept"


CANONICAL_NAMES = frozenset(member.value for member in L3Message)


class OtherMessage(BaseModel):
    """Escape hatch for message names outside the canonical set (other attacks, evasion text)."""
    model_config = ConfigDict(frozen=True)

    text: str = Field(min_length=1)

    @field_validator("text")
    @classmethod
    def _not_canonical(cls, value: str) -> str:
        if value in CANONICAL_NAMES:
            raise ValueError(f"'{value}' is a canonical message name, use L3Message instead")
        return value


MessageType = Union[L3Message, OtherMessage]


def render_message_type(msg_type: MessageType) -> str:
    """Text form of a message type; Other types are returned verbatim."""
    if isinstance(msg_type, L3Message):
        return msg_type.value
    return msg_type.text


class GroundTruth(BaseModel):
    """Ground-truth tag of a record: benign, blind_dos or the name of another attack."""
    model_config = ConfigDict(frozen=True)

    tag: str = Field(min_length=1)

    @classmethod
    def benign(cls) -> "GroundTruth":
        return cls(tag="benign")

    @classmethod
    def blind_dos(cls) -> "GroundTruth":
        return cls(tag="blind_dos")

    @classmethod
    def other_attack(cls, name: str) -> "GroundTruth":
        if not name or not name.strip():
            raise ValueError("attack name must be nonempty")
        return cls(tag=name.strip())

    @property
    def is_benign(self) -> bool:
        return self.tag == "benign"

    @property
    def is_blind_dos(self) -> bool:
        return self.tag == "blind_dos"

    @property
    def is_attack(self) -> bool:
        return not self.is_benign


class RecordView(BaseModel):
    """Label-stripped projection of a record. This is all a detector ever sees."""
    model_config = ConfigDict(frozen=True)

    seq: int = Field(ge=0)
    msg_type: MessageType
    rnti: Rnti
    tmsi: Tmsi

    @property
    def message_text(self) -> str:
        return render_message_type(self.msg_type)


class TelemetryRecord(BaseModel):
    """One RRC/NAS observation as stored in the SDL, with simulation-only metadata."""
    model_config = ConfigDict(frozen=True)

    seq: int = Field(default=0, ge=0)
    ue_id: str
    msg_type: MessageType
    rnti: Rnti
    tmsi: Tmsi
    label: GroundTruth = Field(default_factory=GroundTruth.benign)

    @property
    def message_text(self) -> str:
        return render_message_type(self.msg_type)

    def view(self) -> RecordView:
        return RecordView(seq=self.seq, msg_type=self.msg_type, rnti=self.rnti, tmsi=self.tmsi)

    def with_seq(self, seq: int) -> "TelemetryRecord":
        return self.model_copy(update={"seq": seq})

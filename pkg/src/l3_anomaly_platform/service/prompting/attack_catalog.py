from typing import Dict

from l3_anomaly_platform.core.exceptions import ConfigurationError
from l3_anomaly_platform.core.models.prompt_models import AttackDescription

BLIND_DOS = "Blind DoS"

# Short form, the default description slotted into detection prompts.
BLIND_DOS_SHORT = AttackDescription(
    name=BLIND_DOS,
    body=(
        "The adversary sends a RRCSetupRequest using a TMSI value of an existing connection "
        "and a new RNTI value."
    ),
)

BLIND_DOS_DETAILED = AttackDescription(
    name=BLIND_DOS,
    body=(
        "The adversary assumes the victim's TMSI, sends a RRCSetupRequest to the base station, "
        "and the base station, without integrity protection, deletes the victim's RRC security "
        "context due to the impersonation of the victim UE, thus disconnecting the victim from the network."
    ),
)

NULL_CIPHER = AttackDescription(
    name="Null Cipher",
    body=(
        "The network answers a registration with a SecurityModeCommand that selects the null "
        "ciphering algorithm, so all following NAS and RRC messages of that UE travel unencrypted."
    ),
)

DOWNLINK_IMSI_EXTRACTOR = AttackDescription(
    name="Downlink IMSI Extractor",
    body=(
        "The adversary sends an IdentityRequest for the permanent identity before security is "
        "established, and the UE answers with its IMSI in plain text."
    ),
)

CATALOG: Dict[str, AttackDescription] = {
    "blind-dos": BLIND_DOS_SHORT,
    "blind-dos-detailed": BLIND_DOS_DETAILED,
    "null-cipher": NULL_CIPHER,
    "dimsi": DOWNLINK_IMSI_EXTRACTOR,
}

# Attack report prose handed to the extraction agent when no source file is given.
BLIND_DOS_SOURCE: str = (
    "During the RRC connection establishment a UE that already holds a 5G-TMSI includes it in its "
    "RRCSetupRequest so the network can find its context. The RRCSetupRequest is sent before any "
    "security context is active and therefore carries no integrity protection. An adversary that has "
    "learned the TMSI of a connected victim can send its own RRCSetupRequest containing that TMSI from "
    "a different radio connection, which receives a new RNTI. The base station treats the request as "
    "coming from the victim, releases the victim's existing RRC connection and deletes its security "
    "context. The victim is silently disconnected and has to re-register, without noticing the attack."
)


def get_description(key: str) -> AttackDescription:
    try:
        return CATALOG[key]
    except KeyError:
        raise ConfigurationError(f"unknown attack '{key}', choose from {', '.join(sorted(CATALOG))}")

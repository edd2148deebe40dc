import re
from typing import List

from l3_anomaly_platform.core.models.prompt_models import (
    AttackDescription,
    ChatMessage,
    ChatRole,
    PromptBundle,
    PromptMode,
)
from l3_anomaly_platform.core.models.window_models import DetectionWindow

PREAMBLE: str = "You are an expert anomaly detecting assistant in the 5G context."
ATTACK_LINE: str = "You know about the {name} attack, where {clause}."
FRAMING: str = "You are given a set of messages between a gNB and multiple UEs in chronological order."
TASK_LINE: str = (
    "Based on the understanding of the given attack, you will need to determine whether the "
    "following message sequence contains a {name} attack or not."
)
VERDICT_ONLY: str = "Remember, you must either say 'Normal' or 'Anomalous' without any explanation."
VERDICT_WITH_REASON: str = (
    "Remember, you must either say 'Normal' or 'Anomalous'. If the sequence is 'Anomalous', "
    "also give a concise explanation of the reason."
)

PREVIOUS_MESSAGE: str = "Previous message: {text}"

GENERIC_COT: str = "Let's think step by step"
CUSTOM_COT: str = "\n".join([
    GENERIC_COT,
    "Step 1: Check explicitly if an RRCSetupRequest message exists (mandatory for Blind DoS attack detection).",
    "Step 2: Note the TMSI value used in this RRCSetupRequest.",
    "Step 3: Check if a previous RRCSetupRequest (or subsequent message) exists with the same TMSI but a different RNTI.",
    "Step 4: Classify the sequence explicitly as Anomalous if Step 3 condition is met and explain the reason. "
    "Otherwise classify as Normal.",
])

_TITLE_WORD = re.compile(r"^[A-Z][a-z]*\b")


def description_clause(body: str) -> str:
    """Fit a sentence-style body into "... attack, where <clause>."

    The first word is lower-cased only when it is an ordinary capitalised word,
    so acronyms such as RRCSetupRequest or TMSI keep their case.
    """
    clause = body.strip().rstrip(".").rstrip()
    if _TITLE_WORD.match(clause):
        clause = clause[0].lower() + clause[1:]
    return clause


def build_system_prompt(description: AttackDescription, explanation_enabled: bool = False) -> str:
    return "\n".join([
        PREAMBLE,
        ATTACK_LINE.format(name=description.name, clause=description_clause(description.body)),
        FRAMING,
        TASK_LINE.format(name=description.name),
        VERDICT_WITH_REASON if explanation_enabled else VERDICT_ONLY,
    ])


def build_prompt(
    window: DetectionWindow,
    description: AttackDescription,
    mode: PromptMode = PromptMode.ZERO_SHOT,
    explanation_enabled: bool = False,
    include_previous: bool = True,
) -> PromptBundle:
    """Assemble the role-tagged detection prompt for one window.

    Only formatted record text reaches the bundle; window labels stay behind.
    With `include_previous` off the "Previous message" turn is never sent, so
    the model sees only the records inside the window.
    """
    messages: List[ChatMessage] = [
        ChatMessage(role=ChatRole.SYSTEM, content=build_system_prompt(description, explanation_enabled)),
    ]
    if include_previous and window.prev_same_tmsi is not None:
        messages.append(ChatMessage(
            role=ChatRole.USER,
            content=PREVIOUS_MESSAGE.format(text=window.prev_same_tmsi.text),
        ))
    messages.append(ChatMessage(
        role=ChatRole.USER,
        content="\n".join(record.text for record in window.records),
    ))

    if mode == PromptMode.GENERIC_COT:
        messages.append(ChatMessage(role=ChatRole.ASSISTANT, content=GENERIC_COT))
    elif mode == PromptMode.CUSTOM_COT:
        messages.append(ChatMessage(role=ChatRole.ASSISTANT, content=CUSTOM_COT))

    return PromptBundle(messages=tuple(messages))

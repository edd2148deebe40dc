import logging
import re
from typing import Dict, List, Optional, Pattern

from l3_anomaly_platform.core.models.prompt_models import (
    AlignmentGroup,
    AttackDescription,
    LintedDescription,
    PredicateCoverage,
)

logger = logging.getLogger(__name__)

_FLAGS = re.IGNORECASE

_IDENTITY_NOUNS = r"(?:connection|ue|device|user|session|subscriber|phone|handset)s?"
_IN_USE = r"(?:existing|in[- ]use|active|ongoing|legitimate|established|already[- ]assigned|connected)"
_NEGATION = r"(?:without|lacks?|lacking|absen\w*|no|missing|not|unprotected)"

##############################################################################
# Case-insensitive lexicon per predicate. A predicate holds if any pattern of
# its family matches; P5 is judged per sentence.
##############################################################################

PREDICATE_LEXICON: Dict[str, List[Pattern[str]]] = {
    "p1": [re.compile(r"rrc[\s_-]*setup[\s_-]*request", _FLAGS)],
    "p2": [
        re.compile(r"\btmsis?\b", _FLAGS),
        re.compile(r"\btemporary\s+(?:mobile\s+)?(?:subscriber\s+)?ident\w*", _FLAGS),
        re.compile(r"\b(?:5g-)?guti\b", _FLAGS),
    ],
    "p3": [
        re.compile(r"\bvictim", _FLAGS),
        re.compile(rf"\b{_IN_USE}\W+(?:\w+\W+){{0,2}}?{_IDENTITY_NOUNS}\b", _FLAGS),
        re.compile(r"\b(?:in[- ]use|already[- ]assigned)\s+(?:5g-)?tmsi", _FLAGS),
    ],
    "p4": [re.compile(r"\b(?:spoof\w*|impersonat\w*|re-?us\w*|assum\w*|hijack\w*)", _FLAGS)],
    "p6": [
        re.compile(rf"\b{_NEGATION}\W+(?:\w+\W+){{0,3}}?integrity[\s-]+protect\w*", _FLAGS),
        re.compile(r"\bintegrity[\s-]+protect\w*\W+(?:\w+\W+){0,2}?(?:absent|missing|lacking|disabled)\b", _FLAGS),
        re.compile(r"\bunprotected\b", _FLAGS),
    ],
}

_RNTI = re.compile(r"\brntis?\b", _FLAGS)
_RNTI_CHANGE = re.compile(r"\b(?:new|different|differs?|differing|distinct|another|fresh|random)\b", _FLAGS)
_SENTENCE_END = re.compile(r"(?<=[.!?])\s+")

# Appended for each of P1-P4 a description misses.
COMPLETION_CLAUSES: Dict[str, str] = {
    "p1": "The attack is triggered by an RRCSetupRequest message.",
    "p2": "The RRCSetupRequest carries a TMSI.",
    "p3": "The TMSI is already bound to an existing connection of a legitimate victim UE.",
    "p4": "The attacker spoofs/reuses this TMSI to impersonate the victim.",
}

DEPLOYABLE_GROUPS = (AlignmentGroup.DIRECTLY, AlignmentGroup.CLOSELY)


def lint_description(body: str) -> PredicateCoverage:
    found = {name: any(pattern.search(body) for pattern in patterns) for name, patterns in PREDICATE_LEXICON.items()}
    found["p5"] = any(
        _RNTI.search(sentence) and _RNTI_CHANGE.search(sentence)
        for sentence in _SENTENCE_END.split(body)
    )
    return PredicateCoverage(**found)


def classify_alignment(coverage: PredicateCoverage) -> AlignmentGroup:
    """Most specific group, checked in order Directly, Closely, Somewhat. P5 never counts."""
    c = coverage
    if c.p1 and c.p2 and c.p3 and c.p4:
        return AlignmentGroup.DIRECTLY
    if c.p1 and c.p2 and (c.p3 or c.p4):
        return AlignmentGroup.CLOSELY
    if c.p1 and (c.p2 or c.p3 or c.p4 or c.p6):
        return AlignmentGroup.SOMEWHAT
    return AlignmentGroup.NOT


def lint(description: AttackDescription) -> LintedDescription:
    coverage = lint_description(description.body)
    return LintedDescription(description=description, coverage=coverage, group=classify_alignment(coverage))


def complete_description(
    description: AttackDescription,
    coverage: Optional[PredicateCoverage] = None,
) -> AttackDescription:
    """Append the canonical clause for every missing predicate among P1-P4."""
    coverage = coverage or lint_description(description.body)
    missing = [name for name in COMPLETION_CLAUSES if not getattr(coverage, name)]
    if not missing:
        return description

    body = description.body.rstrip()
    if body and body[-1] not in ".!?":
        body += "."
    body = " ".join([body, *(COMPLETION_CLAUSES[name] for name in missing)]).strip()
    return description.model_copy(update={"body": body})


def gate_description(candidate: AttackDescription, fallback: AttackDescription) -> AttackDescription:
    """Keep `candidate` only if it is Directly or Closely aligned, else use `fallback`."""
    group = lint(candidate).group
    if group in DEPLOYABLE_GROUPS:
        return candidate
    logger.warning("Description '%s' is %s aligned; falling back to '%s'", candidate.name, group.value, fallback.name)
    return fallback

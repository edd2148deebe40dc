import re
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

######################################################
# Chat messages and the role-tagged bundle we send to a
# chat-completion backend. Serving-layer chat tokens are
# the transport's business and never appear in here.
######################################################

_TEMPLATE_TOKEN = re.compile(r"<\|[^|<>]*\|>")
_ROLE_MARKER = re.compile(r"^\s*(system|user|assistant)\s*:", re.IGNORECASE | re.MULTILINE)


class ChatRole(str, Enum):
    SYSTEM = "system"
    USER = "user"
    ASSISTANT = "assistant"


class ChatMessage(BaseModel):
    model_config = ConfigDict(frozen=True)

    role: ChatRole
    content: str


class PromptBundle(BaseModel):
    """Ordered system/user/assistant turns for one detection request."""
    model_config = ConfigDict(frozen=True)

    messages: Tuple[ChatMessage, ...]

    @model_validator(mode="after")
    def _single_leading_system(self) -> "PromptBundle":
        if not self.messages or self.messages[0].role != ChatRole.SYSTEM:
            raise ValueError("a prompt bundle must start with a system message")
        if sum(1 for message in self.messages if message.role == ChatRole.SYSTEM) != 1:
            raise ValueError("a prompt bundle must contain exactly one system message")
        return self

    @property
    def system(self) -> str:
        return self.messages[0].content

    def turns(self, role: ChatRole) -> List[str]:
        return [message.content for message in self.messages if message.role == role]

    def to_chat_messages(self) -> List[Dict[str, str]]:
        """The `messages` array of the chat-completion wire format."""
        return [{"role": message.role.value, "content": message.content} for message in self.messages]


class PromptMode(str, Enum):
    ZERO_SHOT = "zeroshot"
    GENERIC_COT = "generic-cot"
    CUSTOM_COT = "custom-cot"


class AttackDescription(BaseModel):
    """Natural-language description slotted into the detection prompt."""
    model_config = ConfigDict(frozen=True)

    name: str = Field(default="Blind DoS", min_length=1)
    body: str = Field(min_length=1)
    group: Optional[str] = None

    @field_validator("body")
    @classmethod
    def _clean_body(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("description body must not be blank")
        if _TEMPLATE_TOKEN.search(value) or _ROLE_MARKER.search(value):
            raise ValueError("description body must not contain role markers or chat template tokens")
        return value

    @property
    def word_count(self) -> int:
        return len(self.body.split())


##########################################################################
# Predicate coverage of a description. P5 is tracked but never used for
# grouping; the five "core" predicates are P1-P4 and P6.
##########################################################################

class PredicateCoverage(BaseModel):
    model_config = ConfigDict(frozen=True)

    p1: bool = False  # trigger message named
    p2: bool = False  # TMSI mentioned
    p3: bool = False  # TMSI bound to a legitimate/victim UE
    p4: bool = False  # spoofing / impersonation / reuse
    p5: bool = False  # RNTI differs
    p6: bool = False  # missing integrity protection

    @classmethod
    def from_names(cls, names: Any) -> "PredicateCoverage":
        return cls(**{name.lower(): True for name in names})

    def satisfied(self) -> List[str]:
        return [name.upper() for name, value in self.model_dump().items() if value]

    @property
    def core_count(self) -> int:
        return sum((self.p1, self.p2, self.p3, self.p4, self.p6))

    @property
    def completes_directly(self) -> bool:
        return self.p1 and self.p2 and self.p3 and self.p4


class AlignmentGroup(str, Enum):
    DIRECTLY = "Directly"
    CLOSELY = "Closely"
    SOMEWHAT = "Somewhat"
    NOT = "Not"


class LintedDescription(BaseModel):
    model_config = ConfigDict(frozen=True)

    description: AttackDescription
    coverage: PredicateCoverage
    group: AlignmentGroup

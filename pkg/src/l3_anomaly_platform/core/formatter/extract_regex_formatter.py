import re
from typing import Optional, Tuple

from l3_anomaly_platform.core.models.llm_models import VerdictClass

_CLASS_TOKEN = re.compile(r"\b(anomalous|normal)\b", re.IGNORECASE)
_LEADING_PUNCTUATION = re.compile(r"^[\s\.,:;!\-–—'\"]+")


class ExtractRegexFormatter:
    @classmethod
    def extract_response(cls, text: str, regex: str) -> Optional[str]:
        response_match = re.search(regex, text, re.DOTALL)
        return response_match.group(1).strip() if response_match else None

    @classmethod
    def parse_response(cls, text: str) -> Tuple[VerdictClass, Optional[str]]:
        """Classify a model reply. The earliest class word wins; anything after an
        'Anomalous' token is the explanation. Never raises."""
        match = _CLASS_TOKEN.search(text or "")
        if match is None:
            return VerdictClass.UNCLASSIFIED, None

        if match.group(1).lower() == "normal":
            return VerdictClass.NORMAL, None

        explanation = _LEADING_PUNCTUATION.sub("", text[match.end():]).strip()
        return VerdictClass.ANOMALOUS, explanation or None

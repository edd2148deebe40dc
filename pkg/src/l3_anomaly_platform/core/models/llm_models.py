import json
import os
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from l3_anomaly_platform.core.exceptions import ConfigurationError
from l3_anomaly_platform.core.models.prompt_models import PromptBundle

DEFAULT_ENDPOINT = "http://localhost:8000"
DEFAULT_MODEL = "meta-llama/Llama-3.1-8B-Instruct"
API_KEY_ENV = "L3_DETECT_API_KEY"

# Environment overrides applied on top of the config file.
_ENV_OVERRIDES = {
    "L3_DETECT_ENDPOINT": "endpoint",
    "L3_DETECT_MODEL": "model",
    "L3_DETECT_TIMEOUT_S": "request_timeout_s",
}

######################################################
# Request / response types for chat-completion backends.
######################################################

class Usage(BaseModel):
    prompt_tokens: int = 0
    completion_tokens: int = 0
    total_tokens: int = 0


class LLMRequest(BaseModel):
    bundle: PromptBundle
    model_id: str
    hyperparams: Dict[str, Any] = Field(default_factory=dict)


class LLMResponse(BaseModel):
    id: str = ""
    text: str = ""
    stop_reason: Optional[str] = None
    usage: Usage = Usage()
    raw_response: Dict[str, Any] = Field(default_factory=dict)


class BackendConfig(BaseModel):
    """Settings for a chat-completion backend.

    Detection calls must run at temperature 0; description extraction uses
    `for_extraction()` which raises it to 1.
    """
    endpoint: str = DEFAULT_ENDPOINT
    model: str = DEFAULT_MODEL
    temperature: float = Field(default=0.0, ge=0.0)
    max_output_tokens: int = Field(default=64, ge=1)
    request_timeout_s: float = Field(default=10.0, gt=0.0)
    explanation_enabled: bool = False
    retries: int = Field(default=1, ge=0, le=1)
    max_in_flight: int = Field(default=4, ge=1)

    def hyperparams(self) -> Dict[str, Any]:
        return {"temperature": self.temperature, "max_tokens": self.max_output_tokens}

    def for_extraction(self) -> "BackendConfig":
        return self.model_copy(update={"temperature": 1.0, "explanation_enabled": False})

    @classmethod
    def load(cls, path: Optional[Path] = None, **overrides: Any) -> "BackendConfig":
        """Resolve config file, then environment, then explicit overrides (None values skipped)."""
        load_dotenv()
        data: Dict[str, Any] = {}
        if path is not None:
            try:
                data.update(json.loads(Path(path).read_text(encoding="utf-8")))
            except (OSError, json.JSONDecodeError) as e:
                raise ConfigurationError(f"cannot read backend config {path}: {e}")

        for env_name, field_name in _ENV_OVERRIDES.items():
            value = os.getenv(env_name)
            if value:
                data[field_name] = value

        data.update({key: value for key, value in overrides.items() if value is not None})
        if data.get("explanation_enabled") and "max_output_tokens" not in data:
            data["max_output_tokens"] = 256

        try:
            return cls(**data)
        except ValidationError as e:
            raise ConfigurationError(f"invalid backend config: {e.errors()[0]['msg']}")


def get_api_key() -> Optional[str]:
    return os.getenv(API_KEY_ENV)


class VerdictClass(str, Enum):
    NORMAL = "Normal"
    ANOMALOUS = "Anomalous"
    UNCLASSIFIED = "Unclassified"


class Verdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    classification: VerdictClass
    explanation: Optional[str] = None
    latency_ms: float = Field(default=0.0, ge=0.0)
    raw: str = ""

    @model_validator(mode="after")
    def _explanation_only_when_anomalous(self) -> "Verdict":
        if self.explanation is not None and self.classification != VerdictClass.ANOMALOUS:
            raise ValueError("only Anomalous verdicts carry an explanation")
        return self

    @property
    def is_anomalous(self) -> bool:
        return self.classification == VerdictClass.ANOMALOUS

import json
import logging
import threading
from pathlib import Path
from typing import Callable, Dict, Optional, Union

from l3_anomaly_platform.core.client.llm_gateway.chat_backend import ChatBackend
from l3_anomaly_platform.core.converter.chat_converters import ChatRequestConverter
from l3_anomaly_platform.core.exceptions import BackendError, ConfigurationError
from l3_anomaly_platform.core.models.llm_models import LLMRequest, LLMResponse
from l3_anomaly_platform.core.models.prompt_models import PromptBundle

logger = logging.getLogger(__name__)

# Replay-file key matching any request without an exact entry.
WILDCARD_HASH = "*"


class MockChatClient(ChatBackend):
    """Offline backend replaying canned replies keyed by request hash.

    Lookup order: exact request hash, then `responder`, then the default reply.
    """

    def __init__(
        self,
        responses: Optional[Dict[str, str]] = None,
        default: Optional[str] = None,
        responder: Optional[Callable[[PromptBundle], str]] = None,
    ):
        self.responses = dict(responses or {})
        self.default = self.responses.pop(WILDCARD_HASH, default)
        self.responder = responder
        self.calls = 0
        self._lock = threading.Lock()

    @property
    def touches_network(self) -> bool:
        return False

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> "MockChatClient":
        responses: Dict[str, str] = {}
        try:
            lines = Path(path).read_text(encoding="utf-8").splitlines()
        except OSError as e:
            raise ConfigurationError(f"cannot read mock replay file {path}: {e}")

        for line_no, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                entry = json.loads(line)
                responses[str(entry["request_hash"])] = str(entry["response"])
            except (json.JSONDecodeError, KeyError, TypeError) as e:
                raise ConfigurationError(f"{path} line {line_no}: bad replay entry ({e})")

        logger.info("Loaded %d canned responses from %s", len(responses), path)
        return cls(responses=responses)

    def chat_invoke(self, request: LLMRequest) -> LLMResponse:
        with self._lock:
            self.calls += 1

        key = ChatRequestConverter.request_hash(request.bundle)
        if key in self.responses:
            text = self.responses[key]
        elif self.responder is not None:
            text = self.responder(request.bundle)
        elif self.default is not None:
            text = self.default
        else:
            raise BackendError(f"no canned response for request hash {key[:12]}")

        return LLMResponse(id=f"mock-{key[:12]}", text=text, stop_reason="stop", raw_response={"mock": True})

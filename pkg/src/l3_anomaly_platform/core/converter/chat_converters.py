import hashlib
import json
from typing import Any, Dict, List

from l3_anomaly_platform.core.models.llm_models import LLMRequest, LLMResponse, Usage
from l3_anomaly_platform.core.models.prompt_models import PromptBundle


class ChatRequestConverter:
    """Converts internal LLMRequest objects to the chat-completion wire format."""

    @staticmethod
    def convert_messages(bundle: PromptBundle) -> List[Dict[str, str]]:
        return bundle.to_chat_messages()

    @staticmethod
    def convert_llm_request(request: LLMRequest) -> Dict[str, Any]:
        return {
            "model": request.model_id,
            "messages": ChatRequestConverter.convert_messages(request.bundle),
            **request.hyperparams,
        }

    @staticmethod
    def request_hash(bundle: PromptBundle) -> str:
        """Stable key for a prompt: sha256 over the canonical JSON of its messages."""
        canonical = json.dumps(bundle.to_chat_messages(), ensure_ascii=False, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ChatResponseConverter:
    """Converts chat-completion response bodies to the internal LLMResponse."""

    @staticmethod
    def _mapping(value: Any, what: str) -> Dict[str, Any]:
        if value is None:
            return {}
        if not isinstance(value, dict):
            raise ValueError(f"{what} must be a JSON object, got {type(value).__name__}")
        return value

    @staticmethod
    def to_llm_response(body: Any) -> LLMResponse:
        """Raises ValueError when the body is not shaped like a chat completion."""
        if not isinstance(body, dict):
            raise ValueError(f"response body must be a JSON object, got {type(body).__name__}")
        choices = body.get("choices") or []
        if not isinstance(choices, list):
            raise ValueError("choices must be a list")
        if not choices:
            return LLMResponse(raw_response=body)

        choice = ChatResponseConverter._mapping(choices[0], "choice")
        message = ChatResponseConverter._mapping(choice.get("message"), "message")
        content = message.get("content") or ""
        if not isinstance(content, str):
            raise ValueError(f"message content must be text, got {type(content).__name__}")

        usage_data = ChatResponseConverter._mapping(body.get("usage"), "usage")
        usage = Usage(
            prompt_tokens=usage_data.get("prompt_tokens", 0),
            completion_tokens=usage_data.get("completion_tokens", 0),
            total_tokens=usage_data.get("total_tokens", 0),
        )

        return LLMResponse(
            id=str(body.get("id") or ""),
            text=content,
            stop_reason=choice.get("finish_reason"),
            usage=usage,
            raw_response=body,
        )

import logging
from typing import Dict, Optional

import requests

from l3_anomaly_platform.core.client.llm_gateway.chat_backend import ChatBackend
from l3_anomaly_platform.core.converter.chat_converters import ChatRequestConverter, ChatResponseConverter
from l3_anomaly_platform.core.exceptions import BackendError
from l3_anomaly_platform.core.models.llm_models import BackendConfig, LLMRequest, LLMResponse, get_api_key

logger = logging.getLogger(__name__)


class ChatCompletionClient(ChatBackend):
    """
    Client for an OpenAI-compatible chat-completion endpoint (vLLM, LiteLLM, ...).
    """

    def __init__(self, config: BackendConfig, api_key: Optional[str] = None):
        self.config = config
        self.api_endpoint = config.endpoint.rstrip("/")
        self.api_key = api_key or get_api_key()

    def _get_headers(self) -> Dict[str, str]:
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        return headers

    def chat_invoke(self, request: LLMRequest) -> LLMResponse:
        """
        Send a chat completion request, retrying at most `config.retries` times.
        """
        payload = ChatRequestConverter.convert_llm_request(request)
        url = f"{self.api_endpoint}/v1/chat/completions"
        last_error = "no attempt made"

        for attempt in range(1 + self.config.retries):
            try:
                response = requests.post(
                    url,
                    headers=self._get_headers(),
                    json=payload,
                    timeout=self.config.request_timeout_s,
                )
            except requests.RequestException as e:
                last_error = f"transport failure talking to {url}: {e}"
                logger.warning("Attempt %d failed: %s", attempt + 1, last_error)
                continue

            if response.status_code != 200:
                last_error = f"chat endpoint error: {response.status_code} - {response.text[:200]}"
                logger.warning("Attempt %d failed: %s", attempt + 1, last_error)
                continue

            try:
                body = response.json()
            except ValueError:
                last_error = "chat endpoint returned a non-JSON body"
                continue
            try:
                return ChatResponseConverter.to_llm_response(body)
            except ValueError as e:
                # pydantic's ValidationError is a ValueError too
                last_error = f"malformed chat response: {e}"
                logger.warning("Attempt %d failed: %s", attempt + 1, last_error)

        raise BackendError(last_error)

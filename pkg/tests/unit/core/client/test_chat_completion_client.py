"""
Unit tests for the chat-completion client.

HTTP is mocked at `requests.post`; no test opens a socket.
"""

from unittest.mock import MagicMock, patch

import pytest
import requests

from l3_anomaly_platform.core.client.llm_gateway.chat_completion_client import ChatCompletionClient
from l3_anomaly_platform.core.exceptions import BackendError
from l3_anomaly_platform.core.models.llm_models import BackendConfig, LLMRequest
from l3_anomaly_platform.core.models.prompt_models import ChatMessage, ChatRole, PromptBundle
from l3_anomaly_platform.service.detector.llm_detector import LLMDetector
from l3_anomaly_platform.service.evaluation.sweep import classify_window
from l3_anomaly_platform.service.prompting.attack_catalog import BLIND_DOS_SHORT

POST = "l3_anomaly_platform.core.client.llm_gateway.chat_completion_client.requests.post"


def _response(status: int = 200, body=None) -> MagicMock:
    response = MagicMock()
    response.status_code = status
    response.text = "error body"
    response.json.return_value = body if body is not None else {
        "id": "chatcmpl-1",
        "choices": [{"message": {"role": "assistant", "content": "Normal"}, "finish_reason": "stop"}],
        "usage": {"prompt_tokens": 5, "completion_tokens": 1, "total_tokens": 6},
    }
    return response


class TestChatCompletionClient:
    """Unit tests for ChatCompletionClient"""

    def setup_method(self):
        self.config = BackendConfig(endpoint="http://llm.local:8000/", model="test-model", retries=1)
        self.client = ChatCompletionClient(self.config, api_key="test-key")
        self.request = LLMRequest(
            bundle=PromptBundle(messages=(
                ChatMessage(role=ChatRole.SYSTEM, content="system"),
                ChatMessage(role=ChatRole.USER, content="RRCSetup with RNTI 1, and TMSI 0 (New message)"),
            )),
            model_id="test-model",
            hyperparams=self.config.hyperparams(),
        )

    def test_headers(self):
        headers = self.client._get_headers()
        assert headers["Authorization"] == "Bearer test-key"
        assert headers["Content-Type"] == "application/json"

    def test_no_key_no_authorization(self):
        assert "Authorization" not in ChatCompletionClient(self.config)._get_headers()

    def test_api_key_from_environment(self, monkeypatch):
        monkeypatch.setenv("L3_DETECT_API_KEY", "env-key")
        assert ChatCompletionClient(self.config)._get_headers()["Authorization"] == "Bearer env-key"

    @patch(POST)
    def test_chat_invoke_success(self, mock_post):
        mock_post.return_value = _response()

        response = self.client.chat_invoke(self.request)

        assert response.text == "Normal"
        assert response.usage.total_tokens == 6
        args, kwargs = mock_post.call_args
        assert args[0] == "http://llm.local:8000/v1/chat/completions"
        assert kwargs["json"]["model"] == "test-model"
        assert kwargs["json"]["temperature"] == 0.0
        assert kwargs["json"]["max_tokens"] == 64
        assert kwargs["json"]["messages"][0] == {"role": "system", "content": "system"}
        assert kwargs["timeout"] == self.config.request_timeout_s

    @patch(POST)
    def test_retries_once_then_succeeds(self, mock_post):
        mock_post.side_effect = [requests.ConnectionError("refused"), _response()]
        assert self.client.chat_invoke(self.request).text == "Normal"
        assert mock_post.call_count == 2

    @patch(POST)
    def test_http_error_after_retry(self, mock_post):
        mock_post.return_value = _response(status=500)
        with pytest.raises(BackendError, match="500"):
            self.client.chat_invoke(self.request)
        assert mock_post.call_count == 2

    @patch(POST)
    def test_no_retry_when_disabled(self, mock_post):
        client = ChatCompletionClient(self.config.model_copy(update={"retries": 0}))
        mock_post.side_effect = requests.Timeout("slow")
        with pytest.raises(BackendError):
            client.chat_invoke(self.request)
        assert mock_post.call_count == 1

    @patch(POST)
    def test_non_json_body(self, mock_post):
        response = _response()
        response.json.side_effect = ValueError("not json")
        mock_post.return_value = response
        with pytest.raises(BackendError, match="non-JSON"):
            self.client.chat_invoke(self.request)

    @pytest.mark.parametrize("body", [
        ["not", "an", "object"],
        {"choices": ["plain string"]},
        {"choices": [{"message": "Normal"}]},
        {"choices": [{"message": {"content": ["Normal"]}}]},
        {"choices": {"message": {"content": "Normal"}}},
    ])
    @patch(POST)
    def test_malformed_body_is_backend_error(self, mock_post, body):
        mock_post.return_value = _response(body=body)
        with pytest.raises(BackendError, match="malformed chat response"):
            self.client.chat_invoke(self.request)
        assert mock_post.call_count == 2

    @patch(POST)
    def test_malformed_body_becomes_failed_window(self, mock_post, reference_window):
        mock_post.return_value = _response(body=["not", "an", "object"])
        detector = LLMDetector(self.client, self.config, BLIND_DOS_SHORT)

        result = classify_window(detector, reference_window)

        assert result.verdict is None
        assert "malformed chat response" in result.error

    def test_touches_network(self):
        assert self.client.touches_network

from pathlib import Path

from l3_anomaly_platform.core.client.llm_gateway.chat_backend import ChatBackend
from l3_anomaly_platform.core.client.llm_gateway.chat_completion_client import ChatCompletionClient
from l3_anomaly_platform.core.client.llm_gateway.mock_chat_client import MockChatClient
from l3_anomaly_platform.core.exceptions import ConfigurationError
from l3_anomaly_platform.core.models.llm_models import BackendConfig

MOCK_PREFIX = "mock:"


class LLMGatewayClient:
    '''Resolves a backend spec (`chat` or `mock:<file>`) to a ChatBackend.'''

    @staticmethod
    def from_spec(spec: str, config: BackendConfig) -> ChatBackend:
        if spec == "chat":
            return ChatCompletionClient(config)
        if spec.startswith(MOCK_PREFIX):
            path = spec[len(MOCK_PREFIX):]
            if not path:
                raise ConfigurationError("mock backend needs a replay file: mock:<file>")
            return MockChatClient.from_file(Path(path))
        raise ConfigurationError(f"unknown backend '{spec}'")

from abc import ABC, abstractmethod

from l3_anomaly_platform.core.models.llm_models import LLMRequest, LLMResponse


class ChatBackend(ABC):
    """Anything that can answer a role-tagged chat request.

    Implementations must tolerate concurrent calls from a thread pool.
    """

    @abstractmethod
    def chat_invoke(self, request: LLMRequest) -> LLMResponse:
        """Send one request and return the full assistant reply."""
        pass

    @property
    def touches_network(self) -> bool:
        return True

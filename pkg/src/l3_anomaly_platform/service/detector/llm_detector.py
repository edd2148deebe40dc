import logging
import time
from contextlib import nullcontext
from typing import Optional, Sequence, Tuple

from l3_anomaly_platform.core.client.llm_gateway.chat_backend import ChatBackend
from l3_anomaly_platform.core.exceptions import BackendError, ConfigurationError
from l3_anomaly_platform.core.formatter.extract_regex_formatter import ExtractRegexFormatter
from l3_anomaly_platform.core.models.l3_models import RecordView
from l3_anomaly_platform.core.models.llm_models import BackendConfig, LLMRequest, Verdict, VerdictClass
from l3_anomaly_platform.core.models.prompt_models import AttackDescription, PromptBundle, PromptMode
from l3_anomaly_platform.core.models.window_models import DetectionWindow
from l3_anomaly_platform.core.observability.observability_facade import get_facade
from l3_anomaly_platform.service.detector.base_detector import WindowDetector
from l3_anomaly_platform.service.prompting.detection_prompt import build_prompt

logger = logging.getLogger(__name__)


def parse_response(text: str) -> Tuple[VerdictClass, Optional[str]]:
    return ExtractRegexFormatter.parse_response(text)


def detect(bundle: PromptBundle, backend: ChatBackend, config: BackendConfig, backend_name: str = "chat") -> Verdict:
    """
    Send one detection prompt and parse the reply.

    Latency is wall-clock time from request start to the full response. A failed
    call raises BackendError carrying the time spent before it failed.
    """
    if config.temperature != 0:
        raise ConfigurationError(f"detection requires temperature 0, got {config.temperature}")

    request = LLMRequest(bundle=bundle, model_id=config.model, hyperparams=config.hyperparams())
    facade = get_facade()
    span = facade.start_span("detect", {"model": config.model, "backend": backend_name}) if facade else nullcontext()

    with span:
        start = time.perf_counter()
        try:
            response = backend.chat_invoke(request)
        except BackendError as e:
            e.elapsed_ms = (time.perf_counter() - start) * 1000.0
            logger.warning("Detection call failed after %.1f ms: %s", e.elapsed_ms, e.message)
            raise
        latency_ms = (time.perf_counter() - start) * 1000.0

    classification, explanation = parse_response(response.text)
    verdict = Verdict(
        classification=classification,
        explanation=explanation if config.explanation_enabled else None,
        latency_ms=latency_ms,
        raw=response.text,
    )
    if facade:
        facade.record_detection(latency_ms, classification.value, backend_name)
    return verdict


class LLMDetector(WindowDetector):
    """Prompt-based detector over any chat backend."""
    concurrent = True

    def __init__(
        self,
        backend: ChatBackend,
        config: BackendConfig,
        description: AttackDescription,
        mode: PromptMode = PromptMode.ZERO_SHOT,
        name: str = "chat",
        include_previous: bool = True,
    ) -> None:
        self.backend = backend
        self.config = config
        self.description = description
        self.mode = mode
        self.name = name
        self.include_previous = include_previous

    def prompt_for(self, window: DetectionWindow) -> PromptBundle:
        return build_prompt(
            window, self.description, self.mode, self.config.explanation_enabled, self.include_previous,
        )

    def classify(self, window: DetectionWindow, prefix: Sequence[RecordView] = ()) -> Verdict:
        return detect(self.prompt_for(window), self.backend, self.config, self.name)

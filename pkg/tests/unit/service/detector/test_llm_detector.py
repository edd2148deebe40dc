"""
Unit tests for the prompt-based detector.

Backends are mocked; latency assertions only check that time was measured.
"""

from unittest.mock import MagicMock

import pytest

from l3_anomaly_platform.core.client.llm_gateway.mock_chat_client import MockChatClient
from l3_anomaly_platform.core.exceptions import BackendError, ConfigurationError
from l3_anomaly_platform.core.models.llm_models import BackendConfig, VerdictClass
from l3_anomaly_platform.core.models.prompt_models import PromptMode
from l3_anomaly_platform.core.observability.observability_facade import configure_facade
from l3_anomaly_platform.service.detector.llm_detector import LLMDetector, detect, parse_response
from l3_anomaly_platform.service.prompting.attack_catalog import BLIND_DOS_SHORT
from l3_anomaly_platform.service.prompting.detection_prompt import build_prompt


class TestParseResponse:

    def test_delegates_to_formatter(self):
        assert parse_response("Anomalous: reused TMSI") == (VerdictClass.ANOMALOUS, "reused TMSI")
        assert parse_response("maybe") == (VerdictClass.UNCLASSIFIED, None)


class TestDetect:
    """Test one detection call"""

    def setup_method(self):
        self.config = BackendConfig()

    def test_normal(self, reference_window):
        verdict = detect(build_prompt(reference_window, BLIND_DOS_SHORT), MockChatClient(default="Normal"), self.config)
        assert verdict.classification == VerdictClass.NORMAL
        assert verdict.raw == "Normal"
        assert verdict.latency_ms >= 0.0

    def test_explanation_dropped_unless_enabled(self, reference_window):
        backend = MockChatClient(default="Anomalous: TMSI reused with a new RNTI")
        bundle = build_prompt(reference_window, BLIND_DOS_SHORT)
        assert detect(bundle, backend, self.config).explanation is None

        explaining = self.config.model_copy(update={"explanation_enabled": True})
        assert detect(bundle, backend, explaining).explanation == "TMSI reused with a new RNTI"

    def test_requires_temperature_zero(self, reference_window):
        hot = self.config.model_copy(update={"temperature": 0.7})
        with pytest.raises(ConfigurationError):
            detect(build_prompt(reference_window, BLIND_DOS_SHORT), MockChatClient(default="Normal"), hot)

    def test_failure_carries_elapsed_time(self, reference_window):
        with pytest.raises(BackendError) as exc_info:
            detect(build_prompt(reference_window, BLIND_DOS_SHORT), MockChatClient(), self.config)
        assert exc_info.value.elapsed_ms >= 0.0

    def test_records_metrics_when_facade_configured(self, reference_window):
        facade = configure_facade("test", MagicMock())
        facade.record_detection = MagicMock()
        detect(build_prompt(reference_window, BLIND_DOS_SHORT), MockChatClient(default="Normal"), self.config, "mock")
        args = facade.record_detection.call_args[0]
        assert args[1:] == ("Normal", "mock")


class TestLLMDetector:

    def test_prompt_follows_mode(self, reference_window):
        detector = LLMDetector(MockChatClient(default="Normal"), BackendConfig(), BLIND_DOS_SHORT, PromptMode.GENERIC_COT)
        assert detector.prompt_for(reference_window).messages[-1].content == "Let's think step by step"
        assert detector.concurrent
        assert not detector.needs_prefix

    def test_without_previous_message(self, reference_window):
        detector = LLMDetector(MockChatClient(default="Normal"), BackendConfig(), BLIND_DOS_SHORT,
                               include_previous=False)
        contents = [m.content for m in detector.prompt_for(reference_window).messages]
        assert len(contents) == 2
        assert contents[1] == reference_window.new_record.text

    def test_classify(self, reference_window):
        detector = LLMDetector(MockChatClient(default="Anomalous"), BackendConfig(), BLIND_DOS_SHORT, name="mock")
        assert detector.classify(reference_window).classification == VerdictClass.ANOMALOUS
        assert detector.name == "mock"

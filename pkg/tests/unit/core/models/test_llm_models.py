import json

import pytest
from pydantic import ValidationError

from l3_anomaly_platform.core.exceptions import ConfigurationError
from l3_anomaly_platform.core.models.llm_models import (
    DEFAULT_ENDPOINT,
    BackendConfig,
    Verdict,
    VerdictClass,
    get_api_key,
)


class TestBackendConfig:
    """Test configuration resolution order"""

    def test_defaults(self):
        config = BackendConfig.load()
        assert config.endpoint == DEFAULT_ENDPOINT
        assert config.temperature == 0.0
        assert config.max_output_tokens == 64
        assert config.hyperparams() == {"temperature": 0.0, "max_tokens": 64}

    def test_file_then_env_then_overrides(self, tmp_path, monkeypatch):
        path = tmp_path / "backend.json"
        path.write_text(json.dumps({"endpoint": "http://file:1", "model": "file-model", "max_in_flight": 2}))
        monkeypatch.setenv("L3_DETECT_MODEL", "env-model")

        config = BackendConfig.load(path, endpoint="http://flag:2", model=None)
        assert config.endpoint == "http://flag:2"
        assert config.model == "env-model"
        assert config.max_in_flight == 2

    def test_explanation_raises_token_limit(self):
        assert BackendConfig.load(explanation_enabled=True).max_output_tokens == 256
        assert BackendConfig.load(explanation_enabled=True, max_output_tokens=100).max_output_tokens == 100

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            BackendConfig.load(tmp_path / "missing.json")

    def test_invalid_value(self):
        with pytest.raises(ConfigurationError):
            BackendConfig.load(max_in_flight=0)

    def test_single_retry_at_most(self):
        with pytest.raises(ValidationError):
            BackendConfig(retries=2)

    def test_for_extraction(self):
        extraction = BackendConfig(explanation_enabled=True).for_extraction()
        assert extraction.temperature == 1.0
        assert not extraction.explanation_enabled

    def test_api_key_from_environment(self, monkeypatch):
        assert get_api_key() is None
        monkeypatch.setenv("L3_DETECT_API_KEY", "secret")
        assert get_api_key() == "secret"


class TestVerdict:
    """Test verdict invariants"""

    def test_explanation_only_when_anomalous(self):
        Verdict(classification=VerdictClass.ANOMALOUS, explanation="TMSI reused")
        with pytest.raises(ValidationError):
            Verdict(classification=VerdictClass.NORMAL, explanation="looks fine")

    def test_is_anomalous(self):
        assert Verdict(classification=VerdictClass.ANOMALOUS).is_anomalous
        assert not Verdict(classification=VerdictClass.UNCLASSIFIED).is_anomalous

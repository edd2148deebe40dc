from unittest.mock import MagicMock

from l3_anomaly_platform.core.observability.observability_facade import (
    DETECTION_LATENCY,
    DETECTION_VERDICTS,
    ObservabilityFacade,
    configure_facade,
    get_facade,
    reset_facade,
)
from l3_anomaly_platform.core.observability.provider.otel_provider import OpenTelemetryProvider


class TestObservabilityFacade:
    """Test facade wiring against a mocked provider"""

    def setup_method(self):
        self.provider = MagicMock()
        self.facade = ObservabilityFacade("test-service", self.provider)

    def test_detection_instruments_created(self):
        assert DETECTION_LATENCY in self.facade.histogram_metrics
        assert DETECTION_VERDICTS in self.facade.counter_metrics

    def test_record_detection(self):
        self.facade.record_detection(12.5, "Anomalous", "mock")

        attributes = {"backend": "mock", "class": "Anomalous"}
        self.facade.histogram_metrics[DETECTION_LATENCY].record.assert_called_with(12.5, attributes)
        self.facade.counter_metrics[DETECTION_VERDICTS].add.assert_called_with(1, attributes)

    def test_unknown_counter_is_created(self):
        self.facade.increment_counter("windows.built", 3)
        assert "windows.built" in self.facade.counter_metrics

    def test_instruments_come_from_provider(self):
        self.provider.get_tracer.assert_called_once_with("test-service")
        self.provider.get_meter.assert_called_once_with("test-service")

    def test_shutdown_delegates(self):
        self.facade.shutdown()
        self.provider.shutdown.assert_called_once()


class TestGlobalFacade:

    def test_configure_and_reset(self):
        assert get_facade() is None
        facade = configure_facade("test-service", MagicMock())
        assert get_facade() is facade
        reset_facade()
        assert get_facade() is None


class TestOpenTelemetryProvider:
    """Test the SDK provider without an exporter"""

    def test_offline_provider(self):
        provider = OpenTelemetryProvider("test-service")
        try:
            assert not provider.exporting
            facade = ObservabilityFacade("test-service", provider)
            with facade.start_span("detect", {"backend": "oracle"}):
                facade.record_detection(1.0, "Normal", "oracle")
        finally:
            provider.shutdown()


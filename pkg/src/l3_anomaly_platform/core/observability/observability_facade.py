from typing import Any, Dict, Optional

from l3_anomaly_platform.core.observability.provider.base_observability_provider import BaseObservabilityProvider

DETECTION_LATENCY = "detection.latency_ms"
DETECTION_VERDICTS = "detection.verdicts"


class ObservabilityFacade:
    """
    A unified service to handle all observability concerns.
    This facade class holds the detection traces and metrics.
    """

    def __init__(self, service_name: str, provider: BaseObservabilityProvider):
        self.service_name = service_name
        self.provider = provider

        self.tracer = self.provider.get_tracer(service_name)
        self.meter = self.provider.get_meter(service_name)

        self.counter_metrics: Dict[str, Any] = {}
        self.histogram_metrics: Dict[str, Any] = {}

        self.create_histogram(DETECTION_LATENCY, "Wall-clock time of one detection call", unit="ms")
        self.create_counter(DETECTION_VERDICTS, "Detection verdicts by class")

    def create_counter(self, name: str, description: str, unit: str = "1") -> None:
        self.counter_metrics[name] = self.meter.create_counter(name=name, description=description, unit=unit)

    def create_histogram(self, name: str, description: str, unit: str = "1") -> None:
        self.histogram_metrics[name] = self.meter.create_histogram(name=name, description=description, unit=unit)

    def increment_counter(self, name: str, value: int = 1, attributes: Optional[Dict[str, Any]] = None) -> None:
        if name not in self.counter_metrics:
            self.create_counter(name, f"Counter for {name}")
        self.counter_metrics[name].add(value, attributes)

    def record_histogram(self, name: str, value: float, attributes: Optional[Dict[str, Any]] = None) -> None:
        if name not in self.histogram_metrics:
            self.create_histogram(name, f"Histogram for {name}")
        self.histogram_metrics[name].record(value, attributes)

    def record_detection(self, latency_ms: float, classification: str, backend: str) -> None:
        """Record one finished detection call on both detection instruments."""
        attributes = {"backend": backend, "class": classification}
        self.record_histogram(DETECTION_LATENCY, latency_ms, attributes)
        self.increment_counter(DETECTION_VERDICTS, 1, attributes)

    def start_span(self, name: str, attributes: Optional[Dict[str, Any]] = None):
        """Start a new trace span as a context manager."""
        return self.tracer.start_as_current_span(name, attributes=attributes)

    def shutdown(self) -> None:
        self.provider.shutdown()


# Global instance
_instance: Optional[ObservabilityFacade] = None


def configure_facade(service_name: str, provider: BaseObservabilityProvider) -> ObservabilityFacade:
    """
    Configure and set the global ObservabilityFacade instance.
    """
    global _instance
    _instance = ObservabilityFacade(service_name, provider)
    return _instance


def get_facade() -> Optional[ObservabilityFacade]:
    """
    Get the global ObservabilityFacade instance if configured.
    """
    return _instance


def reset_facade() -> None:
    global _instance
    _instance = None

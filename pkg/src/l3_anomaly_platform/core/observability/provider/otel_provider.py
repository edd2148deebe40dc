import logging
import os
from typing import Dict, Optional

from opentelemetry.metrics import Meter
from opentelemetry.sdk.metrics import MeterProvider
from opentelemetry.sdk.metrics.export import PeriodicExportingMetricReader
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import TracerProvider
from opentelemetry.sdk.trace.export import BatchSpanProcessor
from opentelemetry.trace import Tracer

from l3_anomaly_platform.core.observability.provider.base_observability_provider import BaseObservabilityProvider

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s - %(message)s"


class OpenTelemetryProvider(BaseObservabilityProvider):
    """
    Implementation of ObservabilityProvider using OpenTelemetry.

    Spans and metrics are only exported when an OTLP endpoint is given (or set in
    OTEL_EXPORTER_OTLP_ENDPOINT); otherwise they are recorded by the SDK and dropped,
    so offline runs never open a socket.
    """

    def __init__(
        self,
        service_name: str,
        service_version: str = "0.1.0",
        otlp_endpoint: Optional[str] = None,
        additional_attributes: Optional[Dict[str, str]] = None,
        log_level: int = logging.INFO,
    ) -> None:
        self.service_name = service_name
        self.service_version = service_version
        self.otlp_endpoint = otlp_endpoint or os.getenv("OTEL_EXPORTER_OTLP_ENDPOINT") or None
        self.log_level = log_level

        resource_attributes: Dict[str, str] = {
            "service.name": service_name,
            "service.version": service_version,
        }
        if additional_attributes:
            resource_attributes.update(additional_attributes)
        self.resource = Resource.create(resource_attributes)

        self.tracer_provider: Optional[TracerProvider] = None
        self.meter_provider: Optional[MeterProvider] = None

        self._setup_tracing()
        self._setup_metrics()
        self._setup_logging()

    @property
    def exporting(self) -> bool:
        return self.otlp_endpoint is not None

    def _setup_tracing(self) -> None:
        self.tracer_provider = TracerProvider(resource=self.resource)
        if self.exporting:
            from opentelemetry.exporter.otlp.proto.grpc.trace_exporter import OTLPSpanExporter
            self.tracer_provider.add_span_processor(BatchSpanProcessor(OTLPSpanExporter(endpoint=self.otlp_endpoint)))

    def _setup_metrics(self) -> None:
        readers = []
        if self.exporting:
            from opentelemetry.exporter.otlp.proto.grpc.metric_exporter import OTLPMetricExporter
            readers.append(PeriodicExportingMetricReader(OTLPMetricExporter(endpoint=self.otlp_endpoint)))
        self.meter_provider = MeterProvider(resource=self.resource, metric_readers=readers)

    def _setup_logging(self) -> None:
        """Console logging to stderr; stdout stays free for command output."""
        root = logging.getLogger()
        if not any(getattr(h, "_l3_console", False) for h in root.handlers):
            handler = logging.StreamHandler()
            handler.setFormatter(logging.Formatter(LOG_FORMAT))
            handler._l3_console = True
            root.addHandler(handler)
        root.setLevel(self.log_level)

    def get_tracer(self, name: str) -> Tracer:
        return self.tracer_provider.get_tracer(name, self.service_version)

    def get_meter(self, name: str) -> Meter:
        return self.meter_provider.get_meter(name, self.service_version)

    def shutdown(self) -> None:
        self.tracer_provider.shutdown()
        self.meter_provider.shutdown()

from typing import Optional


class L3DetectError(Exception):
    """Base class for every error the pipeline raises on purpose.

    `code` is a stable, machine-parsable identifier the CLI prints as
    `error[<code>]: <message>`.
    """
    code: str = "l3_detect"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class MalformedRecordError(L3DetectError):
    code = "malformed_record"


class TraceParseError(L3DetectError):
    code = "trace_parse"

    def __init__(self, message: str, field: Optional[str] = None, line_no: Optional[int] = None):
        location = f"line {line_no}: " if line_no is not None else ""
        super().__init__(f"{location}{message}")
        self.field = field
        self.line_no = line_no


class InjectionCapacityError(L3DetectError):
    code = "injection_capacity"


class SelectionError(L3DetectError):
    code = "selection"


class InsufficientDataError(L3DetectError):
    code = "insufficient_data"


class ConfigurationError(L3DetectError):
    code = "configuration"


class BackendError(L3DetectError):
    code = "backend"

    def __init__(self, message: str, elapsed_ms: float = 0.0, request_index: Optional[int] = None):
        prefix = f"request {request_index}: " if request_index is not None else ""
        super().__init__(f"{prefix}{message}")
        self.elapsed_ms = elapsed_ms
        self.request_index = request_index


class EvaluationError(L3DetectError):
    code = "evaluation"


class UndefinedMetricsError(EvaluationError):
    code = "undefined_metrics"


class UndefinedCorrelationError(EvaluationError):
    code = "undefined_correlation"

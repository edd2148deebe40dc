import logging

from l3_anomaly_platform.core.decorator.cli_error_decorator import (
    EXIT_DOMAIN_ERROR,
    EXIT_IO_ERROR,
    EXIT_UNEXPECTED,
    handle_cli_errors,
)
from l3_anomaly_platform.core.exceptions import InjectionCapacityError, TraceParseError

DECORATOR_LOGGER = "l3_anomaly_platform.core.decorator.cli_error_decorator"


class TestHandleCliErrors:
    """Test exit codes and stderr lines of wrapped handlers"""

    def test_passes_through_return_value(self):
        @handle_cli_errors()
        def handler():
            return 0

        assert handler() == 0

    def test_domain_error(self, capsys):
        @handle_cli_errors()
        def handler():
            raise InjectionCapacityError("trace too short")

        assert handler() == EXIT_DOMAIN_ERROR
        assert capsys.readouterr().err.strip() == "error[injection_capacity]: trace too short"

    def test_error_location_in_message(self, capsys):
        @handle_cli_errors()
        def handler():
            raise TraceParseError("missing field 'rnti'", "rnti", 7)

        handler()
        assert "error[trace_parse]: line 7: missing field 'rnti'" in capsys.readouterr().err

    def test_io_error(self, capsys):
        @handle_cli_errors()
        def handler():
            raise FileNotFoundError("trace.jsonl")

        assert handler() == EXIT_IO_ERROR
        assert capsys.readouterr().err.startswith("error[io]:")

    def test_unexpected_error(self, capsys):
        @handle_cli_errors(error_prefix="l3")
        def handler():
            raise RuntimeError("boom")

        assert handler() == EXIT_UNEXPECTED
        assert "l3[unexpected]: boom" in capsys.readouterr().err

    def test_domain_error_logged_at_debug(self, caplog):
        @handle_cli_errors()
        def handler():
            raise InjectionCapacityError("trace too short")

        with caplog.at_level(logging.DEBUG, logger=DECORATOR_LOGGER):
            handler()
        record = caplog.records[-1]
        assert record.levelno == logging.DEBUG
        assert record.exc_info[0] is InjectionCapacityError

    def test_unexpected_error_logged_at_error(self, caplog):
        @handle_cli_errors()
        def handler():
            raise RuntimeError("boom")

        with caplog.at_level(logging.DEBUG, logger=DECORATOR_LOGGER):
            handler()
        record = caplog.records[-1]
        assert record.levelno == logging.ERROR
        assert record.exc_info[0] is RuntimeError

    def test_preserves_name(self):
        @handle_cli_errors()
        def my_handler():
            return 0

        assert my_handler.__name__ == "my_handler"

import logging
import sys
from functools import wraps

from l3_anomaly_platform.core.exceptions import L3DetectError

logger = logging.getLogger(__name__)

EXIT_DOMAIN_ERROR = 2
EXIT_UNEXPECTED = 1
EXIT_IO_ERROR = 3


def handle_cli_errors(error_prefix: str = "error"):
    """
    Decorator to wrap CLI command handlers with consistent exception handling.

    Domain errors print `<prefix>[<code>]: <message>` to stderr and return exit
    code 2; file-system errors return 3; anything else returns 1. Every failure
    is logged with its traceback: unexpected ones at ERROR, domain and
    file-system ones at DEBUG so stderr keeps its single line by default.

    Args:
        error_prefix: Text prefix for the printed error line (default: "error")
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs) -> int:
            try:
                return func(*args, **kwargs)
            except L3DetectError as e:
                logger.debug(f"{error_prefix}: {func.__name__} failed with {e.code}", exc_info=True)
                print(f"{error_prefix}[{e.code}]: {e.message}", file=sys.stderr)
                return EXIT_DOMAIN_ERROR
            except OSError as e:
                logger.debug(f"{error_prefix}: {func.__name__} failed on the file system", exc_info=True)
                print(f"{error_prefix}[io]: {e}", file=sys.stderr)
                return EXIT_IO_ERROR
            except Exception as e:
                logger.exception(f"{error_prefix}: unexpected failure in {func.__name__}")
                print(f"{error_prefix}[unexpected]: {e}", file=sys.stderr)
                return EXIT_UNEXPECTED
        return wrapper
    return decorator

import logging
import sys
from logging.handlers import RotatingFileHandler

try:
    from pythonjsonlogger.json import JsonFormatter
except ImportError:  # python-json-logger < 3.1
    try:
        from pythonjsonlogger.jsonlogger import JsonFormatter
    except ImportError:
        JsonFormatter = None

JSON_FIELDS = "%(asctime)s %(levelname)s %(name)s %(process)d %(funcName)s %(message)s"
PLAIN_FORMAT = "%(asctime)s %(levelname)-8s [%(process)d] %(name)s: %(message)s"

# Chatty under sweeps; only warnings are kept.
LIBRARY_LOGGERS = ("celery", "kombu", "amqp")


def _formatter(log_format: str) -> logging.Formatter:
    if log_format == "json" and JsonFormatter is not None:
        return JsonFormatter(JSON_FIELDS, rename_fields={"levelname": "level", "asctime": "time"})
    return logging.Formatter(PLAIN_FORMAT)


def setup_logging(
    log_level: str = "INFO",
    environment: str = "development",
    log_format: str = "json",
    log_file: str | None = None,
    max_bytes: int = 10 * 1024 * 1024,
    backup_count: int = 5,
) -> None:
    """
    Configure the root logger for CLI runs and sweep workers.

    Records go to stderr and, optionally, a rotating file. CSV output is never
    written through logging.

    Args:
        log_level: Minimum level name, case-insensitive.
        environment: Active environment name, reported once at DEBUG.
        log_format: "json" or "plain". Falls back to plain when python-json-logger is missing.
        log_file: Optional rotating log file path.
        max_bytes: Rotation size of the log file.
        backup_count: Rotated files to keep.
    """
    root = logging.getLogger()
    root.setLevel(log_level.upper())
    # Repeated setup (worker_process_init, tests) must not stack handlers.
    for handler in list(root.handlers):
        root.removeHandler(handler)

    formatter = _formatter(log_format)
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(RotatingFileHandler(log_file, maxBytes=max_bytes, backupCount=backup_count))
    for handler in handlers:
        handler.setFormatter(formatter)
        root.addHandler(handler)

    for name in LIBRARY_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)

    logging.getLogger(__name__).debug(
        "Logging ready: environment=%s level=%s format=%s", environment, log_level.upper(), log_format
    )

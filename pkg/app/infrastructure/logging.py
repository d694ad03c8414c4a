"""Logging configuration.

Provides structured logging with support for both text and JSON formats.
Called once from the CLI entry point before any command runs.
"""
import json
import logging
import sys
from pathlib import Path

from app.infrastructure.config import Settings


# Log format styles
TEXT_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
APP_LOGGERS = ("app", "app.domain", "app.application", "app.infrastructure", "app.analytics", "app.cli")


class JSONFormatter(logging.Formatter):
    """Custom formatter that outputs JSON for structured logging."""

    def format(self, record: logging.LogRecord) -> str:
        """Format log record as JSON."""
        log_data = {
            "timestamp": self.formatTime(record),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }

        # Add exception info if present
        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        # Add extra fields
        if hasattr(record, "extra") and isinstance(record.extra, dict):
            log_data.update(record.extra)

        return json.dumps(log_data, default=str)


def configure_logging(settings: Settings) -> logging.Logger:
    """Configure Python logging for the harness.

    Sets up:
    - Console output on stdout
    - An optional file handler when RSC_LOG_FILE is set
    - JSON or text formatting from RSC_LOG_FORMAT
    - One level for every app.* logger

    Invalid levels fall back to INFO.
    """
    log_level = settings.log_level.upper()
    if log_level not in LEVELS:
        log_level = "INFO"

    if settings.log_format.lower() == "json":
        formatter = JSONFormatter()
    else:
        formatter = logging.Formatter(TEXT_FORMAT)

    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(sys.stdout)
    console_handler.setLevel(log_level)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if settings.log_file:
        path = Path(settings.log_file)
        path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(path)
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    for name in APP_LOGGERS:
        logging.getLogger(name).setLevel(log_level)

    return root_logger

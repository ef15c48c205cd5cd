"""Structured JSON logging for the analysis and simulation modules."""
import json
import logging
import os
import sys
import traceback
from datetime import datetime, timezone
from typing import Any, Dict, Optional

PACKAGE_LOGGER = 'plankton_dynamics'


class StructuredLogger:
    """Module logger writing one JSON object per record to stderr.

    Keyword arguments become fields of the entry, so numerical context
    (theta=..., u=..., step=...) stays machine-readable.
    """

    def __init__(self, name: str = __name__):
        self.component = name.rsplit('.', 1)[-1]
        self.logger = logging.getLogger(name)
        _ensure_package_handler()

    def _build_log_entry(
        self,
        level: str,
        message: str,
        **kwargs: Any
    ) -> Dict[str, Any]:
        return {
            'timestamp': datetime.now(timezone.utc).isoformat(),
            'level': level,
            'message': message,
            'service': os.environ.get('PLANKTON_SERVICE_NAME', 'plankton-dynamics'),
            'component': self.component,
            **kwargs
        }

    def _emit(self, level: int, message: str, extra: Dict[str, Any]) -> None:
        if not self.logger.isEnabledFor(level):
            return
        entry = self._build_log_entry(logging.getLevelName(level), message, **extra)
        self.logger.log(level, json.dumps(entry, default=str))

    def debug(self, message: str, **kwargs: Any) -> None:
        self._emit(logging.DEBUG, message, kwargs)

    def info(self, message: str, **kwargs: Any) -> None:
        self._emit(logging.INFO, message, kwargs)

    def warning(self, message: str, **kwargs: Any) -> None:
        self._emit(logging.WARNING, message, kwargs)

    def error(self, message: str, error: Optional[Exception] = None, **kwargs: Any) -> None:
        """Log at ERROR; with `error`, attach its type, message and the active traceback."""
        if error is not None:
            kwargs.update(
                error_type=type(error).__name__,
                error_message=str(error),
                traceback=traceback.format_exc(),
            )
        self._emit(logging.ERROR, message, kwargs)


class StructuredFormatter(logging.Formatter):
    """Pass JSON entries through; format anything else normally."""

    def format(self, record: logging.LogRecord) -> str:
        if isinstance(record.msg, str) and record.msg.startswith('{'):
            return record.msg
        return super().format(record)


def _ensure_package_handler() -> None:
    package_logger = logging.getLogger(PACKAGE_LOGGER)
    if getattr(package_logger, '_structured', False):
        return
    package_logger.handlers = []
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(StructuredFormatter())
    package_logger.addHandler(handler)
    package_logger.propagate = False
    package_logger.setLevel(os.environ.get('PLANKTON_LOG_LEVEL', 'WARNING').upper())
    package_logger._structured = True


def configure_logging(level: str) -> None:
    """Set the level shared by every module logger in the package."""
    _ensure_package_handler()
    logging.getLogger(PACKAGE_LOGGER).setLevel(level.upper())

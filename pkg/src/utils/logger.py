"""
Logging system for invol
Structured logging through structlog, rendered by stdlib handlers on stderr
"""

import json
import logging
import logging.handlers
import os
import sys
import threading
import time
import traceback
from contextlib import contextmanager
from datetime import datetime, timezone
from functools import wraps
from pathlib import Path
from typing import Any, Dict, Optional

import structlog
from structlog.stdlib import LoggerFactory

from .config import LoggingConfig

# Custom log levels
TRACE_LEVEL = 5
logging.addLevelName(TRACE_LEVEL, "TRACE")

COMPONENT_LOGGERS = {
    "poly": "algebra.poly",
    "endo": "algebra.endo",
    "membership": "algebra.membership",
    "tame": "algebra.tame",
    "conditions": "services.conditions_service",
    "harness": "services.suite_service",
}

# Keys added by structlog.stdlib.ProcessorFormatter.wrap_for_formatter
_STRUCTLOG_PRIVATE = {"_logger", "_name", "_from_structlog", "_record"}


def _split_event(record: logging.LogRecord):
    """Return (message, context) for a record, unpacking structlog event dicts"""
    if isinstance(record.msg, dict):
        event = dict(record.msg)
        message = str(event.pop("event", ""))
        for key in ("logger", "level", "timestamp"):
            event.pop(key, None)
        return message, event
    return record.getMessage(), {}


class StructuredJSONFormatter(logging.Formatter):
    """JSON formatter for structured logging with context"""

    def __init__(self, include_context=True):
        super().__init__()
        self.include_context = include_context

    def format(self, record: logging.LogRecord) -> str:
        message, event_context = _split_event(record)
        log_entry = {
            "timestamp": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "function": record.funcName,
            "line": record.lineno,
            "message": message,
            "thread": threading.current_thread().name,
            "process": os.getpid(),
        }

        if record.exc_info:
            log_entry["exception"] = {
                "type": record.exc_info[0].__name__,
                "message": str(record.exc_info[1]),
                "traceback": traceback.format_exception(*record.exc_info)
            }

        context: Dict[str, Any] = {}
        if self.include_context and hasattr(record, "context"):
            context.update(record.context)
        context.update(event_context)
        if context:
            log_entry["context"] = context

        return json.dumps(log_entry, default=str, ensure_ascii=False)


class HumanReadableFormatter(logging.Formatter):
    """Human-readable columnar formatter - everything on one line"""

    LEVELS = {
        "TRACE": "TRC",
        "DEBUG": "DBG",
        "INFO": "INF",
        "WARNING": "WRN",
        "ERROR": "ERR",
        "CRITICAL": "CRT"
    }

    def format(self, record: logging.LogRecord) -> str:
        timestamp = datetime.fromtimestamp(record.created).strftime("%H:%M:%S")

        # algebra.membership -> membership, services.suite_service -> suite
        component = record.name.split(".")[-1].replace("_service", "")
        level = self.LEVELS.get(record.levelname, record.levelname[:3])

        message, event_context = _split_event(record)
        main_message = f"{timestamp} {level:3} {component:10} {message}"

        context = dict(getattr(record, "context", {}) or {})
        context.update(event_context)
        context_parts = [f"{k}={v}" for k, v in context.items() if k not in _STRUCTLOG_PRIVATE]
        if context_parts:
            main_message += f" [{', '.join(context_parts)}]"

        if record.levelno <= logging.DEBUG:
            main_message += f" @{record.funcName}:{record.lineno}"

        if record.exc_info:
            exc_msg = str(record.exc_info[1]) if record.exc_info[1] else "Exception"
            main_message += f" ERROR: {exc_msg}"

        return main_message


def _configure_structlog():
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        context_class=dict,
        logger_factory=LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


# Route structlog through stdlib from import time on, so library use never
# writes to stdout even when setup_logging was not called.
_configure_structlog()


def _parse_size(max_size: str) -> int:
    max_size_str = max_size.upper()
    if max_size_str.endswith("MB"):
        return int(max_size_str[:-2]) * 1024 * 1024
    if max_size_str.endswith("KB"):
        return int(max_size_str[:-2]) * 1024
    if max_size_str.endswith("GB"):
        return int(max_size_str[:-2]) * 1024 * 1024 * 1024
    return int(max_size_str)


def _level_number(name: str) -> int:
    name = name.upper()
    if name == "TRACE":
        return TRACE_LEVEL
    return getattr(logging, name)


def setup_logging(config: LoggingConfig, stream=None):
    """Install console (stderr) and optional rotating file handlers"""
    _configure_structlog()

    root_logger = logging.getLogger()
    log_level = _level_number(config.level)
    root_logger.setLevel(log_level)
    root_logger.handlers.clear()

    context_filter = ContextFilter()
    global _context_filter
    _context_filter = context_filter

    if config.format.lower() == "json":
        formatter: logging.Formatter = StructuredJSONFormatter(include_context=True)
    else:
        formatter = HumanReadableFormatter()

    console_handler = logging.StreamHandler(stream or sys.stderr)
    console_handler.setLevel(log_level)
    console_handler.addFilter(context_filter)
    console_handler.setFormatter(formatter)
    root_logger.addHandler(console_handler)

    if config.file:
        try:
            Path(config.file).parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.handlers.RotatingFileHandler(
                filename=config.file,
                maxBytes=_parse_size(config.max_size),
                backupCount=config.backup_count,
                encoding="utf-8"
            )
            file_handler.setLevel(log_level)
            file_handler.addFilter(context_filter)
            file_handler.setFormatter(formatter)
            root_logger.addHandler(file_handler)
        except OSError as e:
            print(f"Warning: Could not setup file logging: {e}", file=sys.stderr)

    for component, level in config.components.model_dump().items():
        logger_name = COMPONENT_LOGGERS.get(component)
        if logger_name:
            # a global level below the component level still wins
            logging.getLogger(logger_name).setLevel(min(_level_number(level), log_level))

    logging.getLogger(__name__).debug("Logging configured", extra={
        "log_level": config.level,
        "log_format": config.format,
        "log_file": config.file,
    })


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """Get a structured logger instance"""
    return structlog.get_logger(name)


class ContextFilter(logging.Filter):
    """Filter to add context information to log records"""

    def __init__(self):
        super().__init__()
        self.context_stack = threading.local()

    def filter(self, record):
        contexts = getattr(self.context_stack, "contexts", [])
        context = {}
        for ctx in contexts:
            context.update(ctx)
        if context:
            record.context = context
        return True

    def push_context(self, **kwargs):
        if not hasattr(self.context_stack, "contexts"):
            self.context_stack.contexts = []
        self.context_stack.contexts.append(kwargs)

    def pop_context(self):
        if getattr(self.context_stack, "contexts", None):
            return self.context_stack.contexts.pop()
        return {}


_context_filter: Optional[ContextFilter] = None


class LoggerMixin:
    """Mixin class with logging helpers for services"""

    @property
    def logger(self) -> structlog.stdlib.BoundLogger:
        return get_logger(self.__class__.__module__)

    def log_error(self, message: str, error: Exception = None, **context):
        """Log error with context"""
        extra = {
            "class_name": self.__class__.__name__,
            "error_type": type(error).__name__ if error else None
        }
        extra.update(context)
        self.logger.error(message, **extra)


@contextmanager
def log_context(**context):
    """Context manager for adding structured context to logs"""
    if _context_filter:
        _context_filter.push_context(**context)
    try:
        yield
    finally:
        if _context_filter:
            _context_filter.pop_context()


@contextmanager
def log_performance(operation: str, logger_name: str = None, **context):
    """Context manager for logging operation performance"""
    logger = get_logger(logger_name or "performance")
    start_time = time.perf_counter()

    try:
        yield
    except Exception as e:
        duration = time.perf_counter() - start_time
        logger.debug(f"Operation {operation} failed after {duration:.3f}s",
                     operation=operation, error_type=type(e).__name__, **context)
        raise

    duration = time.perf_counter() - start_time
    if duration > 5.0:
        logger.warning(f"Slow operation: {operation} took {duration:.3f}s", operation=operation, **context)
    else:
        logger.debug(f"Operation {operation} completed in {duration:.3f}s", operation=operation, **context)


def log_function_call(logger_name: str = None, level: str = "DEBUG"):
    """Decorator to log function calls with timing"""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            logger = get_logger(logger_name or func.__module__)
            start_time = time.perf_counter()
            getattr(logger, level.lower())(f"Calling {func.__name__}", function=func.__name__)

            try:
                result = func(*args, **kwargs)
            except Exception as e:
                duration = time.perf_counter() - start_time
                logger.debug(f"Function {func.__name__} raised {type(e).__name__}",
                             function=func.__name__, duration=round(duration, 4), error=str(e))
                raise

            duration = time.perf_counter() - start_time
            getattr(logger, level.lower())(f"Function {func.__name__} completed",
                                           function=func.__name__, duration=round(duration, 4))
            return result

        return wrapper
    return decorator

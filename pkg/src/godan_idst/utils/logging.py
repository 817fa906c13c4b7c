"""
logging.py

One-time structlog initialization for godan-idst.

Two renderers: JSON lines for sweeps whose logs are collected by other tools,
and a colorized console for interactive use. The choice comes from
``LOG_FORMAT`` in settings (``GODAN_LOG_FORMAT``). Logs go to stderr; stdout
is reserved for the artifacts the CLI writes.

Event values may be permutations, generator tags or tuples of them; they are
rendered in one-line notation so a terminal set logs as ``["1234", "2341"]``.
"""

import logging
import os
import sys
import threading
from collections.abc import MutableMapping
from typing import Any, cast

import structlog
from structlog.processors import CallsiteParameterAdder

from godan_idst.config import settings
from godan_idst.core.permutations import GeneratorTag, Permutation

_IS_CONFIGURED = False
_CONFIG_LOCK = threading.Lock()
_MAIN_PID = os.getpid()


def _get_log_format() -> str:
    value = str(settings.LOG_FORMAT).strip().lower()
    return "json" if value in {"json", "structured"} else "console"


def _render_value(value: Any) -> Any:
    if isinstance(value, Permutation | GeneratorTag):
        return str(value)
    if isinstance(value, tuple | list | frozenset | set):
        rendered = [_render_value(v) for v in value]
        return sorted(rendered) if isinstance(value, frozenset | set) else rendered
    return value


def render_permutations(
    _logger: Any, _method: str, event_dict: MutableMapping[str, Any]
) -> MutableMapping[str, Any]:
    """Replace permutation-valued fields by their one-line strings."""
    for key, value in event_dict.items():
        event_dict[key] = _render_value(value)
    return event_dict


def add_worker(
    _logger: Any, _method: str, event_dict: MutableMapping[str, Any]
) -> MutableMapping[str, Any]:
    """Tag events emitted inside a sweep worker process with its pid."""
    pid = os.getpid()
    if pid != _MAIN_PID:
        event_dict.setdefault("worker", pid)
    return event_dict


def configure_logging(
    level: int | str | None = None,
    log_format: str | None = None,
) -> None:
    """
    Configure structlog and stdlib logging once per process.

    Args:
        level: Root log level; defaults to ``settings.LOG_LEVEL``.
        log_format: ``json`` or ``console``; defaults to the configured format.
    """
    global _IS_CONFIGURED  # noqa: PLW0603

    with _CONFIG_LOCK:
        if _IS_CONFIGURED:
            return

        log_format = log_format or _get_log_format()
        logging.basicConfig(
            level=level or settings.LOG_LEVEL,
            format="%(message)s",
            stream=sys.stderr,
        )

        shared_processors = [
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt="iso", utc=True),
            CallsiteParameterAdder(
                parameters=[
                    structlog.processors.CallsiteParameter.MODULE,
                    structlog.processors.CallsiteParameter.FUNC_NAME,
                    structlog.processors.CallsiteParameter.LINENO,
                ]
            ),
            add_worker,
            render_permutations,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
        ]

        renderer: Any
        if log_format == "json":
            renderer = structlog.processors.JSONRenderer(sort_keys=True)
        else:
            renderer = structlog.dev.ConsoleRenderer(colors=sys.stderr.isatty())

        structlog.configure(
            processors=[structlog.stdlib.filter_by_level, *shared_processors, renderer],
            wrapper_class=structlog.stdlib.BoundLogger,
            context_class=dict,
            logger_factory=structlog.stdlib.LoggerFactory(),
            cache_logger_on_first_use=True,
        )

        _IS_CONFIGURED = True


def set_level(level: int | str) -> None:
    """Change the root log level after configuration (the CLI's -v/-q flags)."""
    configure_logging()
    logging.getLogger().setLevel(level)


def get_logger(name: str | None = None) -> structlog.stdlib.BoundLogger:
    configure_logging()
    if name is None:
        return cast(structlog.stdlib.BoundLogger, structlog.get_logger())
    return cast(structlog.stdlib.BoundLogger, structlog.get_logger(name))


def set_context(**kwargs: Any) -> None:
    """
    Bind contextvars for all subsequent log entries in this context.

    Example:
        set_context(n=5, subset_index=17)
    """
    structlog.contextvars.bind_contextvars(**kwargs)


def clear_context(*keys: str) -> None:
    if keys:
        structlog.contextvars.unbind_contextvars(*keys)
    else:
        structlog.contextvars.clear_contextvars()

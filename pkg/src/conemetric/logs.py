"""Logging bootstrap for the command line.

Library modules only create ``logging.getLogger(__name__)`` loggers; handlers are
installed here, once, by the CLI.
"""

from __future__ import annotations

import logging
import sys

import logfire

from conemetric.config import Settings

_FORMAT = "%(asctime)s %(levelname)s %(name)s - %(message)s"
_DATEFMT = "%Y-%m-%d %H:%M:%S"


def configure_logging(config: Settings, level: str | None = None) -> logging.Logger:
    """Attach a stderr handler to the package logger and optionally enable logfire.

    Args:
        config: Settings providing ``log_level`` and ``enable_logfire``.
        level: Overrides ``config.log_level`` when given.

    Returns:
        The configured ``conemetric`` logger.
    """
    logger = logging.getLogger("conemetric")
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(fmt=_FORMAT, datefmt=_DATEFMT))
        logger.addHandler(handler)
    logger.setLevel((level or config.log_level).upper())

    if config.enable_logfire:
        logfire.configure(send_to_logfire="if-token-present", console=False)
        if not any(isinstance(h, logfire.LogfireLoggingHandler) for h in logger.handlers):
            logger.addHandler(logfire.LogfireLoggingHandler())
    return logger

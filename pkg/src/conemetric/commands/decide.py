"""``conemetric decide``: existence verdict for a labeled divisor."""

from __future__ import annotations

import argparse
import logging

from conemetric.commands.base import (
    Command,
    CommandResult,
    RunConfig,
    read_divisor,
    verdict_exit_code,
)
from conemetric.engine import decide

logger = logging.getLogger(__name__)


def _configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="divisor JSON, inline or @path")


def run_decide(config: RunConfig) -> CommandResult:
    """Exit 0 for Exists, 1 for NotExists, 2 for OutOfScope."""
    d = read_divisor(config.input)
    verdict = decide(d)
    logger.info("decide: %s", verdict.status)
    return CommandResult(payload=verdict, exit_code=verdict_exit_code(verdict))


def get_decide_command() -> Command:
    return Command(
        name="decide",
        help="Decide whether a CSC-1 reducible metric with these cone angles exists.",
        configure=_configure,
        run=run_decide,
    )

"""Command-line entry point: ``conemetric <subcommand> ...``.

Results are printed as JSON on stdout (or written to ``--output``); errors are printed
as ``{"error": code, "message": ...}`` on stderr.

Exit codes: 0 Exists / check passed, 1 NotExists / check failed, 2 OutOfScope,
3 plan failure, 64 input error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

import logfire
from pydantic import ValidationError

from conemetric import __version__
from conemetric.commands import (
    get_decide_command,
    get_eval_metric_command,
    get_oracle_command,
    get_plan_command,
    get_verify_form_command,
)
from conemetric.commands.base import (
    EXIT_INPUT_ERROR,
    EXIT_PLAN_FAILURE,
    Command,
    CommandResult,
    RunConfig,
)
from conemetric.config import settings
from conemetric.errors import ConeMetricError, InputError, PlanFailure
from conemetric.logs import configure_logging

logger = logging.getLogger(__name__)


class _Parser(argparse.ArgumentParser):
    """Report usage errors as ``InputError`` so they map to exit 64."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise InputError(f"{self.prog}: {message}")


def get_commands() -> dict[str, Command]:
    commands = [
        get_decide_command(),
        get_plan_command(),
        get_verify_form_command(),
        get_eval_metric_command(),
        get_oracle_command(),
    ]
    return {c.name: c for c in commands}


def build_parser(commands: dict[str, Command]) -> argparse.ArgumentParser:
    parser = _Parser(
        prog="conemetric",
        description="Existence, construction and verification of CSC-1 reducible cone metrics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", help=f"logging level (default {settings.log_level})")
    parser.add_argument("--output", type=Path, metavar="PATH", help="write JSON here")
    subparsers = parser.add_subparsers(
        title="subcommands", dest="subcommand", required=True, parser_class=_Parser
    )
    for command in commands.values():
        sub = subparsers.add_parser(command.name, help=command.help, description=command.help)
        command.configure(sub)
    return parser


def _emit(result: CommandResult, output: Path | None) -> None:
    text = result.payload.model_dump_json(indent=settings.json_indent)
    if output is None:
        sys.stdout.write(text + "\n")
    else:
        output.write_text(text + "\n", encoding="utf-8")


def _fail(payload: dict, exit_code: int) -> int:
    sys.stderr.write(json.dumps(payload) + "\n")
    return exit_code


def _span(name: str):
    if settings.enable_logfire:
        return logfire.span("conemetric {subcommand}", subcommand=name)
    return contextlib.nullcontext()


def main(argv: Sequence[str] | None = None) -> int:
    """Parse ``argv``, run one subcommand and return its exit code."""
    commands = get_commands()
    try:
        args = build_parser(commands).parse_args(argv)
        config = RunConfig.from_namespace(args)
    except InputError as exc:
        return _fail(exc.to_payload(), EXIT_INPUT_ERROR)
    except ValidationError as exc:
        return _fail({"error": "InputError", "message": str(exc)}, EXIT_INPUT_ERROR)

    try:
        configure_logging(settings, config.log_level)
    except ValueError as exc:
        return _fail({"error": "InputError", "message": str(exc)}, EXIT_INPUT_ERROR)
    try:
        with _span(config.subcommand):
            result = commands[config.subcommand].run(config)
        _emit(result, config.output)
    except PlanFailure as exc:
        logger.error("plan failure: %s", exc.message)
        return _fail(exc.to_payload(), EXIT_PLAN_FAILURE)
    except ConeMetricError as exc:
        return _fail(exc.to_payload(), EXIT_INPUT_ERROR)
    except ValidationError as exc:
        return _fail({"error": "InputError", "message": str(exc)}, EXIT_INPUT_ERROR)
    except OSError as exc:
        return _fail({"error": "InputError", "message": str(exc)}, EXIT_INPUT_ERROR)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())

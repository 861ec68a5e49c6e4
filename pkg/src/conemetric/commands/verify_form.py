"""``conemetric verify-form``: check the character-form conditions of a 1-form."""

from __future__ import annotations

import argparse

from conemetric.commands.base import (
    EXIT_NOT_EXISTS,
    EXIT_OK,
    Command,
    CommandResult,
    RunConfig,
    read_json_argument,
)
from conemetric.oneforms import check_character_form, form_from_json


def _configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "input",
        help='form JSON, inline or @path, e.g. {"kind": "std2", "alpha": 3}',
    )


def run_verify_form(config: RunConfig) -> CommandResult:
    form = form_from_json(read_json_argument(config.input))
    report = check_character_form(form)
    return CommandResult(payload=report, exit_code=EXIT_OK if report.ok else EXIT_NOT_EXISTS)


def get_verify_form_command() -> Command:
    return Command(
        name="verify-form",
        help="Check residues, zero orders and divisor degree of a character 1-form.",
        configure=_configure,
        run=run_verify_form,
    )

"""Shared plumbing for the subcommands: run configuration, input parsing, exit codes."""

from __future__ import annotations

import argparse
import json
from collections.abc import Callable
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from conemetric.angles import validate
from conemetric.errors import InputError
from conemetric.schemas import SingularityDivisor, Verdict

EXIT_OK = 0
EXIT_NOT_EXISTS = 1
EXIT_OUT_OF_SCOPE = 2
EXIT_PLAN_FAILURE = 3
EXIT_INPUT_ERROR = 64

Subcommand = Literal["decide", "plan", "verify-form", "eval-metric", "oracle"]

# global flags that are not subcommand options
_GLOBAL = {"subcommand", "input", "output", "log_level"}


class RunConfig(BaseModel):
    """One invocation: the subcommand, its input and its options."""

    model_config = ConfigDict(frozen=True)

    subcommand: Subcommand
    input: str | None = None
    output: Path | None = None
    log_level: str | None = None
    options: dict[str, Any] = Field(default_factory=dict)

    @field_validator("options")
    @classmethod
    def _positive_tolerances(cls, options: dict[str, Any]) -> dict[str, Any]:
        for key in ("h", "tolerance", "count", "max_len", "max_entry", "max_numerator", "limit"):
            value = options.get(key)
            if value is not None and value <= 0:
                raise ValueError(f"--{key.replace('_', '-')} must be positive, got {value}")
        return options

    @classmethod
    def from_namespace(cls, args: argparse.Namespace) -> RunConfig:
        values = vars(args)
        return cls(
            subcommand=values["subcommand"],
            input=values.get("input"),
            output=values.get("output"),
            log_level=values.get("log_level"),
            options={k: v for k, v in values.items() if k not in _GLOBAL},
        )

    def option(self, name: str, default: Any = None) -> Any:
        value = self.options.get(name)
        return default if value is None else value


@dataclass(frozen=True)
class CommandResult:
    payload: BaseModel
    exit_code: int = EXIT_OK


@dataclass(frozen=True)
class Command:
    name: str
    help: str
    configure: Callable[[argparse.ArgumentParser], None]
    run: Callable[[RunConfig], CommandResult]


def read_json_argument(value: str | None) -> Any:
    """Parse inline JSON, or the file named after a leading ``@``.

    Raises:
        InputError: If the text is missing, unreadable or not JSON.
    """
    if value is None:
        raise InputError("missing JSON input")
    text = value
    if value.startswith("@"):
        path = Path(value[1:])
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}", path=path) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc.msg} at line {exc.lineno}") from exc


def read_divisor(value: str | None) -> SingularityDivisor:
    """Parse and validate a divisor argument; raises ``DivisorValidationError``."""
    data = read_json_argument(value)
    if not isinstance(data, dict):
        raise InputError("a divisor must be a JSON object")
    return validate(data)


def verdict_exit_code(verdict: Verdict) -> int:
    return {
        "exists": EXIT_OK,
        "not_exists": EXIT_NOT_EXISTS,
        "out_of_scope": EXIT_OUT_OF_SCOPE,
    }[verdict.status]


def parse_range(text: str) -> list[int]:
    """``"2..8"`` or ``"2,3,5"`` as a list of integers."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'a..b' or 'a,b,c', got {text!r}") from exc


def parse_annulus(text: str) -> tuple[float, float]:
    """``"rmin:rmax"`` with ``0 < rmin < rmax``."""
    try:
        lo, hi = (float(part) for part in text.split(":", 1))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'rmin:rmax', got {text!r}") from exc
    if not 0 < lo < hi:
        raise argparse.ArgumentTypeError(f"need 0 < rmin < rmax, got {text!r}")
    return lo, hi

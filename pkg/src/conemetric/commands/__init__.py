"""Subcommands of the conemetric command line."""

from .decide import get_decide_command
from .eval_metric import get_eval_metric_command
from .oracle import get_oracle_command
from .plan import get_plan_command
from .verify_form import get_verify_form_command

__all__ = [
    "get_decide_command",
    "get_eval_metric_command",
    "get_oracle_command",
    "get_plan_command",
    "get_verify_form_command",
]

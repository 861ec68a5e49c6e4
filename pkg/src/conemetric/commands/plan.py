"""``conemetric plan``: football-gluing plans for an Exists divisor."""

from __future__ import annotations

import argparse
import logging
from pathlib import Path

from pydantic import BaseModel

from conemetric.commands.base import (
    EXIT_OK,
    Command,
    CommandResult,
    RunConfig,
    read_divisor,
    verdict_exit_code,
)
from conemetric.config import settings
from conemetric.engine import decide, decide_three_integer
from conemetric.planner import Plan, build_plan, enumerate_plans, to_dot
from conemetric.schemas import SingularityDivisor, Verdict

logger = logging.getLogger(__name__)


class PlanSet(BaseModel):
    """Alternative plans for one divisor."""

    divisor: SingularityDivisor
    plans: list[Plan]


def _configure(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="divisor JSON, inline or @path")
    parser.add_argument("--emit-dot", type=Path, metavar="PATH", help="also write graphviz dot")
    parser.add_argument(
        "--enumerate",
        action="store_true",
        help="emit alternative plans (one per feasible saddle choice for integer triples)",
    )
    parser.add_argument("--limit", type=int, help="maximum number of enumerated plans")


def alternative_plans(d: SingularityDivisor, verdict: Verdict, limit: int) -> list[Plan]:
    """Distinct plans; all-integer triples get one plan per feasible saddle choice."""
    cert = verdict.certificate
    specs = cert.feasible_saddle_specs
    if not specs:
        return enumerate_plans(d, cert, limit)
    angles = [int(a) for a in (*d.saddles, *d.minima, *d.maxima)]
    plans = []
    for spec in specs[:limit]:
        variant = decide_three_integer(angles, spec).certificate
        plans.append(build_plan(d, variant))
    return plans


def run_plan(config: RunConfig) -> CommandResult:
    """Decide, then plan; non-Exists verdicts are echoed with their exit code.

    ``PlanFailure`` propagates (exit 3): a valid certificate always has a plan.
    """
    d = read_divisor(config.input)
    verdict = decide(d)
    if not verdict.is_exists:
        logger.info("no plan: verdict is %s", verdict.status)
        return CommandResult(payload=verdict, exit_code=verdict_exit_code(verdict))

    if config.option("enumerate", False):
        limit = config.option("limit", settings.planner.enumerate_limit)
        plans = alternative_plans(d, verdict, limit)
        payload: BaseModel = PlanSet(divisor=d, plans=plans)
    else:
        plans = [build_plan(d, verdict.certificate)]
        payload = plans[0]

    dot_path = config.option("emit_dot")
    if dot_path is not None:
        graphs = [to_dot(p.root, name=f"plan_{k}") for k, p in enumerate(plans)]
        Path(dot_path).write_text("".join(graphs), encoding="utf-8")
        logger.info("wrote %d dot graphs to %s", len(graphs), dot_path)
    return CommandResult(payload=payload, exit_code=EXIT_OK)


def get_plan_command() -> Command:
    return Command(
        name="plan",
        help="Build and verify a football-gluing construction plan.",
        configure=_configure,
        run=run_plan,
    )

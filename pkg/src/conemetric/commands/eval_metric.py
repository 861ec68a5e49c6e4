"""``conemetric eval-metric``: numerical checks of a football or form metric."""

from __future__ import annotations

import argparse
import logging
from pathlib import Path

from pydantic import BaseModel

from conemetric.commands.base import (
    EXIT_NOT_EXISTS,
    EXIT_OK,
    Command,
    CommandResult,
    RunConfig,
    parse_annulus,
    read_divisor,
    read_json_argument,
)
from conemetric.engine import decide
from conemetric.errors import InputError
from conemetric.metric import (
    ConeFit,
    GridReport,
    MetricField,
    cone_angle_fit,
    curvature_residual,
    explicit_football_metric,
    form_metric,
    geodesic_min_to_max_length,
)
from conemetric.oneforms import INFINITY, form_from_divisor, form_from_json
from conemetric.schemas import parse_rational

logger = logging.getLogger(__name__)


class PointFit(BaseModel):
    location: str
    fit: ConeFit


class MetricReport(BaseModel):
    label: str
    tolerance: float
    ok: bool
    curvature: GridReport
    cone_fits: list[PointFit]
    geodesic_length: float | None = None


def _configure(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--alpha", help="football angle as 'p/q' (closed-form metric)")
    source.add_argument("--form", help="character form JSON, inline or @path")
    source.add_argument("--divisor", help="football divisor JSON; its std1 form is used")
    parser.add_argument("--b", type=float, help="shift for an integer-angle football")
    parser.add_argument("--phi0", type=float, default=2.0, help="Phi at the basepoint")
    parser.add_argument("--h", type=float, default=1e-3, help="stencil step")
    parser.add_argument(
        "--annulus", type=parse_annulus, default=(0.2, 5.0), help="sampled annulus rmin:rmax"
    )
    parser.add_argument("--tolerance", type=float, default=1e-4, help="max allowed |K - 1|")
    parser.add_argument("--report", type=Path, metavar="PATH", help="CSV of grid samples")


def _field(config: RunConfig) -> MetricField:
    alpha = config.option("alpha")
    b = config.option("b")
    if alpha is not None:
        try:
            angle = parse_rational(alpha)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        return explicit_football_metric(angle, b)
    if b is not None:
        raise InputError("--b only applies with --alpha")
    phi0 = config.option("phi0", 2.0)
    if config.option("form") is not None:
        form = form_from_json(read_json_argument(config.option("form")))
        return form_metric(form, phi0)
    d = read_divisor(config.option("divisor"))
    verdict = decide(d)
    if not verdict.is_exists:
        raise InputError(f"the divisor has no metric ({verdict.status})")
    return form_metric(form_from_divisor(d, verdict.certificate), phi0)


def _is_football(field: MetricField) -> bool:
    if field.form is not None:
        return field.form.kind == "std1"
    return field.radial_symmetric


def run_eval_metric(config: RunConfig) -> CommandResult:
    """Curvature residual, cone-angle fits and, for footballs, the min-to-max length."""
    field = _field(config)
    tolerance = config.option("tolerance", 1e-4)
    grid = curvature_residual(
        field, h=config.option("h", 1e-3), annulus=config.option("annulus", (0.2, 5.0))
    )
    report_path = config.option("report")
    if report_path is not None:
        grid.to_csv(report_path)
        logger.info("wrote %d grid samples to %s", grid.points, report_path)

    fits = [
        PointFit(
            location=INFINITY if s.location == INFINITY else str(complex(s.location)),
            fit=cone_angle_fit(field, s.location),
        )
        for s in field.singular
    ]
    length = geodesic_min_to_max_length(field) if _is_football(field) else None
    ok = grid.max_residual <= tolerance
    report = MetricReport(
        label=field.label,
        tolerance=tolerance,
        ok=ok,
        curvature=grid.model_copy(update={"samples": []}),
        cone_fits=fits,
        geodesic_length=length,
    )
    return CommandResult(payload=report, exit_code=EXIT_OK if ok else EXIT_NOT_EXISTS)


def get_eval_metric_command() -> Command:
    return Command(
        name="eval-metric",
        help="Check curvature, cone angles and geodesic length of a metric numerically.",
        configure=_configure,
        run=run_eval_metric,
    )


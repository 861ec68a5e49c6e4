"""Football-gluing construction plans for Exists certificates."""

from conemetric.errors import PlanFailure
from conemetric.planner.dot import to_dot
from conemetric.planner.genus import plan_positive_genus
from conemetric.planner.sphere import enumerate_sphere_plans, plan_sphere
from conemetric.planner.tree import (
    FootballLeaf,
    HandleGlue,
    Junction,
    Plan,
    PlanNode,
    PlanPoint,
    PlanSummary,
    SlitGlue,
    SurfaceDescriptor,
    leaves,
    mirror_plan,
    summarize,
    surface_mass,
)
from conemetric.planner.verify import PlanViolation, VerificationReport, verify_plan
from conemetric.schemas import Certificate, SingularityDivisor


def build_plan(d: SingularityDivisor, cert: Certificate) -> Plan:
    """Dispatch to the sphere or positive-genus planner."""
    if cert.divisor.genus == 0:
        return plan_sphere(d, cert)
    return plan_positive_genus(d, cert)


def enumerate_plans(
    d: SingularityDivisor, cert: Certificate, limit: int | None = None
) -> list[Plan]:
    """Alternative plans for one certificate; positive genus yields the default plan only."""
    if cert.divisor.genus == 0:
        return enumerate_sphere_plans(d, cert, limit)
    return [plan_positive_genus(d, cert)]


__all__ = [
    "FootballLeaf",
    "HandleGlue",
    "Junction",
    "Plan",
    "PlanFailure",
    "PlanNode",
    "PlanPoint",
    "PlanSummary",
    "PlanViolation",
    "SlitGlue",
    "SurfaceDescriptor",
    "VerificationReport",
    "build_plan",
    "enumerate_plans",
    "leaves",
    "mirror_plan",
    "plan_positive_genus",
    "plan_sphere",
    "summarize",
    "surface_mass",
    "to_dot",
    "verify_plan",
]

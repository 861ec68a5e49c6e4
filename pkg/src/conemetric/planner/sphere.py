"""Football-gluing plans on the sphere."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from fractions import Fraction

from conemetric.angles import swap_orientation
from conemetric.config import settings
from conemetric.engine import residue_vector_for, revalidate_certificate
from conemetric.errors import PlanFailure
from conemetric.planner.search import (
    ExtremalSlit,
    HandleCut,
    InteriorSlit,
    Move,
    SaddleHandleCut,
    SearchBudget,
    State,
    enumerate_sphere,
    search_sphere,
)
from conemetric.planner.tree import (
    Plan,
    PlanNode,
    PlanPoint,
    SurfaceDescriptor,
    TreeBuilder,
    mirror_plan,
    summarize,
)
from conemetric.planner.verify import verify_plan
from conemetric.schemas import Certificate, Role, SingularityDivisor

logger = logging.getLogger(__name__)


def _take(
    surface: SurfaceDescriptor, role: Role, angle: Fraction, exclude: set[int]
) -> PlanPoint:
    for p in surface.points:
        if p.role == role and p.angle == angle and p.id not in exclude:
            exclude.add(p.id)
            return p
    raise PlanFailure(f"no free {role} of angle {angle} on the child surface")


def _saddle(surface: SurfaceDescriptor, value: int, exclude: set[int]) -> PlanPoint | None:
    """The child point left after lowering a saddle of ``value``; fresh when it reaches 1."""
    if value - 1 < 2:
        return None
    return _take(surface, Role.SADDLE, Fraction(value - 1), exclude)


def _extremal(surface: SurfaceDescriptor, residue: Fraction, exclude: set[int]) -> PlanPoint:
    role = Role.MINIMUM if residue > 0 else Role.MAXIMUM
    return _take(surface, role, abs(residue), exclude)


def assemble(state: State, moves: Sequence[Move], builder: TreeBuilder) -> PlanNode:
    """Materialize a move sequence found from ``state`` into a gluing tree."""
    if not moves:
        if not state.is_football:
            raise PlanFailure(f"search ended on a non-football state {state}")
        return builder.football(state.comps[0])

    move, rest = moves[0], moves[1:]
    child = assemble(move.apply(state), rest, builder)
    surface, used = child.surface, set()

    if isinstance(move, ExtremalSlit):
        sp = _saddle(surface, move.saddle, used)
        x = _extremal(surface, move.positive - move.negative, used)
        ball = builder.football(move.football)
        joined = ball.minimum if move.positive > move.negative else ball.maximum
        return builder.slit(child, ball, [(sp, None), (x, joined)])

    if isinstance(move, InteriorSlit):
        first = _saddle(surface, move.saddles[0], used)
        second = _saddle(surface, move.saddles[1], used)
        ball = builder.football(move.football)
        return builder.slit(child, ball, [(first, None), (second, None)])

    if isinstance(move, HandleCut):
        sp = _saddle(surface, move.saddle, used)
        piece, rest_piece = move.pieces
        a = _extremal(surface, piece, used)
        b = _extremal(surface, rest_piece, used)
        return builder.handle(child, [(sp, None), (a, b)])

    if isinstance(move, SaddleHandleCut):
        first = _saddle(surface, move.saddles[0], used)
        second = _saddle(surface, move.saddles[1], used)
        return builder.handle(child, [(first, None), (second, None)])

    raise PlanFailure(f"unknown move {move!r}")


def initial_state(cert: Certificate) -> State:
    realized = cert.divisor
    return State.of(
        realized.genus, realized.saddles, residue_vector_for(realized, cert.p, cert.q)
    )


def target_divisor(cert: Certificate) -> SingularityDivisor:
    """The labeling the finished plan realizes."""
    return swap_orientation(cert.divisor) if cert.orientation_swapped else cert.divisor


def check_certificate(d: SingularityDivisor, cert: Certificate) -> None:
    problems = revalidate_certificate(d, cert)
    if problems:
        raise PlanFailure("certificate does not re-validate: " + "; ".join(problems))


def finish_plan(cert: Certificate, root: PlanNode) -> Plan:
    """Undo the orientation swap, verify and wrap the tree.

    Raises:
        PlanFailure: If the tree fails verification.
    """
    if cert.orientation_swapped:
        root = mirror_plan(root)
    target = target_divisor(cert)
    report = verify_plan(root, divisor=target, certificate=cert)
    if not report.ok:
        first = report.violations[0]
        raise PlanFailure(
            f"generated plan failed verification: {first.kind} at {first.path}: {first.detail}"
        )
    return Plan(divisor=target, certificate=cert, root=root, summary=summarize(root))


def plan_sphere(
    d: SingularityDivisor, cert: Certificate, *, max_nodes: int | None = None
) -> Plan:
    """Build a verified football-gluing plan for a genus-zero certificate.

    Args:
        d: The input divisor the certificate was issued for.
        cert: An Exists certificate from a sphere decider.
        max_nodes: Search budget; defaults to ``settings.planner.max_nodes``.

    Returns:
        The plan, already checked by ``verify_plan``.

    Raises:
        PlanFailure: If the certificate is inconsistent or no plan is found.
    """
    if cert.divisor.genus != 0:
        raise PlanFailure("plan_sphere needs a genus-zero certificate", genus=cert.divisor.genus)
    check_certificate(d, cert)
    state = initial_state(cert)
    if not state.realizable():
        raise PlanFailure(f"certificate state {state} is not realizable")

    budget = SearchBudget(max_nodes or settings.planner.max_nodes)
    moves = search_sphere(state, budget)
    if moves is None:
        raise PlanFailure(f"no football decomposition found for {state}")
    logger.debug("sphere plan: %d moves, %d states visited", len(moves), budget.visited)
    return finish_plan(cert, assemble(state, moves, TreeBuilder()))


def enumerate_sphere_plans(
    d: SingularityDivisor,
    cert: Certificate,
    limit: int | None = None,
    *,
    max_nodes: int | None = None,
) -> list[Plan]:
    """Up to ``limit`` distinct sphere plans, the default plan first."""
    check_certificate(d, cert)
    limit = limit or settings.planner.enumerate_limit
    state = initial_state(cert)
    budget = SearchBudget(max_nodes or settings.planner.max_nodes)
    plans: list[Plan] = []
    try:
        for moves in enumerate_sphere(state, budget):
            plans.append(finish_plan(cert, assemble(state, moves, TreeBuilder())))
            if len(plans) >= limit:
                break
    except PlanFailure:
        if not plans:
            raise
        logger.info("plan enumeration stopped after %d plans", len(plans))
    return plans

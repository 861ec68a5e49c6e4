"""Plans in positive genus.

Handles are removed one at a time, top down. The default removal lowers the largest
saddle by one and splits one extremal residue ``c`` at genus ``h`` into
``c/(h+1) + c*h/(h+1)``, continuing on the larger piece; for ``M_{2g+1,beta,beta}``
this ends with ``g + 1`` footballs of angle ``beta/(g+1)``. Other split ratios and
handles through two saddles are tried when that branch dead-ends. Divisors without
extremal cone points need smooth extremal points split as well; that pass runs after
the restricted one fails unless unit splits are enabled from the start.
"""

from __future__ import annotations

import logging

from conemetric.config import settings
from conemetric.errors import PlanFailure
from conemetric.planner.search import SearchBudget, search_genus
from conemetric.planner.sphere import assemble, check_certificate, finish_plan, initial_state
from conemetric.planner.tree import Plan, TreeBuilder
from conemetric.schemas import Certificate, SingularityDivisor

logger = logging.getLogger(__name__)


def plan_positive_genus(
    d: SingularityDivisor,
    cert: Certificate,
    *,
    allow_unit_leaves: bool | None = None,
    max_nodes: int | None = None,
) -> Plan:
    """Build a verified plan with exactly ``g`` handle gluings.

    Args:
        d: The input divisor.
        cert: An Exists certificate from ``decide_positive_genus``.
        allow_unit_leaves: Split smooth extremal points (residue +-1) from the start.
            Defaults to ``settings.planner.allow_unit_leaves``. When off, unit splits are
            still tried after the restricted search fails, which divisors without
            extremal cone points need.
        max_nodes: Search budget for each pass.

    Raises:
        PlanFailure: If the certificate is inconsistent or no plan is found.
    """
    if cert.divisor.genus < 1:
        raise PlanFailure("plan_positive_genus needs genus >= 1")
    check_certificate(d, cert)
    allow_unit = (
        settings.planner.allow_unit_leaves if allow_unit_leaves is None else allow_unit_leaves
    )
    state = initial_state(cert)
    limit = max_nodes or settings.planner.max_nodes
    passes = (True,) if allow_unit else (False, True)
    for unit in passes:
        budget = SearchBudget(limit)
        try:
            moves = search_genus(state, budget, unit)
        except PlanFailure:
            if unit:
                raise
            moves = None
        if moves is not None:
            break
        logger.debug("no handle decomposition for %s with unit splits=%s", state, unit)
    else:
        raise PlanFailure(f"no handle decomposition found for {state}")
    logger.debug("genus plan: %d moves, %d states visited", len(moves), budget.visited)
    return finish_plan(cert, assemble(state, moves, TreeBuilder()))

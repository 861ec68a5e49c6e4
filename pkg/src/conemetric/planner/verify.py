"""Bottom-up verification of gluing trees with exact arithmetic."""

from __future__ import annotations

import logging
from collections import Counter
from fractions import Fraction

from pydantic import BaseModel, ConfigDict

from conemetric.angles import role_multiset
from conemetric.planner.tree import (
    FootballLeaf,
    HandleGlue,
    JunctionError,
    PlanNode,
    PlanPoint,
    SlitGlue,
    SurfaceDescriptor,
    iter_nodes,
    junction_point,
    slit_tag,
    surface_mass,
)
from conemetric.schemas import Certificate, Role, SingularityDivisor

logger = logging.getLogger(__name__)


class PlanViolation(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: str
    path: str
    detail: str


class VerificationReport(BaseModel):
    ok: bool
    violations: list[PlanViolation] = []
    nodes: int = 0

    @property
    def first(self) -> PlanViolation | None:
        return self.violations[0] if self.violations else None

    @property
    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


class _Checker:
    def __init__(self) -> None:
        self.violations: list[PlanViolation] = []

    def add(self, kind: str, path: str, detail: str) -> None:
        self.violations.append(PlanViolation(kind=kind, path=path, detail=detail))

    def saddles(self, path: str, surface: SurfaceDescriptor) -> None:
        for p in surface.points:
            if p.role == Role.SADDLE and (p.angle.denominator != 1 or p.angle < 2):
                self.add("SaddleNotInteger", path, f"saddle {p.id} has angle {p.angle}")

    def leaf(self, path: str, node: FootballLeaf) -> None:
        lo, hi = node.minimum, node.maximum
        if lo.angle != hi.angle or lo.role != Role.MINIMUM or hi.role != Role.MAXIMUM:
            self.add(
                "UnequalFootballLeaf",
                path,
                f"football ({lo.role} {lo.angle}, {hi.role} {hi.angle})",
            )
        if node.surface.genus != 0:
            self.add("GenusMismatch", path, "a football has genus 0")
        if sorted(node.surface.points, key=lambda p: p.id) != sorted((lo, hi), key=lambda p: p.id):
            self.add("DescriptorMismatch", path, "leaf surface differs from its two points")

    def _resolve(
        self, path: str, ref: int | None, pool: dict[int, PlanPoint], used: set[int]
    ) -> tuple[bool, PlanPoint | None]:
        if ref is None:
            return True, None
        if ref not in pool:
            self.add("UnknownPoint", path, f"junction source {ref} is not on the glued piece")
            return False, None
        if ref in used:
            self.add("DuplicateEndpoint", path, f"point {ref} is used by two junctions")
            return False, None
        used.add(ref)
        return True, pool[ref]

    def gluing(self, path: str, node: SlitGlue | HandleGlue) -> None:
        if isinstance(node, SlitGlue):
            pools = (node.left.surface.by_id(), node.right.surface.by_id())
            pieces = [node.left.surface, node.right.surface]
            genus = node.left.surface.genus + node.right.surface.genus
            overlap = set(pools[0]) & set(pools[1])
            if overlap:
                self.add("DescriptorMismatch", path, f"point ids {sorted(overlap)} on both pieces")
        else:
            pool = node.child.surface.by_id()
            pools = (pool, pool)
            pieces = [node.child.surface]
            genus = node.child.surface.genus + 1

        used: set[int] = set()
        ends: list[tuple[PlanPoint | None, PlanPoint | None]] = []
        made: list[PlanPoint] = []
        sound = True
        for junction in node.junctions:
            ok_a, a = self._resolve(path, junction.sources[0], pools[0], used)
            ok_b, b = self._resolve(path, junction.sources[1], pools[1], used)
            sound = sound and ok_a and ok_b
            ends.append((a, b))
            try:
                made.append(junction_point(junction.target, a, b))
            except JunctionError as exc:
                self.add(exc.kind, path, exc.detail)
                sound = False

        first_slit = slit_tag(ends[0][0], ends[1][0])
        second_slit = slit_tag(ends[0][1], ends[1][1])
        if first_slit != second_slit or node.slit != first_slit:
            self.add(
                "SlitTagMismatch",
                path,
                f"declared {node.slit}, slit ends give {first_slit} and {second_slit}",
            )

        if node.surface.genus != genus:
            self.add("GenusMismatch", path, f"genus {node.surface.genus}, expected {genus}")

        if sound:
            kept = [p for piece in pieces for p in piece.points if p.id not in used]
            expected = {p.id: (p.angle, p.role) for p in [*kept, *made]}
            declared = {p.id: (p.angle, p.role) for p in node.surface.points}
            if expected != declared:
                self.add("DescriptorMismatch", path, "glued surface differs from the junction rule")

        parts = sum((surface_mass(piece) for piece in pieces), Fraction(0))
        if surface_mass(node.surface) != parts:
            self.add(
                "MassNotAdditive",
                path,
                f"mass {surface_mass(node.surface)} != {parts} from the glued pieces",
            )


def _root_key(surface: SurfaceDescriptor) -> list[tuple[Role, Fraction]]:
    return sorted(
        (p.role, p.angle) for p in surface.points if p.role == Role.SADDLE or p.angle != 1
    )


def verify_plan(
    tree: PlanNode,
    divisor: SingularityDivisor | None = None,
    certificate: Certificate | None = None,
) -> VerificationReport:
    """Check every gluing invariant bottom-up.

    Args:
        tree: The root node.
        divisor: When given, the root must realize exactly these labeled angles.
        certificate: When given, the root's smooth minima and maxima must number
            ``p`` and ``q`` (exchanged for orientation-swapped certificates).

    Returns:
        A report listing every violation in post-order; ``ok`` when there are none.
    """
    checker = _Checker()
    count = 0
    for path, node in iter_nodes(tree):
        count += 1
        checker.saddles(path, node.surface)
        if isinstance(node, FootballLeaf):
            checker.leaf(path, node)
        else:
            checker.gluing(path, node)

    root = tree.surface
    if divisor is not None:
        if root.genus != divisor.genus:
            checker.add("GenusMismatch", "root", f"root genus {root.genus} != {divisor.genus}")
        if _root_key(root) != role_multiset(divisor):
            checker.add(
                "RootMismatch",
                "root",
                f"root points {_root_key(root)} do not match {role_multiset(divisor)}",
            )
    if certificate is not None:
        smooth = Counter(p.role for p in root.points if p.role != Role.SADDLE and p.angle == 1)
        p, q = certificate.p, certificate.q
        if certificate.orientation_swapped:
            p, q = q, p
        if (smooth[Role.MINIMUM], smooth[Role.MAXIMUM]) != (p, q):
            checker.add(
                "RootMismatch",
                "root",
                f"smooth extremal points ({smooth[Role.MINIMUM]}, {smooth[Role.MAXIMUM]}) "
                f"!= (p, q) = ({p}, {q})",
            )

    if checker.violations:
        logger.info("plan rejected: %s", [(v.kind, v.path) for v in checker.violations])
    return VerificationReport(ok=not checker.violations, violations=checker.violations, nodes=count)


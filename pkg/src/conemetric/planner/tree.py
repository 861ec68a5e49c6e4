"""Gluing-tree models and the junction bookkeeping rule.

A plan is a tree whose leaves are footballs S^2_{c,c}. Inner nodes glue two surfaces
along a slit (``SlitGlue``) or identify two slits of one surface crosswise
(``HandleGlue``, genus + 1). Each gluing has two junctions; a junction identifies one
slit endpoint on each side and produces one point of the glued surface:

- angles add, a fresh regular endpoint counting as angle 1;
- two extremal endpoints of the same role give an extremal point of that role;
- two non-extremal endpoints (saddles or fresh points) give a saddle.

Every node carries the ``SurfaceDescriptor`` it produces, so a tree can be checked
bottom-up without re-running the search that built it.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import count
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field

from conemetric.schemas import Certificate, Rational, Role, SingularityDivisor

SLIT_HALF_TURN = "λ=π"
SLIT_SHORT = "0<λ<π"
SlitTag = Literal["0<λ<π", "λ=π"]

_MIRROR = {Role.MINIMUM: Role.MAXIMUM, Role.MAXIMUM: Role.MINIMUM, Role.SADDLE: Role.SADDLE}


class PlanPoint(BaseModel):
    """A cone point (or smooth extremal point) of some intermediate surface."""

    model_config = ConfigDict(frozen=True)

    id: int
    angle: Rational
    role: Role

    @property
    def extremal(self) -> bool:
        return self.role != Role.SADDLE

    @property
    def residue(self) -> Fraction:
        """Signed residue of an extremal point; zero for saddles."""
        if self.role == Role.MINIMUM:
            return self.angle
        if self.role == Role.MAXIMUM:
            return -self.angle
        return Fraction(0)


class SurfaceDescriptor(BaseModel):
    model_config = ConfigDict(frozen=True)

    genus: int = Field(default=0, ge=0)
    points: tuple[PlanPoint, ...] = ()

    def by_id(self) -> dict[int, PlanPoint]:
        return {p.id: p for p in self.points}


class Junction(BaseModel):
    """Identification of two slit endpoints; ``None`` is a fresh regular point."""

    model_config = ConfigDict(frozen=True)

    sources: tuple[int | None, int | None]
    target: int


class FootballLeaf(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["football"] = "football"
    minimum: PlanPoint
    maximum: PlanPoint
    surface: SurfaceDescriptor


class SlitGlue(BaseModel):
    """Glue ``right`` onto ``left`` along one slit cut in each."""

    model_config = ConfigDict(frozen=True)

    kind: Literal["slit"] = "slit"
    left: PlanNode
    right: PlanNode
    junctions: tuple[Junction, Junction]
    slit: SlitTag = SLIT_SHORT
    surface: SurfaceDescriptor


class HandleGlue(BaseModel):
    """Cut two slits in ``child`` and identify them crosswise (genus + 1).

    The first slit runs between the first sources of the two junctions, the second
    slit between the second sources.
    """

    model_config = ConfigDict(frozen=True)

    kind: Literal["handle"] = "handle"
    child: PlanNode
    junctions: tuple[Junction, Junction]
    slit: SlitTag = SLIT_SHORT
    surface: SurfaceDescriptor


PlanNode = Annotated[Union[FootballLeaf, SlitGlue, HandleGlue], Field(discriminator="kind")]

SlitGlue.model_rebuild()
HandleGlue.model_rebuild()


class PlanSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    leaves: int
    slit_glues: int
    handles: int
    footballs: tuple[Rational, ...]
    saddles_on_common_geodesic: bool | None = None


class Plan(BaseModel):
    """A verified gluing tree together with what it realizes."""

    model_config = ConfigDict(frozen=True)

    divisor: SingularityDivisor
    certificate: Certificate
    root: PlanNode
    summary: PlanSummary


class JunctionError(ValueError):
    """A junction whose endpoints break the bookkeeping rule."""

    def __init__(self, kind: str, detail: str) -> None:
        super().__init__(detail)
        self.kind = kind
        self.detail = detail


def junction_point(
    target: int, first: PlanPoint | None, second: PlanPoint | None
) -> PlanPoint:
    """The point produced by identifying ``first`` with ``second``.

    Raises:
        JunctionError: With kind ``RoleMismatch`` or ``SaddleNotInteger``.
    """
    angle = (first.angle if first else Fraction(1)) + (second.angle if second else Fraction(1))
    roles = [p.role for p in (first, second) if p is not None and p.extremal]
    if not roles:
        if angle.denominator != 1:
            raise JunctionError("SaddleNotInteger", f"saddle junction with angle {angle}")
        return PlanPoint(id=target, angle=angle, role=Role.SADDLE)
    if len(roles) == 2 and roles[0] == roles[1]:
        return PlanPoint(id=target, angle=angle, role=roles[0])
    raise JunctionError(
        "RoleMismatch",
        f"junction {target} joins {first.role if first else 'fresh'} "
        f"with {second.role if second else 'fresh'}",
    )


def slit_tag(first: PlanPoint | None, second: PlanPoint | None) -> SlitTag:
    """Half-turn slits join a minimum to a maximum; every other slit is shorter."""
    if first is not None and second is not None and first.extremal and second.extremal:
        if first.role != second.role:
            return SLIT_HALF_TURN
    return SLIT_SHORT


def surface_mass(surface: SurfaceDescriptor) -> Fraction:
    """(2 - 2g) + sum(angle - 1) of a descriptor."""
    return Fraction(2 - 2 * surface.genus) + sum(
        (p.angle - 1 for p in surface.points), Fraction(0)
    )


def children(node: PlanNode) -> list[tuple[str, PlanNode]]:
    if isinstance(node, SlitGlue):
        return [("left", node.left), ("right", node.right)]
    if isinstance(node, HandleGlue):
        return [("child", node.child)]
    return []


def iter_nodes(node: PlanNode, path: str = "root"):
    """Post-order walk yielding ``(path, node)``."""
    for name, child in children(node):
        yield from iter_nodes(child, f"{path}.{name}")
    yield path, node


def leaves(node: PlanNode) -> list[FootballLeaf]:
    return [n for _, n in iter_nodes(node) if isinstance(n, FootballLeaf)]


def summarize(root: PlanNode) -> PlanSummary:
    nodes = [n for _, n in iter_nodes(root)]
    footballs = tuple(sorted(leaf.minimum.angle for leaf in leaves(root)))
    genus_zero = root.surface.genus == 0
    return PlanSummary(
        leaves=len(footballs),
        slit_glues=sum(isinstance(n, SlitGlue) for n in nodes),
        handles=sum(isinstance(n, HandleGlue) for n in nodes),
        footballs=footballs,
        saddles_on_common_geodesic=True if genus_zero else None,
    )


def _mirror_point(p: PlanPoint) -> PlanPoint:
    return p.model_copy(update={"role": _MIRROR[p.role]})


def _mirror_surface(s: SurfaceDescriptor) -> SurfaceDescriptor:
    return s.model_copy(update={"points": tuple(_mirror_point(p) for p in s.points)})


def mirror_plan(node: PlanNode) -> PlanNode:
    """Exchange minima and maxima throughout (Phi -> 4 - Phi)."""
    surface = _mirror_surface(node.surface)
    if isinstance(node, FootballLeaf):
        return node.model_copy(
            update={
                "minimum": _mirror_point(node.maximum),
                "maximum": _mirror_point(node.minimum),
                "surface": surface,
            }
        )
    if isinstance(node, SlitGlue):
        return node.model_copy(
            update={
                "left": mirror_plan(node.left),
                "right": mirror_plan(node.right),
                "surface": surface,
            }
        )
    return node.model_copy(update={"child": mirror_plan(node.child), "surface": surface})


class TreeBuilder:
    """Allocates point ids and assembles nodes with their descriptors."""

    def __init__(self) -> None:
        self._ids = count(1)

    def new_id(self) -> int:
        return next(self._ids)

    def football(self, c: Fraction) -> FootballLeaf:
        lo = PlanPoint(id=self.new_id(), angle=c, role=Role.MINIMUM)
        hi = PlanPoint(id=self.new_id(), angle=c, role=Role.MAXIMUM)
        return FootballLeaf(
            minimum=lo, maximum=hi, surface=SurfaceDescriptor(genus=0, points=(lo, hi))
        )

    def _targets(
        self,
        pairs: list[tuple[PlanPoint | None, PlanPoint | None]],
    ) -> tuple[tuple[Junction, Junction], list[PlanPoint]]:
        junctions, made = [], []
        for first, second in pairs:
            target = self.new_id()
            made.append(junction_point(target, first, second))
            junctions.append(
                Junction(
                    sources=(first.id if first else None, second.id if second else None),
                    target=target,
                )
            )
        return (junctions[0], junctions[1]), made

    def slit(
        self,
        left: PlanNode,
        right: PlanNode,
        pairs: list[tuple[PlanPoint | None, PlanPoint | None]],
    ) -> SlitGlue:
        junctions, made = self._targets(pairs)
        used = {p.id for pair in pairs for p in pair if p is not None}
        kept = [p for p in (*left.surface.points, *right.surface.points) if p.id not in used]
        surface = SurfaceDescriptor(
            genus=left.surface.genus + right.surface.genus,
            points=tuple(sorted([*kept, *made], key=lambda p: p.id)),
        )
        return SlitGlue(
            left=left,
            right=right,
            junctions=junctions,
            slit=slit_tag(pairs[0][0], pairs[1][0]),
            surface=surface,
        )

    def handle(
        self,
        child: PlanNode,
        pairs: list[tuple[PlanPoint | None, PlanPoint | None]],
    ) -> HandleGlue:
        junctions, made = self._targets(pairs)
        used = {p.id for pair in pairs for p in pair if p is not None}
        kept = [p for p in child.surface.points if p.id not in used]
        surface = SurfaceDescriptor(
            genus=child.surface.genus + 1,
            points=tuple(sorted([*kept, *made], key=lambda p: p.id)),
        )
        return HandleGlue(
            child=child,
            junctions=junctions,
            slit=slit_tag(pairs[0][0], pairs[1][0]),
            surface=surface,
        )

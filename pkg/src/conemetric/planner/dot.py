"""Export a gluing tree to graphviz dot.

For example, after writing a plan to ``plan.gv``:

    dot -Tpng -O plan.gv
"""

from __future__ import annotations

from conemetric.planner.tree import FootballLeaf, HandleGlue, PlanNode, PlanPoint, children
from conemetric.schemas import Role

_ROLE_MARK = {Role.SADDLE: "s", Role.MINIMUM: "min", Role.MAXIMUM: "max"}


def _points(points: tuple[PlanPoint, ...]) -> str:
    return ", ".join(f"{_ROLE_MARK[p.role]} {p.angle}" for p in points)


def _label(node: PlanNode) -> tuple[str, str]:
    if isinstance(node, FootballLeaf):
        return f"S2 {node.minimum.angle},{node.maximum.angle}", "ellipse"
    head = "handle" if isinstance(node, HandleGlue) else "slit"
    return f"{head} {node.slit}\\ng={node.surface.genus}: {_points(node.surface.points)}", "box"


def to_dot(root: PlanNode, name: str = "plan") -> str:
    """Render ``root`` as a dot digraph; leaves are ellipses, gluings boxes."""
    lines = [f"digraph {name} {{", "\tgraph [rankdir=BT];"]
    counter = 0

    def visit(node: PlanNode) -> int:
        nonlocal counter
        counter += 1
        index = counter
        label, shape = _label(node)
        lines.append(f'\t"{index}" [label="{label}", shape={shape}];')
        for edge, child in children(node):
            child_index = visit(child)
            style = "dashed" if edge == "right" else "solid"
            lines.append(f'\t"{child_index}" -> "{index}" [style={style}];')
        return index

    visit(root)
    lines.append("}")
    return "\n".join(lines) + "\n"

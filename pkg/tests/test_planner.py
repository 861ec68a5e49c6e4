"""Tests for football-gluing plans and their verification."""

from fractions import Fraction

import pytest

from conemetric.angles import divisor_from_angles, gauss_bonnet_mass, swap_orientation
from conemetric.engine import decide
from conemetric.errors import PlanFailure
from conemetric.planner import (
    FootballLeaf,
    HandleGlue,
    SlitGlue,
    build_plan,
    enumerate_plans,
    leaves,
    mirror_plan,
    plan_positive_genus,
    plan_sphere,
    surface_mass,
    to_dot,
    verify_plan,
)
from conemetric.planner.tree import SLIT_SHORT, iter_nodes


def _plan(**angles):
    d = divisor_from_angles(**angles)
    verdict = decide(d)
    assert verdict.is_exists, verdict
    return build_plan(d, verdict.certificate)


def _verified(plan):
    report = verify_plan(plan.root, divisor=plan.divisor, certificate=plan.certificate)
    assert report.ok, report.violations
    return report


def test_two_half_angle_minima_glue_two_footballs():
    """S^2_{2,1/2,1/2} is one slit joining two footballs of angle 1/2."""
    plan = _plan(saddles=[2], minima=["1/2", "1/2"])
    _verified(plan)
    assert isinstance(plan.root, SlitGlue)
    assert plan.summary.leaves == 2
    assert plan.summary.slit_glues == 1
    assert plan.summary.footballs == (Fraction(1, 2), Fraction(1, 2))
    assert plan.root.slit == SLIT_SHORT


def test_root_carries_saddle_and_smooth_maximum():
    """The glued surface has the saddle of angle 2 and one smooth maximum."""
    plan = _plan(saddles=[2], minima=["1/2", "1/2"])
    points = sorted((p.role.value, p.angle) for p in plan.root.surface.points)
    assert points == [
        ("maximum", Fraction(1)),
        ("minimum", Fraction(1, 2)),
        ("minimum", Fraction(1, 2)),
        ("saddle", Fraction(2)),
    ]


def test_sphere_with_one_saddle_of_angle_three():
    """S^2_{3,2,2} with one saddle plans and verifies."""
    plan = _plan(saddles=[3], minima=[2], maxima=[2])
    report = _verified(plan)
    assert plan.summary.leaves >= 2
    assert report.nodes == plan.summary.leaves + plan.summary.slit_glues


def test_saddles_of_angle_two_need_one_more_football():
    """Four saddles of angle 2: three unit footballs."""
    plan = _plan(saddles=[2, 2, 2, 2])
    _verified(plan)
    assert plan.summary.footballs == (1, 1, 1)
    assert plan.summary.slit_glues == 2


@pytest.mark.parametrize(
    ("genus", "saddles", "footballs"),
    [
        (1, [3], 2),
        (2, [3, 3], 3),
        (2, [4, 2], 3),
        (2, [5], 3),
    ],
)
def test_positive_genus_uses_one_handle_per_genus(genus, saddles, footballs):
    """M_{g; saddles, beta, beta} is g handles on g + 1 footballs of angle beta / (g + 1)."""
    beta = Fraction(5, 2)
    plan = _plan(genus=genus, saddles=saddles, minima=[beta], maxima=[beta])
    _verified(plan)
    assert plan.summary.handles == genus
    assert plan.summary.footballs == (beta / footballs,) * footballs
    assert isinstance(plan.root, HandleGlue)
    assert plan.root.surface.genus == genus


def test_torus_from_saddle_handle():
    """Two saddles of angle 2 on a torus come from one handle on a unit football."""
    plan = _plan(genus=1, saddles=[2, 2])
    _verified(plan)
    assert plan.summary.handles == 1
    assert plan.summary.footballs == (1,)


@pytest.mark.parametrize(
    ("genus", "saddles"),
    [
        (1, [3]),
        (1, [5]),
        (1, [2, 4]),
        (1, [3, 5]),
        (2, [5]),
        (2, [2, 4]),
        (2, [3, 5]),
    ],
)
def test_positive_genus_without_extremal_cone_points(genus, saddles):
    """Saddle-only divisors plan by splitting smooth extremal points."""
    plan = _plan(genus=genus, saddles=saddles)
    _verified(plan)
    assert plan.summary.handles == genus
    assert plan.root.surface.genus == genus


def test_restricted_genus_search_falls_back_to_unit_splits():
    """Disabling unit splits only orders the search; a plan is still found."""
    d = divisor_from_angles(genus=1, saddles=[3])
    cert = decide(d).certificate
    plan = plan_positive_genus(d, cert, allow_unit_leaves=False)
    _verified(plan)
    assert plan == plan_positive_genus(d, cert, allow_unit_leaves=True)


def test_mass_is_additive_over_leaves():
    """The root's Gauss-Bonnet mass is the sum of the leaf masses."""
    plan = _plan(saddles=[2, 2], minima=["1/2"], maxima=["1/2"])
    total = sum(surface_mass(leaf.surface) for leaf in leaves(plan.root))
    assert surface_mass(plan.root.surface) == total
    assert total == gauss_bonnet_mass(plan.divisor)


def test_every_node_surface_is_consistent():
    """Each node's genus follows its children."""
    plan = _plan(genus=1, saddles=[3], minima=["5/2"], maxima=["5/2"])
    for _, node in iter_nodes(plan.root):
        if isinstance(node, FootballLeaf):
            assert node.surface.genus == 0
        elif isinstance(node, HandleGlue):
            assert node.surface.genus == node.child.surface.genus + 1


def test_unequal_leaf_is_reported():
    """A football with different angles at its two ends is rejected."""
    plan = _plan(saddles=[2], minima=["1/2", "1/2"])
    leaf = plan.root.left
    assert isinstance(leaf, FootballLeaf)
    bad_max = leaf.maximum.model_copy(update={"angle": Fraction(3, 2)})
    bad_leaf = leaf.model_copy(update={"maximum": bad_max})
    tampered = plan.root.model_copy(update={"left": bad_leaf})
    report = verify_plan(tampered)
    assert not report.ok
    assert "UnequalFootballLeaf" in report.kinds


def test_wrong_divisor_is_reported():
    """A plan does not verify against another divisor."""
    plan = _plan(saddles=[2], minima=["1/2", "1/2"])
    other = divisor_from_angles(saddles=[2], maxima=["1/2", "1/2"])
    report = verify_plan(plan.root, divisor=other)
    assert "RootMismatch" in report.kinds
    assert report.first is not None


def test_mirror_swaps_roles():
    """Mirroring a plan realizes the orientation-swapped divisor."""
    plan = _plan(saddles=[2], minima=["1/2", "1/2"])
    mirrored = mirror_plan(plan.root)
    assert mirror_plan(mirrored) == plan.root
    assert verify_plan(mirrored, divisor=swap_orientation(plan.divisor)).ok


def test_inconsistent_certificate_is_refused():
    """The sphere planner re-checks the certificate before searching."""
    d = divisor_from_angles(saddles=[2, 2], minima=["1/2"], maxima=["1/2"])
    cert = decide(d).certificate
    with pytest.raises(PlanFailure):
        plan_sphere(d, cert.model_copy(update={"p": 3}))


def test_enumerate_plans_are_all_verified():
    """Alternative plans are distinct and each one verifies."""
    d = divisor_from_angles(saddles=[2, 2], minima=["1/2"], maxima=["1/2"])
    plans = enumerate_plans(d, decide(d).certificate, limit=4)
    assert 1 <= len(plans) <= 4
    roots = [p.root.model_dump_json() for p in plans]
    assert len(set(roots)) == len(roots)
    for plan in plans:
        _verified(plan)


def test_dot_export():
    """Leaves are ellipses, gluings boxes, one edge per child."""
    plan = _plan(saddles=[2], minima=["1/2", "1/2"])
    dot = to_dot(plan.root, name="plan_1")
    assert dot.startswith("digraph plan_1 {")
    assert dot.count("shape=ellipse") == 2
    assert dot.count("shape=box") == 1
    assert dot.count("->") == 2
    assert dot.rstrip().endswith("}")

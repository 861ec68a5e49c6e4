"""Tests for the existence deciders and certificate re-validation."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conemetric.angles import divisor_from_angles, swap_orientation
from conemetric.engine import (
    decide,
    decide_football,
    decide_positive_genus,
    decide_saddles_two_nonint,
    decide_three_integer,
    decide_three_mixed,
    feasible_saddle_specs,
    revalidate_certificate,
    shift_extremal_pair,
    solve_pq,
)
from conemetric.schemas import CaseTag, NotExistsReason, SingularityDivisor

FOOTBALL_GRID = [Fraction(a) for a in ("1/2", "2/3", "1", "3/2", "2", "3")]


def test_football_criterion_grid():
    """Two cone points admit a metric exactly when the angles agree."""
    for a in FOOTBALL_GRID:
        for b in FOOTBALL_GRID:
            verdict = decide_football(a, b)
            assert verdict.is_exists == (a == b), f"football ({a}, {b})"
            if a != b:
                assert verdict.reason == NotExistsReason.UNEQUAL_FOOTBALL


def test_decide_football_through_router():
    """Labeled two-point inputs are routed to the football criterion."""
    verdict = decide(divisor_from_angles(minima=["3/2"], maxima=["5/2"]))
    assert verdict.status == "not_exists"
    verdict = decide(divisor_from_angles(minima=["3/2"], maxima=["3/2"]))
    assert verdict.certificate.case == CaseTag.FOOTBALL
    assert verdict.certificate.residues == (Fraction(3, 2), Fraction(-3, 2))


def test_round_sphere_and_single_point():
    """No cone points: the round sphere; one cone point: impossible."""
    verdict = decide(SingularityDivisor())
    assert verdict.is_exists
    assert (verdict.certificate.p, verdict.certificate.q) == (1, 1)
    assert decide(divisor_from_angles(minima=["5/2"])).reason == NotExistsReason.UNEQUAL_FOOTBALL


def test_solve_pq():
    """The linear system has a unique solution, which may be unusable."""
    assert solve_pq(4, 2) == (1, 3)
    assert solve_pq(3, 0) is None
    assert solve_pq(-1, 0) is None
    assert solve_pq(Fraction(5, 2), Fraction(1, 2)) is None


def test_three_mixed_conditions():
    """S^2_{2,1/2,1/2} needs equal roles; S^2_{2,b,b+1} needs opposite roles."""
    verdict = decide_three_mixed(2, Fraction(1, 2), Fraction(1, 2))
    assert verdict.is_exists
    assert verdict.certificate.conditions == (1,)
    assert verdict.certificate.divisor.minima == (Fraction(1, 2), Fraction(1, 2))

    beta = Fraction(1, 3)
    verdict = decide_three_mixed(2, beta, beta + 1)
    assert verdict.is_exists
    assert 2 in verdict.certificate.conditions
    assert verdict.certificate.divisor.maxima == (beta + 1,)


def test_three_mixed_parity_failure():
    """Neither parity condition holds for S^2_{2,1/3,1/3}."""
    verdict = decide_three_mixed(2, Fraction(1, 3), Fraction(1, 3))
    assert verdict.reason == NotExistsReason.PARITY_FAILED


def test_three_integer_every_saddle_choice():
    """S^2_{3,2,2} is realized with one, two and three saddles."""
    specs = feasible_saddle_specs([3, 2, 2])
    assert {len(s) for s in specs} == {1, 2, 3}
    verdict = decide(divisor_from_angles(saddles=[3], minima=[2], maxima=[2]))
    assert verdict.is_exists
    assert verdict.certificate.case == CaseTag.THREE_INTEGER_ONE_SADDLE
    assert set(verdict.feasible_saddle_specs) == set(specs)


def test_three_integer_boundary_is_strict():
    """alpha + beta + gamma - 1 = 2(alpha - 1) does not suffice."""
    verdict = decide(divisor_from_angles(saddles=[5], minima=[2], maxima=[2]))
    assert verdict.status == "not_exists"
    assert verdict.reason == NotExistsReason.SADDLE_TOO_LARGE
    assert decide_three_integer([5, 2, 2], [0]).reason == NotExistsReason.SADDLE_TOO_LARGE


def test_three_integer_rejects_bad_spec():
    """Saddle positions must index the three angles."""
    with pytest.raises(ValueError):
        decide_three_integer([3, 2, 2], [3])
    with pytest.raises(ValueError):
        decide_three_integer([3, 2], [0])


def test_sphere_general_exists():
    """S^2_{2,2,1/2,1/2}: p = q = 1 and degree 3 > 1."""
    d = divisor_from_angles(saddles=[2, 2], minima=["1/2"], maxima=["1/2"])
    verdict = decide(d)
    cert = verdict.certificate
    assert cert.case == CaseTag.SPHERE_GENERAL
    assert (cert.p, cert.q) == (1, 1)
    assert cert.degree == 3
    assert cert.saddle_bound == 1
    assert revalidate_certificate(d, cert) == []


def test_sphere_general_degree_bound():
    """S^2_{6,2,2,2}: degree 5 does not exceed the saddle order 5."""
    d = divisor_from_angles(saddles=[6, 2], minima=[2], maxima=[2])
    verdict = decide(d)
    assert verdict.reason == NotExistsReason.DEGREE_BOUND_FAILED


def test_sphere_general_no_integer_pq():
    """An odd count leaves no integer solution."""
    verdict = decide(divisor_from_angles(saddles=[5, 2], minima=[2], maxima=[2]))
    assert verdict.reason == NotExistsReason.NO_INTEGER_PQ


def test_no_saddle_is_out_of_scope():
    """Three extremal points without a saddle are not covered."""
    verdict = decide(divisor_from_angles(minima=["1/2", "1/3"], maxima=["5/6"]))
    assert verdict.status == "out_of_scope"


def test_irrational_is_out_of_scope():
    """Irrational residue data is flagged out of scope."""
    d = SingularityDivisor(saddles=(Fraction(2),), minima=(Fraction(1, 2),), irrational=True)
    assert decide(d).status == "out_of_scope"


@pytest.mark.parametrize(
    ("genus", "saddles"),
    [(1, [3]), (2, [3, 3]), (2, [4, 2])],
)
def test_positive_genus_worked_cases(genus, saddles):
    """M_{g; saddles, beta, beta} exists with p = q = 0."""
    d = divisor_from_angles(genus=genus, saddles=saddles, minima=["5/2"], maxima=["5/2"])
    verdict = decide(d)
    assert verdict.is_exists
    assert verdict.certificate.case == CaseTag.POSITIVE_GENUS
    assert (verdict.certificate.p, verdict.certificate.q) == (0, 0)
    assert revalidate_certificate(d, verdict.certificate) == []


def test_positive_genus_single_two():
    """A torus with one saddle of angle 2 has no integer p, q."""
    verdict = decide(divisor_from_angles(genus=1, saddles=[2]))
    assert verdict.reason == NotExistsReason.NO_INTEGER_PQ


def test_positive_genus_missing_extremum():
    """Genus 2 with a single saddle of angle 3 leaves Phi without extrema."""
    verdict = decide_positive_genus(divisor_from_angles(genus=2, saddles=[3]))
    assert verdict.reason == NotExistsReason.MISSING_EXTREMUM


def test_positive_genus_without_saddles_is_out_of_scope():
    """No decider covers positive genus without saddles."""
    d = divisor_from_angles(genus=1, minima=["1/2"], maxima=["1/2"])
    assert decide(d).status == "out_of_scope"


def test_corollary_matches_mixed_triple():
    """With one saddle the corollary reduces to the mixed-triple rule."""
    beta, gamma = Fraction(1, 2), Fraction(3, 2)
    assert (
        decide_saddles_two_nonint([3], beta, gamma).is_exists
        == decide_three_mixed(3, beta, gamma).is_exists
    )


def test_revalidation_catches_tampering():
    """Changing p, the degree or the residues is detected."""
    d = divisor_from_angles(saddles=[2, 2], minima=["1/2"], maxima=["1/2"])
    cert = decide(d).certificate
    assert revalidate_certificate(d, cert.model_copy(update={"p": 2}))
    assert revalidate_certificate(d, cert.model_copy(update={"degree": 7}))
    tampered = cert.model_copy(update={"residues": (Fraction(1, 2), Fraction(-1, 2))})
    assert revalidate_certificate(d, tampered)


def test_shift_extremal_pair_keeps_existence():
    """Raising the football pair by the same eta keeps the verdict."""
    d = divisor_from_angles(saddles=[2, 2], minima=["1/2"], maxima=["1/2"])
    assert shift_extremal_pair(d, 0, 0, Fraction(1, 3)).is_exists
    with pytest.raises(ValueError):
        shift_extremal_pair(d, 0, 0, Fraction(-1, 2))


extremal = st.fractions(min_value=Fraction(1, 4), max_value=6, max_denominator=4).filter(
    lambda a: a != 1
)


@settings(max_examples=200, deadline=None)
@given(
    genus=st.integers(min_value=0, max_value=2),
    saddles=st.lists(st.integers(min_value=2, max_value=6), min_size=1, max_size=3),
    minima=st.lists(extremal, max_size=2),
    maxima=st.lists(extremal, max_size=2),
)
def test_decide_is_orientation_invariant(genus, saddles, minima, maxima):
    """Swapping minima and maxima never changes the status."""
    d = divisor_from_angles(genus=genus, saddles=saddles, minima=minima, maxima=maxima)
    verdict = decide(d)
    assert decide(swap_orientation(d)).status == verdict.status
    if verdict.is_exists:
        assert revalidate_certificate(d, verdict.certificate) == []

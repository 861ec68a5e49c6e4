"""Tests for character 1-forms, Phi and the developing ratio."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conemetric.angles import divisor_from_angles
from conemetric.errors import InvalidParameter, PoleEvaluation
from conemetric.oneforms import (
    INFINITY,
    angles_from_form,
    check_character_form,
    developing_ratio,
    divisor_degree,
    evaluate,
    form_from_divisor,
    form_from_json,
    partial_fractions,
    phi,
    phi_at_infinity,
    phi_field,
    residues,
    standard_form,
    zeros,
)

HALF_PAIR = [(0, "1/2"), (1, "1/2")]


@pytest.mark.parametrize(
    "form",
    [
        standard_form(1, lam=Fraction(3, 2)),
        standard_form(2, alpha=3),
        standard_form(3, alpha=2, a=2),
        partial_fractions(HALF_PAIR),
        partial_fractions([(0, 1), ([0, 1], -1)]),
    ],
    ids=["std1", "std2", "std3", "pf-half", "pf-unit"],
)
def test_character_form_conditions(form):
    """Residues sum to zero and the divisor has degree -2."""
    report = check_character_form(form)
    assert report.ok
    assert report.residue_sum == 0
    assert report.divisor_degree == -2
    assert divisor_degree(form) == -2
    assert report.real_part_exact


def test_standard_form_residues():
    """std2 has unit residues at the roots of z**alpha = -1 and -alpha at infinity."""
    res = residues(standard_form(2, alpha=3))
    assert res.pop(INFINITY) == -3
    assert len(res) == 3
    assert set(res.values()) == {1}


def test_standard_form_rejects_bad_parameters():
    """std3 needs a not in {0, 1}; std2 needs alpha >= 2."""
    with pytest.raises(InvalidParameter):
        standard_form(3, alpha=2, a=1)
    with pytest.raises(InvalidParameter):
        standard_form(2, alpha=1)
    with pytest.raises(InvalidParameter):
        standard_form(7, alpha=2)


def test_partial_fractions_rejects_zero_residue():
    """Every pole needs a nonzero residue."""
    with pytest.raises(InvalidParameter):
        partial_fractions([(0, 1), (1, 0)])


def test_zeros_of_partial_fractions():
    """1/2 (1/z + 1/(z-1)) vanishes once at z = 1/2."""
    found = zeros(partial_fractions(HALF_PAIR))
    assert len(found) == 1
    assert found[0].order == 1
    assert found[0].to_complex() == pytest.approx(0.5)


def test_zeros_of_standard_forms():
    """The origin is a zero of order alpha - 1; std3 also vanishes at infinity."""
    assert [z.order for z in zeros(standard_form(2, alpha=4))] == [3]
    found = zeros(standard_form(3, alpha=3, a=2))
    assert [(z.location == INFINITY, z.order) for z in found] == [(False, 2), (True, 2)]


def test_angles_from_form():
    """The half-pair form realizes S^2_{2,1/2,1/2} with a smooth maximum at infinity."""
    d = angles_from_form(partial_fractions(HALF_PAIR))
    assert d == divisor_from_angles(saddles=[2], minima=["1/2", "1/2"])


def test_evaluate_at_pole_raises():
    """Evaluating on a pole is an error."""
    with pytest.raises(PoleEvaluation):
        evaluate(standard_form(1, lam=2), 0)


def test_phi_limits_at_poles():
    """Phi tends to 0 at positive residues and 4 at negative ones."""
    form = standard_form(1, lam=2)
    at_zero = phi(form, 0)
    assert at_zero.at_pole
    assert at_zero.value == 0.0
    assert phi_at_infinity(form).value == 4.0
    assert phi_at_infinity(partial_fractions([(0, 1), (1, -1)])) is None


def test_phi_normalization():
    """Phi(p0) = phi0 and values stay in (0, 4)."""
    form = standard_form(1, lam=1)
    assert phi(form, 1, phi0=1.5).value == pytest.approx(1.5)
    assert phi(form, 2).value == pytest.approx(3.2)
    values = phi_field(form, [0.1, 1j, 10])
    assert ((values > 0) & (values < 4)).all()
    with pytest.raises(InvalidParameter):
        phi_field(form, 1, phi0=4.0)


def test_developing_ratio_quadrature_matches_closed_form():
    """Integrating Re omega reproduces |f(z)/f(b)|**2."""
    form = partial_fractions(HALF_PAIR)
    closed = developing_ratio(form, 2 + 1j, basepoint=1j)
    numeric = developing_ratio(form, 2 + 1j, basepoint=1j, method="quadrature")
    assert numeric == pytest.approx(closed, rel=1e-8)


def test_form_from_divisor():
    """Footballs map to lam / z dz with the sign of the minimum."""
    form = form_from_divisor(divisor_from_angles(minima=["3/2"], maxima=["3/2"]))
    assert form.kind == "std1"
    assert form.lam == Fraction(3, 2)
    with pytest.raises(InvalidParameter):
        form_from_divisor(divisor_from_angles(minima=["3/2"], maxima=["5/2"]))
    with pytest.raises(InvalidParameter):
        form_from_divisor(divisor_from_angles(saddles=[2], minima=["1/2", "1/2"]))


def test_form_from_json():
    """Standard and partial-fraction descriptions both parse."""
    assert form_from_json({"kind": "std2", "alpha": 3}) == standard_form(2, alpha=3)
    pairs = form_from_json({"kind": "pf", "terms": [["0", "1/2"], [1, "1/2"]]})
    objects = form_from_json(
        {"kind": "pf", "terms": [{"pole": 0, "residue": "1/2"}, {"pole": 1, "residue": "1/2"}]}
    )
    assert pairs == objects == partial_fractions(HALF_PAIR)


@pytest.mark.parametrize(
    "data",
    [
        [1, 2],
        {"alpha": 3},
        {"kind": "std9"},
        {"kind": "pf", "terms": []},
        {"kind": "pf", "terms": [[0]]},
    ],
)
def test_form_from_json_rejects(data):
    """Malformed descriptions raise InvalidParameter."""
    with pytest.raises(InvalidParameter):
        form_from_json(data)


@given(
    residues_=st.lists(
        st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool),
        min_size=1,
        max_size=4,
    )
)
def test_random_partial_fractions_are_character_forms(residues_):
    """Any nonzero rational residues at distinct integer poles give a character form."""
    form = partial_fractions([(k, r) for k, r in enumerate(residues_)])
    report = check_character_form(form)
    assert report.residue_sum == 0
    assert report.divisor_degree == -2

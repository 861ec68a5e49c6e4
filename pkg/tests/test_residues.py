"""Tests for residue vectors, degrees and the reduction choosers."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from pydantic import ValidationError

from conemetric.errors import HypothesisViolated, SizeLimitExceeded
from conemetric.residues import (
    ResidueVector,
    brute_force_reduction_search,
    canonical_order,
    degree,
    lemma_a1_applies,
    lemma_a2_applies,
    primitive_form,
    reduce_lemma_a1,
    reduce_lemma_a2,
)


def test_canonical_order():
    """Positives ascending, then negatives by ascending absolute value."""
    assert canonical_order([-1, 3, -2, 1]) == (1, 3, -1, -2)


def test_vector_rejects_bad_components():
    """Zero entries and nonzero sums are refused."""
    with pytest.raises(ValidationError):
        ResidueVector.model_validate([1, 0, -1])
    with pytest.raises(ValidationError):
        ResidueVector.model_validate([1, -2])


def test_primitive_form_and_degree():
    """Half-integer residues double to a coprime integer vector."""
    r = ResidueVector.model_validate(["1/2", "-1/2", 1, -1])
    prim = primitive_form(r)
    assert prim.scale == 2
    assert sorted(prim.components) == [-2, -1, 1, 2]
    assert degree(r) == 3


def test_degree_of_irrational_vector_is_infinite():
    """Irrational data has no primitive form."""
    r = ResidueVector(components=(1, -1), irrational=True)
    assert degree(r) == math.inf


def test_reduce_lemma_a1_merges_and_keeps_degree():
    """A single big residue is merged with the smallest negative."""
    r = ResidueVector.model_validate([3, -1, -1, -1])
    assert lemma_a1_applies(r)
    step = reduce_lemma_a1(r)
    assert step.key == (0, 0)
    assert step.merged == 2
    assert step.result.components == (2, -1, -1)
    assert degree(step.result) > r.p + r.q - 3


def test_reduce_lemma_a1_mirrors_when_positives_dominate():
    """With more positives than negatives the chooser works on -r."""
    r = ResidueVector.model_validate([1, 1, 1, -3])
    step = reduce_lemma_a1(r)
    assert step.mirrored
    assert step.result.components == (1, 1, -2)


def test_reduce_lemma_a1_hypotheses():
    """m = p + q - 2 must be positive and below the degree."""
    with pytest.raises(HypothesisViolated):
        reduce_lemma_a1(ResidueVector.model_validate([1, -1]))
    with pytest.raises(HypothesisViolated):
        reduce_lemma_a1(ResidueVector.model_validate([1, 1, -1, -1]))


def test_reduce_lemma_a2():
    """Two saddles of angle 2: the bound after the step is max(0, 1)."""
    r = ResidueVector.model_validate([3, -1, -1, -1])
    assert lemma_a2_applies(r, [2, 2])
    step = reduce_lemma_a2(r, [2, 2])
    assert degree(step.result) > 1


def test_reduce_lemma_a2_hypotheses():
    """The saddle excess must equal p + q - 2."""
    with pytest.raises(HypothesisViolated):
        reduce_lemma_a2(ResidueVector.model_validate([3, -1, -1, -1]), [3])
    with pytest.raises(HypothesisViolated):
        reduce_lemma_a2(ResidueVector.model_validate([3, -1, -1, -1]), [2, 3])


def test_brute_force_lists_valid_merges():
    """Every listed merge keeps the degree above m - 1."""
    r = ResidueVector.model_validate([2, 3, -1, -4])
    steps = brute_force_reduction_search(r)
    assert steps
    for step in steps:
        assert degree(step.result) > r.p + r.q - 3
        assert step.merged == step.positive - step.negative


def test_brute_force_size_limit():
    """Vectors longer than the limit are refused."""
    r = ResidueVector.model_validate([1] * 7 + [-1] * 7)
    with pytest.raises(SizeLimitExceeded):
        brute_force_reduction_search(r, size_limit=12)


nonzero = st.integers(min_value=-6, max_value=6).filter(bool)


@st.composite
def vectors(draw):
    head = draw(st.lists(nonzero, min_size=1, max_size=6))
    total = sum(head)
    tail = [-total] if total else [draw(st.integers(1, 6)), None]
    if tail[-1] is None:
        tail[-1] = -tail[0]
    return [*head, *tail]


@given(
    values=vectors(),
    scale=st.fractions(min_value=Fraction(1, 7), max_value=7, max_denominator=7),
)
def test_degree_is_scale_and_sign_invariant(values, scale):
    """Rescaling or negating a vector leaves its degree unchanged."""
    r = ResidueVector.model_validate(values)
    assert degree(ResidueVector.model_validate([scale * v for v in values])) == degree(r)
    assert degree(ResidueVector.model_validate([-v for v in values])) == degree(r)


@given(values=vectors())
def test_chooser_preserves_zero_sum(values):
    """Whenever the first chooser applies its result is a residue vector again."""
    r = ResidueVector.model_validate(values)
    if lemma_a1_applies(r):
        step = reduce_lemma_a1(r)
        assert sum(step.result.components) == 0
        assert len(step.result.components) in (len(values) - 1, len(values) - 2)

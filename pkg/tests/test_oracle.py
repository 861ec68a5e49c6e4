"""Tests for the exhaustive and randomized cross-checks."""

from fractions import Fraction

import numpy as np
import pytest

from conemetric.angles import validate
from conemetric.engine import decide
from conemetric.errors import SizeLimitExceeded
from conemetric.oracle import (
    corollary_sweep,
    integer_vectors,
    lemma_a1_sweep,
    lemma_a2_sweep,
    mixed_triple_exists,
    non_integer_angles,
    parity_triples_sweep,
    pq_report,
    random_divisor,
    roundtrip_divisors,
    roundtrip_sweep,
    saddle_partitions,
)


def test_integer_vectors_are_zero_sum():
    """Every enumerated vector sums to zero, with entries bounded."""
    vectors = list(integer_vectors(4, 3))
    assert vectors
    for r in vectors:
        assert sum(r.components) == 0
        assert all(0 < abs(c) <= 3 for c in r.components)
        assert 2 <= len(r.components) <= 4


def test_saddle_partitions():
    """m = 3 splits into saddles (3, 2) and (2, 2, 2)."""
    assert sorted(saddle_partitions(3)) == [(2, 2, 2), (3, 2)]
    assert list(saddle_partitions(1)) == []


def test_small_lemma_sweeps():
    """No counterexample on a reduced grid."""
    for sweep in (lemma_a1_sweep, lemma_a2_sweep):
        report = sweep(max_len=5, max_entry=3)
        assert report.cases > 0
        assert report.ok, report.counterexamples


@pytest.mark.slow
def test_full_lemma_sweeps():
    """No counterexample up to length 8 and entries 6."""
    for sweep in (lemma_a1_sweep, lemma_a2_sweep):
        report = sweep()
        assert report.ok, report.counterexamples


def test_lemma_sweep_size_limit():
    with pytest.raises(SizeLimitExceeded):
        lemma_a1_sweep(max_len=13, max_entry=2)


def test_mixed_triple_formula():
    """Spot values of the parity formula."""
    assert mixed_triple_exists(2, Fraction(1, 2), Fraction(1, 2))
    assert mixed_triple_exists(2, Fraction(1, 3), Fraction(4, 3))
    assert not mixed_triple_exists(2, Fraction(1, 3), Fraction(1, 3))


def test_non_integer_angles():
    values = non_integer_angles((2, 3), 4)
    assert values == [Fraction(n, d) for n, d in ((1, 3), (1, 2), (2, 3), (4, 3), (3, 2))]


def test_parity_triples_sweep():
    """decide agrees with the parity formula on the whole grid."""
    report = parity_triples_sweep()
    assert report.details["angles"] == 40
    assert report.cases == 7 * 40 * 41 // 2
    assert report.ok, report.counterexamples
    assert 0 < report.details["exists"] < report.cases


def test_parity_triples_size_limit():
    with pytest.raises(SizeLimitExceeded):
        parity_triples_sweep(alphas=range(2, 30))


def test_pq_report():
    assert pq_report(4, 2).details["solution"] == {"p": 1, "q": 3}
    assert pq_report(-1, 0).details["solution"] is None
    assert pq_report(Fraction(5, 2), Fraction(1, 2)).details["solution"] is None


def test_corollary_sweep():
    """The parity-only corollary matches the general sphere decider."""
    report = corollary_sweep(max_saddles=2, max_saddle_angle=4)
    assert report.cases > 0
    assert report.ok, report.counterexamples


def test_random_divisors_are_valid():
    """Draws validate and keep the requested genus."""
    rng = np.random.default_rng(7)
    for genus in (0, 0, 1, 2):
        d = random_divisor(rng, genus)
        assert validate(d) == d
        assert d.genus == genus
        assert d.saddles


def test_random_divisors_include_saddle_only_surfaces():
    """Positive genus draws sometimes carry no extremal cone point at all."""
    rng = np.random.default_rng(5)
    draws = [random_divisor(rng, 1) for _ in range(200)]
    assert any(not d.minima and not d.maxima for d in draws)


def test_roundtrip_divisors_all_exist():
    """The stream is deterministic and only keeps Exists divisors."""
    first = roundtrip_divisors(15, seed=11)
    assert first == roundtrip_divisors(15, seed=11)
    assert len(first) == 15
    assert all(decide(d).is_exists for d in first)


def test_small_roundtrip():
    report = roundtrip_sweep(count=50, seed=1, threads=2)
    assert report.cases == 50
    assert report.ok, report.counterexamples


@pytest.mark.slow
def test_roundtrip_thousand():
    """1000 random Exists divisors re-validate, plan and verify."""
    report = roundtrip_sweep(count=1000, seed=0)
    assert report.cases == 1000
    assert report.ok, report.counterexamples
    assert report.details["genus_cases"] > 0

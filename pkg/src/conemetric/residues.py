"""Exact residue-vector algebra.

A residue vector is a finite list of nonzero rationals summing to zero. Its primitive
form is the coprime integer rescaling with positive scale, and its degree is the sum of
the positive primitive entries (the degree of the developing rational function).

The two reduction choosers merge one positive entry ``a_i`` with one negative entry
``-b_j`` into ``a_i - b_j`` while keeping the degree above the bound the sufficiency
induction needs.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from fractions import Fraction
from typing import Any

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from conemetric.config import settings
from conemetric.errors import HypothesisViolated, SizeLimitExceeded
from conemetric.schemas import Rational

logger = logging.getLogger(__name__)

Number = int | Fraction


class ResidueVector(BaseModel):
    """Nonzero rationals summing to zero, stored in canonical order.

    Canonical order: positives ascending, then negatives ascending by absolute value.
    """

    model_config = ConfigDict(frozen=True)

    components: tuple[Rational, ...]
    irrational: bool = False

    @model_validator(mode="before")
    @classmethod
    def _accept_sequences(cls, data: Any) -> Any:
        if isinstance(data, (list, tuple)):
            return {"components": data}
        return data

    @field_validator("components")
    @classmethod
    def _check(cls, components: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        if not components:
            raise ValueError("a residue vector needs at least one component")
        if any(c == 0 for c in components):
            raise ValueError("residue vector components must be nonzero")
        if sum(components, Fraction(0)) != 0:
            raise ValueError("residue vector components must sum to zero")
        return canonical_order(components)

    @property
    def positives(self) -> list[Fraction]:
        return [c for c in self.components if c > 0]

    @property
    def negatives(self) -> list[Fraction]:
        """Absolute values of the negative entries, ascending."""
        return [-c for c in self.components if c < 0]

    @property
    def p(self) -> int:
        return len(self.positives)

    @property
    def q(self) -> int:
        return len(self.negatives)


class PrimitiveVector(BaseModel):
    """Coprime integer vector ``scale * r`` with ``scale > 0``."""

    model_config = ConfigDict(frozen=True)

    components: tuple[int, ...]
    scale: Rational


class ReductionStep(BaseModel):
    """One merge of ``a_i`` (positive) with ``-b_j`` (negative).

    Indices are 0-based positions in the canonical positives / negatives lists of the
    vector the step was computed on. ``mirrored`` is set when the chooser worked on
    ``-r`` (the p > q and p = q, a_1 > b_1 cases); the indices still refer to ``r``.
    """

    model_config = ConfigDict(frozen=True)

    positive_index: int
    negative_index: int
    positive: Rational
    negative: Rational
    merged: Rational
    mirrored: bool = False
    result: ResidueVector

    @property
    def key(self) -> tuple[int, int]:
        return self.positive_index, self.negative_index


def canonical_order(values: Iterable[Number]) -> tuple[Fraction, ...]:
    vals = [Fraction(v) for v in values]
    pos = sorted(v for v in vals if v > 0)
    neg = sorted((v for v in vals if v < 0), reverse=True)
    return tuple(pos + neg)


def _scaled_integers(values: Sequence[Number]) -> tuple[list[int], Fraction]:
    common = math.lcm(*(v.denominator for v in values))
    ints = [v.numerator * (common // v.denominator) for v in values]
    divisor = math.gcd(*ints)
    return [i // divisor for i in ints], Fraction(common, divisor)


def degree_of(values: Sequence[Number]) -> int:
    """Degree of a zero-sum rational sequence, without building a model."""
    ints, _ = _scaled_integers(values)
    return sum(i for i in ints if i > 0)


def primitive_form(r: ResidueVector) -> PrimitiveVector:
    """Unique coprime integer multiple of ``r`` with positive scale."""
    ints, scale = _scaled_integers(r.components)
    return PrimitiveVector(components=tuple(ints), scale=scale)


def degree(r: ResidueVector) -> int | float:
    """Sum of the positive components of the primitive form; +inf for irrational vectors."""
    if r.irrational:
        return math.inf
    return degree_of(r.components)


def _merge(
    pos: Sequence[Number], neg: Sequence[Number], i: int, j: int
) -> tuple[list[Number], list[Number], Number]:
    """Replace pos[i] and neg[j] by their difference; returns new (pos, neg) and the merge."""
    merged = pos[i] - neg[j]
    new_pos = [v for k, v in enumerate(pos) if k != i]
    new_neg = [v for k, v in enumerate(neg) if k != j]
    if merged > 0:
        new_pos.append(merged)
    elif merged < 0:
        new_neg.append(-merged)
    return new_pos, new_neg, merged


def _flat(pos: Sequence[Number], neg: Sequence[Number]) -> list[Number]:
    return [*pos, *(-v for v in neg)]


def _step(
    r: ResidueVector, i: int, j: int, mirrored: bool
) -> ReductionStep:
    """Build the step that merges positives[i] with negatives[j] of ``r``."""
    pos, neg = r.positives, r.negatives
    new_pos, new_neg, merged = _merge(pos, neg, i, j)
    return ReductionStep(
        positive_index=i,
        negative_index=j,
        positive=pos[i],
        negative=neg[j],
        merged=merged,
        mirrored=mirrored,
        result=ResidueVector(components=tuple(_flat(new_pos, new_neg))),
    )


def _needs_mirror(pos: Sequence[Number], neg: Sequence[Number]) -> bool:
    return len(pos) > len(neg) or (len(pos) == len(neg) and pos[0] > neg[0])


def _choose(r: ResidueVector, bound: int, label: str) -> ReductionStep:
    """First (j, i) in the chooser's window whose merge keeps degree above ``bound``."""
    pos, neg = r.positives, r.negatives
    mirrored = _needs_mirror(pos, neg)
    big, small = (neg, pos) if mirrored else (pos, neg)
    window = (0, 1) if len(big) < len(small) else (0,)
    for j in window:
        if j >= len(small):
            continue
        for i in range(len(big)):
            if big[i] <= small[j]:
                continue
            new_big, new_small, _ = _merge(big, small, i, j)
            if degree_of(_flat(new_big, new_small)) > bound:
                if mirrored:
                    return _step(r, j, i, mirrored=True)
                return _step(r, i, j, mirrored=False)
    # The reduction lemmas guarantee a step under their hypotheses.
    raise AssertionError(f"{label}: no reduction for {r.components} with bound {bound}")


def reduce_lemma_a1(r: ResidueVector) -> ReductionStep:
    """Merge step keeping ``degree > m - 1`` when ``degree(r) > m``, ``m = p + q - 2``.

    Raises:
        HypothesisViolated: If ``p`` or ``q`` is zero, ``m < 1`` or ``degree(r) <= m``.
    """
    p, q = r.p, r.q
    m = p + q - 2
    if p < 1 or q < 1 or m < 1:
        raise HypothesisViolated("need p >= 1, q >= 1 and m >= 1", p=p, q=q)
    deg = degree(r)
    if deg <= m:
        raise HypothesisViolated(f"degree {deg} does not exceed m = {m}", degree=deg, m=m)
    return _choose(r, m - 1, "lemma-a1")


def _saddle_bound_after_step(alphas: Sequence[int]) -> int:
    ordered = sorted(alphas, reverse=True)
    return max([ordered[0] - 2, *(a - 1 for a in ordered[1:])])


def reduce_lemma_a2(r: ResidueVector, alphas: Sequence[int]) -> ReductionStep:
    """Merge step keeping ``degree > max(alpha_1 - 2, alpha_2 - 1, ...)``.

    Requires at least two saddles with ``sum(alpha_i - 1) = m = p + q - 2``,
    ``degree(r) > alpha_1 - 1`` and ``degree(r) > (m + 2) / 2``.

    Raises:
        HypothesisViolated: If any hypothesis fails.
    """
    if len(alphas) < 2 or any(int(a) != a or a < 2 for a in alphas):
        raise HypothesisViolated("need at least two integer saddle angles >= 2")
    alphas = sorted((int(a) for a in alphas), reverse=True)
    m = sum(a - 1 for a in alphas)
    p, q = r.p, r.q
    if p + q != m + 2 or p < 1 or q < 1:
        raise HypothesisViolated(f"p + q = {p + q} but m + 2 = {m + 2}", p=p, q=q, m=m)
    deg = degree(r)
    if deg <= alphas[0] - 1:
        raise HypothesisViolated(f"degree {deg} does not exceed alpha_1 - 1 = {alphas[0] - 1}")
    if 2 * deg <= m + 2:
        raise HypothesisViolated(f"degree {deg} does not exceed (m + 2)/2 = {Fraction(m + 2, 2)}")
    return _choose(r, _saddle_bound_after_step(alphas), "lemma-a2")


def brute_force_reduction_search(
    r: ResidueVector,
    m: int | None = None,
    alphas: Sequence[int] | None = None,
    size_limit: int | None = None,
) -> list[ReductionStep]:
    """Every single merge whose result keeps the degree above the required bound.

    The bound is ``max(alpha_1 - 2, alpha_2 - 1, ...)`` when ``alphas`` is given and
    ``m - 1`` otherwise (``m`` defaults to ``p + q - 2``). Pairs with ``a_i = b_j`` are
    skipped: their merge would be the zero vector entry. Steps are listed in (j, i) order.

    Raises:
        SizeLimitExceeded: If ``r`` has more than ``size_limit`` components.
    """
    limit = size_limit if size_limit is not None else settings.oracle.size_limit
    if len(r.components) > limit:
        raise SizeLimitExceeded(
            f"{len(r.components)} components exceed the limit of {limit}", limit=limit
        )
    if alphas:
        bound = _saddle_bound_after_step([int(a) for a in alphas])
    else:
        bound = (m if m is not None else r.p + r.q - 2) - 1

    pos, neg = r.positives, r.negatives
    steps: list[ReductionStep] = []
    for j in range(len(neg)):
        for i in range(len(pos)):
            if pos[i] == neg[j]:
                continue
            new_pos, new_neg, _ = _merge(pos, neg, i, j)
            if degree_of(_flat(new_pos, new_neg)) > bound:
                steps.append(_step(r, i, j, mirrored=False))
    if not steps:
        logger.debug("no reduction step for %s (bound %s)", r.components, bound)
    return steps


def lemma_a1_applies(r: ResidueVector) -> bool:
    """True when ``reduce_lemma_a1`` hypotheses hold for ``r``."""
    m = r.p + r.q - 2
    return r.p >= 1 and r.q >= 1 and m >= 1 and degree(r) > m


def lemma_a2_applies(r: ResidueVector, alphas: Sequence[int]) -> bool:
    """True when ``reduce_lemma_a2`` hypotheses hold for ``r`` and ``alphas``."""
    if len(alphas) < 2:
        return False
    m = sum(int(a) - 1 for a in alphas)
    deg = degree(r)
    return (
        r.p >= 1
        and r.q >= 1
        and r.p + r.q == m + 2
        and deg > max(alphas) - 1
        and 2 * deg > m + 2
    )

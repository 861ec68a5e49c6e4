"""Reverse-construction search over abstract surface states.

A state is a multiset of integer saddle angles plus the signed residues of the extremal
points (smooth ones included as +-1). On the sphere a state is realizable when it is a
football (no saddles, residues ``{c, -c}``) or when ``deg(residues) > max(alpha - 1)``.
Each move removes one football and lands on a smaller state:

- ``ExtremalSlit``: the football is glued along a slit ending at an extremal point;
  one saddle loses one unit and the residues ``a`` and ``-b`` merge into ``a - b``.
- ``InteriorSlit``: the football ``S^2_{c,c}`` is glued along a slit between two
  saddles; both saddles lose one unit and ``+c``, ``-c`` leave the state.
- ``HandleCut`` / ``SaddleHandleCut``: undo a handle in positive genus.
"""

from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import nextprime

from conemetric.errors import PlanFailure
from conemetric.residues import (
    ResidueVector,
    canonical_order,
    degree_of,
    lemma_a1_applies,
    lemma_a2_applies,
    reduce_lemma_a1,
    reduce_lemma_a2,
)

logger = logging.getLogger(__name__)


def _decrement(saddles: Sequence[int], *values: int) -> tuple[int, ...]:
    """Lower one saddle of each given value by one; angle-1 results become regular."""
    left = sorted(saddles, reverse=True)
    for v in values:
        left.remove(v)
        if v - 1 >= 2:
            left.append(v - 1)
    return tuple(sorted(left, reverse=True))


def _replace(comps: Sequence[Fraction], remove: Sequence[Fraction], add: Sequence[Fraction]):
    left = list(comps)
    for v in remove:
        left.remove(v)
    return canonical_order([*left, *(v for v in add if v != 0)])


@dataclass(frozen=True)
class State:
    genus: int
    saddles: tuple[int, ...]
    comps: tuple[Fraction, ...]

    @classmethod
    def of(cls, genus: int, saddles: Sequence[int], comps: Sequence[Fraction]) -> State:
        ordered = tuple(sorted((int(a) for a in saddles), reverse=True))
        return cls(genus, ordered, canonical_order(comps))

    @property
    def excess(self) -> int:
        return sum(a - 1 for a in self.saddles)

    @property
    def is_football(self) -> bool:
        return (
            self.genus == 0
            and not self.saddles
            and len(self.comps) == 2
            and self.comps[0] == -self.comps[1]
        )

    def realizable(self) -> bool:
        """Sphere criterion; positive genus states only need both signs present."""
        if len(self.comps) != self.excess + 2 - 2 * self.genus:
            return False
        if not any(c > 0 for c in self.comps) or not any(c < 0 for c in self.comps):
            return False
        if self.genus > 0:
            return bool(self.saddles)
        if not self.saddles:
            return self.is_football
        return degree_of(self.comps) > max(self.saddles) - 1


@dataclass(frozen=True)
class ExtremalSlit:
    saddle: int
    positive: Fraction
    negative: Fraction  # magnitude
    chosen_by: str = "search"

    @property
    def football(self) -> Fraction:
        return min(self.positive, self.negative)

    def apply(self, s: State) -> State:
        return State(
            s.genus,
            _decrement(s.saddles, self.saddle),
            _replace(s.comps, [self.positive, -self.negative], [self.positive - self.negative]),
        )


@dataclass(frozen=True)
class InteriorSlit:
    saddles: tuple[int, int]
    c: Fraction

    @property
    def football(self) -> Fraction:
        return self.c

    def apply(self, s: State) -> State:
        return State(
            s.genus, _decrement(s.saddles, *self.saddles), _replace(s.comps, [self.c, -self.c], [])
        )


@dataclass(frozen=True)
class HandleCut:
    """Undo a handle: one saddle loses a unit and residue ``c`` splits as ``c*t + c*(1-t)``."""

    saddle: int
    comp: Fraction
    ratio: Fraction

    @property
    def pieces(self) -> tuple[Fraction, Fraction]:
        return self.comp * self.ratio, self.comp * (1 - self.ratio)

    def apply(self, s: State) -> State:
        return State(
            s.genus - 1,
            _decrement(s.saddles, self.saddle),
            _replace(s.comps, [self.comp], self.pieces),
        )


@dataclass(frozen=True)
class SaddleHandleCut:
    """Undo a handle whose two junctions are both saddles."""

    saddles: tuple[int, int]

    def apply(self, s: State) -> State:
        return State(s.genus - 1, _decrement(s.saddles, *self.saddles), s.comps)


Move = ExtremalSlit | InteriorSlit | HandleCut | SaddleHandleCut


@dataclass
class SearchBudget:
    max_nodes: int
    visited: int = 0
    failed: set[State] = field(default_factory=set)

    def tick(self) -> None:
        self.visited += 1
        if self.visited > self.max_nodes:
            raise PlanFailure(
                f"plan search exceeded {self.max_nodes} states", max_nodes=self.max_nodes
            )


def _chooser_move(s: State) -> ExtremalSlit | None:
    """The move the reduction lemmas prescribe, decrementing the largest saddle."""
    if not s.saddles:
        return None
    r = ResidueVector(components=s.comps)
    try:
        if lemma_a1_applies(r):
            step, label = reduce_lemma_a1(r), "lemma-a1"
        elif len(s.saddles) >= 2 and lemma_a2_applies(r, s.saddles):
            step, label = reduce_lemma_a2(r, s.saddles), "lemma-a2"
        else:
            return None
    except AssertionError:
        logger.warning("reduction chooser found no step for %s", s.comps)
        return None
    return ExtremalSlit(s.saddles[0], step.positive, step.negative, chosen_by=label)


def _distinct(values: Sequence) -> list:
    return list(dict.fromkeys(values))


def sphere_moves(s: State) -> Iterator[ExtremalSlit | InteriorSlit]:
    """Candidate moves, chooser first, each listed once."""
    seen: set = set()
    chosen = _chooser_move(s)
    if chosen is not None:
        seen.add((chosen.saddle, chosen.positive, chosen.negative))
        yield chosen

    positives = _distinct(c for c in s.comps if c > 0)
    negatives = _distinct(-c for c in s.comps if c < 0)
    saddle_values = _distinct(s.saddles)
    pairs = [
        (x, y)
        for i, x in enumerate(s.saddles)
        for y in s.saddles[i + 1 :]
    ]
    for c in sorted(set(positives) & set(negatives), reverse=True):
        for x, y in _distinct(pairs):
            yield InteriorSlit((x, y), c)
    for saddle in saddle_values:
        for b in negatives:
            for a in positives:
                if a == b or (saddle, a, b) in seen:
                    continue
                yield ExtremalSlit(saddle, a, b)


def search_sphere(s: State, budget: SearchBudget) -> list[Move] | None:
    """Depth-first search for a move sequence ending at a football."""
    if s.is_football:
        return []
    if s in budget.failed:
        return None
    budget.tick()
    for move in sphere_moves(s):
        child = move.apply(s)
        if not child.realizable() or child in budget.failed:
            continue
        rest = search_sphere(child, budget)
        if rest is not None:
            return [move, *rest]
    budget.failed.add(s)
    return None


def enumerate_sphere(s: State, budget: SearchBudget) -> Iterator[list[Move]]:
    """Every move sequence from ``s`` to a football, depth-first."""
    if s.is_football:
        yield []
        return
    budget.tick()
    for move in sphere_moves(s):
        child = move.apply(s)
        if not child.realizable():
            continue
        for rest in enumerate_sphere(child, budget):
            yield [move, *rest]


def _generic_ratio(s: State) -> Fraction:
    """A split ratio whose prime denominator shares no factor with the state."""
    values = [*s.comps, Fraction(s.excess + 2)]
    bound = max(7, 2 * (s.excess + len(s.comps)))
    n = nextprime(bound)
    while any(v.numerator % n == 0 or v.denominator % n == 0 for v in values):
        n = nextprime(n)
    return Fraction(1, n)


def handle_moves(
    s: State, anchor: Fraction | None, allow_unit: bool
) -> Iterator[HandleCut | SaddleHandleCut]:
    """Handle removals in the order the two-saddle/equal-split constructions use first."""
    ordered = sorted(
        _distinct(s.comps),
        key=lambda c: (c != anchor, abs(c) == 1, -abs(c), c < 0),
    )
    if not allow_unit:
        ordered = [c for c in ordered if abs(c) != 1]
    ratios = _distinct(
        [
            Fraction(1, s.genus + 1),
            Fraction(1, 2),
            Fraction(1, 3),
            Fraction(2, 3),
            _generic_ratio(s),
        ]
    )
    for saddle in _distinct(s.saddles):
        for comp in ordered:
            for t in ratios:
                yield HandleCut(saddle, comp, t)
    pairs = [(x, y) for i, x in enumerate(s.saddles) for y in s.saddles[i + 1 :]]
    for x, y in _distinct(pairs):
        yield SaddleHandleCut((x, y))


def search_genus(
    s: State, budget: SearchBudget, allow_unit: bool, anchor: Fraction | None = None
) -> list[Move] | None:
    """Remove handles one at a time, then finish with ``search_sphere``."""
    if s.genus == 0:
        return search_sphere(s, budget)
    if s in budget.failed:
        return None
    budget.tick()
    if anchor is None and s.comps:
        anchor = max(s.comps, key=lambda c: (abs(c) != 1, abs(c), c > 0))
    for move in handle_moves(s, anchor, allow_unit):
        child = move.apply(s)
        if not child.realizable() or child in budget.failed:
            continue
        next_anchor = move.pieces[1] if isinstance(move, HandleCut) else anchor
        rest = search_genus(child, budget, allow_unit, next_anchor)
        if rest is not None:
            return [move, *rest]
    budget.failed.add(s)
    return None

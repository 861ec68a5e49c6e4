"""Exhaustive small-instance sweeps that cross-check the deciders and the planner.

Each sweep enumerates every case within its bounds, counts the ones whose hypotheses
hold and collects counterexamples. A sweep passes when it finds none.
"""

from __future__ import annotations

import logging
from collections import Counter
from collections.abc import Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Any

import numpy as np
from pydantic import BaseModel

from conemetric.angles import validate
from conemetric.config import settings
from conemetric.engine import (
    decide,
    decide_saddles_two_nonint,
    decide_sphere_general,
    revalidate_certificate,
    solve_pq,
)
from conemetric.errors import ConeMetricError, SizeLimitExceeded
from conemetric.planner import build_plan, verify_plan
from conemetric.residues import (
    ResidueVector,
    degree,
    lemma_a1_applies,
    lemma_a2_applies,
    reduce_lemma_a1,
    reduce_lemma_a2,
)
from conemetric.schemas import SingularityDivisor

logger = logging.getLogger(__name__)

MAX_COUNTEREXAMPLES = 20
MAX_GRID_CASES = 10_000


class OracleReport(BaseModel):
    """Outcome of one sweep: ``cases`` met the hypotheses, ``skipped`` did not."""

    name: str
    cases: int = 0
    skipped: int = 0
    counterexamples: list[dict[str, Any]] = []
    details: dict[str, Any] = {}

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def record(self, case: dict[str, Any]) -> None:
        if len(self.counterexamples) < MAX_COUNTEREXAMPLES:
            self.counterexamples.append(case)
        self.details["counterexample_total"] = self.details.get("counterexample_total", 0) + 1


def _check_bounds(max_len: int, max_entry: int) -> None:
    limit = settings.oracle.size_limit
    if max_len > limit:
        raise SizeLimitExceeded(f"vectors of length {max_len} exceed the limit of {limit}")
    if max_len < 2 or max_entry < 1:
        raise SizeLimitExceeded("need max_len >= 2 and max_entry >= 1")


def integer_vectors(max_len: int, max_entry: int) -> Iterator[ResidueVector]:
    """Every zero-sum multiset of nonzero integers in ``[-max_entry, max_entry]``."""
    values = range(1, max_entry + 1)
    for n_pos in range(1, max_len):
        for pos in combinations_with_replacement(values, n_pos):
            total = sum(pos)
            for n_neg in range(1, max_len - n_pos + 1):
                if n_neg > total or n_neg * max_entry < total:
                    continue
                for neg in combinations_with_replacement(values, n_neg):
                    if sum(neg) == total:
                        yield ResidueVector(components=(*pos, *(-b for b in neg)))


def _merge_is_valid(r: ResidueVector, step: Any, bound: int) -> bool:
    expected = Counter(r.components)
    expected[step.positive] -= 1
    expected[-step.negative] -= 1
    if step.merged != 0:
        expected[step.merged] += 1
    return (
        step.positive - step.negative == step.merged
        and Counter(step.result.components) == +expected
        and degree(step.result) > bound
    )


def lemma_a1_sweep(max_len: int | None = None, max_entry: int | None = None) -> OracleReport:
    """The chooser finds a degree-preserving merge whenever ``degree > m = p + q - 2``."""
    max_len = max_len or settings.oracle.max_len
    max_entry = max_entry or settings.oracle.max_entry
    _check_bounds(max_len, max_entry)
    report = OracleReport(name="lemma-a1", details={"max_len": max_len, "max_entry": max_entry})
    for r in integer_vectors(max_len, max_entry):
        if not lemma_a1_applies(r):
            report.skipped += 1
            continue
        report.cases += 1
        m = r.p + r.q - 2
        try:
            step = reduce_lemma_a1(r)
        except (AssertionError, ConeMetricError) as exc:
            report.record({"residues": [str(c) for c in r.components], "error": str(exc)})
            continue
        if not _merge_is_valid(r, step, m - 1):
            report.record({"residues": [str(c) for c in r.components], "step": step.key})
    logger.info("lemma-a1: %d cases, %d counterexamples", report.cases, len(report.counterexamples))
    return report


def saddle_partitions(m: int) -> Iterator[tuple[int, ...]]:
    """Saddle angles (at least two, each >= 2, descending) with ``sum(alpha - 1) = m``."""

    def parts(rest: int, largest: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for k in range(min(rest, largest), 0, -1):
            for tail in parts(rest - k, k):
                yield (k, *tail)

    for orders in parts(m, m):
        if len(orders) >= 2:
            yield tuple(k + 1 for k in orders)


def lemma_a2_sweep(max_len: int | None = None, max_entry: int | None = None) -> OracleReport:
    """The multi-saddle chooser keeps ``degree > max(alpha_1 - 2, alpha_2 - 1, ...)``."""
    max_len = max_len or settings.oracle.max_len
    max_entry = max_entry or settings.oracle.max_entry
    _check_bounds(max_len, max_entry)
    report = OracleReport(name="lemma-a2", details={"max_len": max_len, "max_entry": max_entry})
    for r in integer_vectors(max_len, max_entry):
        m = r.p + r.q - 2
        for alphas in saddle_partitions(m):
            if not lemma_a2_applies(r, alphas):
                report.skipped += 1
                continue
            report.cases += 1
            ordered = sorted(alphas, reverse=True)
            bound = max([ordered[0] - 2, *(a - 1 for a in ordered[1:])])
            try:
                step = reduce_lemma_a2(r, alphas)
            except (AssertionError, ConeMetricError) as exc:
                report.record(
                    {
                        "residues": [str(c) for c in r.components],
                        "alphas": alphas,
                        "error": str(exc),
                    }
                )
                continue
            if not _merge_is_valid(r, step, bound):
                report.record(
                    {"residues": [str(c) for c in r.components], "alphas": alphas, "step": step.key}
                )
    logger.info("lemma-a2: %d cases, %d counterexamples", report.cases, len(report.counterexamples))
    return report


def _even_and_nonnegative(x: Fraction) -> bool:
    half = x / 2
    return x >= 0 and half.denominator == 1


def mixed_triple_exists(alpha: int, beta: Fraction, gamma: Fraction) -> bool:
    """Direct parity formula for one integer saddle and two non-integer extremal points."""
    same_role = _even_and_nonnegative(alpha - beta - gamma - 1) and _even_and_nonnegative(
        alpha + beta + gamma - 1
    )
    opposite_roles = _even_and_nonnegative(alpha + beta - gamma - 1) and _even_and_nonnegative(
        alpha - beta + gamma - 1
    )
    return same_role or opposite_roles


def non_integer_angles(denominators: Sequence[int], max_numerator: int) -> list[Fraction]:
    found = {
        Fraction(n, den)
        for den in denominators
        for n in range(1, max_numerator + 1)
        if Fraction(n, den).denominator != 1
    }
    return sorted(found)


def parity_triples_sweep(
    alphas: Sequence[int] = range(2, 9),
    denominators: Sequence[int] = (2, 3, 4),
    max_numerator: int = 24,
) -> OracleReport:
    """``decide`` on labeled triples against the parity formula, every case.

    Both parity conditions are symmetric in ``beta`` and ``gamma``, so unordered pairs
    are enumerated.

    Raises:
        SizeLimitExceeded: If the grid holds more than ``MAX_GRID_CASES`` cases.
    """
    values = non_integer_angles(denominators, max_numerator)
    total = len(alphas) * len(values) * (len(values) + 1) // 2
    if total > MAX_GRID_CASES:
        raise SizeLimitExceeded(f"{total} triples exceed the grid limit of {MAX_GRID_CASES}")
    report = OracleReport(
        name="parity-triples",
        details={
            "alphas": list(alphas),
            "denominators": list(denominators),
            "max_numerator": max_numerator,
            "angles": len(values),
        },
    )
    exists = 0
    for alpha, (beta, gamma) in product(alphas, combinations_with_replacement(values, 2)):
        d = SingularityDivisor(saddles=(Fraction(alpha),), minima=(beta,), maxima=(gamma,))
        verdict = decide(d)
        expected = mixed_triple_exists(alpha, beta, gamma)
        report.cases += 1
        exists += expected
        if verdict.is_exists != expected:
            report.record(
                {
                    "alpha": alpha,
                    "beta": str(beta),
                    "gamma": str(gamma),
                    "decide": verdict.status,
                    "formula": expected,
                }
            )
    report.details["exists"] = exists
    logger.info("parity-triples: %d cases, %d exist", report.cases, exists)
    return report


def pq_report(S: int | Fraction, D: int | Fraction) -> OracleReport:
    """Solve ``p + q = S``, ``q - p = D`` and report the solution, if any."""
    solution = solve_pq(S, D)
    details: dict[str, Any] = {"S": str(Fraction(S)), "D": str(Fraction(D))}
    if solution is None:
        details["solution"] = None
    else:
        details["solution"] = {"p": solution[0], "q": solution[1]}
    return OracleReport(name="pq", cases=1, details=details)


def corollary_sweep(
    max_saddles: int = 3,
    max_saddle_angle: int = 5,
    denominators: Sequence[int] = (2, 3),
    max_numerator: int = 7,
) -> OracleReport:
    """The parity-only corollary and the general sphere decider agree.

    For integer saddles plus two non-integer extremal points, the corollary holds iff
    the general decider accepts some role assignment, and the general decider accepts
    the labeling the corollary's certificate realizes.
    """
    values = non_integer_angles(denominators, max_numerator)
    report = OracleReport(name="corollary")
    for count in range(1, max_saddles + 1):
        for alphas in combinations_with_replacement(range(2, max_saddle_angle + 1), count):
            saddles = tuple(Fraction(a) for a in alphas)
            for beta, gamma in combinations_with_replacement(values, 2):
                report.cases += 1
                verdict = decide_saddles_two_nonint(alphas, beta, gamma)
                labelings = (
                    SingularityDivisor(saddles=saddles, minima=(beta, gamma)),
                    SingularityDivisor(saddles=saddles, minima=(beta,), maxima=(gamma,)),
                    SingularityDivisor(saddles=saddles, minima=(gamma,), maxima=(beta,)),
                )
                general = any(decide_sphere_general(d).is_exists for d in labelings)
                realized_ok = (
                    not verdict.is_exists
                    or decide_sphere_general(verdict.certificate.divisor).is_exists
                )
                if verdict.is_exists != general or not realized_ok:
                    report.record(
                        {
                            "saddles": list(alphas),
                            "beta": str(beta),
                            "gamma": str(gamma),
                            "corollary": verdict.status,
                            "general": general,
                        }
                    )
    return report


def random_divisor(rng: np.random.Generator, genus: int = 0) -> SingularityDivisor:
    """A small random divisor with one to three saddles and up to three extremal cone points."""
    saddles = [int(a) for a in rng.integers(2, 6, size=rng.integers(1, 4))]
    n_extremal = int(rng.integers(0, 4))
    extremal: list[Fraction] = []
    while len(extremal) < n_extremal:
        angle = Fraction(int(rng.integers(1, 13)), int(rng.integers(1, 4)))
        if angle != 1:
            extremal.append(angle)
    roles = rng.integers(0, 2, size=n_extremal)
    return validate(
        {
            "genus": genus,
            "saddles": saddles,
            "minima": [a for a, r in zip(extremal, roles) if r == 0],
            "maxima": [a for a, r in zip(extremal, roles) if r == 1],
        }
    )


def _roundtrip_case(d: SingularityDivisor) -> dict[str, Any] | None:
    verdict = decide(d)
    cert = verdict.certificate
    problems = revalidate_certificate(d, cert)
    if problems:
        return {"divisor": d.model_dump(mode="json"), "certificate": problems}
    try:
        plan = build_plan(d, cert)
    except ConeMetricError as exc:
        return {"divisor": d.model_dump(mode="json"), "plan": exc.message}
    report = verify_plan(plan.root, divisor=plan.divisor, certificate=cert)
    if not report.ok:
        return {"divisor": d.model_dump(mode="json"), "verify": sorted(report.kinds)}
    return None


def roundtrip_divisors(
    count: int = 1000, seed: int = 0, genus_share: float = 0.2, max_draws: int | None = None
) -> list[SingularityDivisor]:
    """The first ``count`` Exists divisors from a fixed-seed stream."""
    rng = np.random.default_rng(seed)
    max_draws = max_draws or 50 * count
    found: list[SingularityDivisor] = []
    for _ in range(max_draws):
        if len(found) == count:
            break
        genus = int(rng.integers(1, 3)) if rng.random() < genus_share else 0
        d = random_divisor(rng, genus)
        if decide(d).is_exists:
            found.append(d)
    return found


def roundtrip_sweep(count: int = 1000, seed: int = 0, threads: int | None = None) -> OracleReport:
    """Certificate re-validation and plan verification on random Exists divisors."""
    divisors = roundtrip_divisors(count, seed)
    report = OracleReport(name="roundtrip", details={"seed": seed, "requested": count})
    workers = threads or settings.threads
    with ThreadPoolExecutor(max_workers=workers) as pool:
        outcomes = list(pool.map(_roundtrip_case, divisors))
    for outcome in outcomes:
        report.cases += 1
        if outcome is not None:
            report.record(outcome)
    report.details["genus_cases"] = sum(1 for d in divisors if d.genus > 0)
    logger.info("roundtrip: %d divisors, %d failures", report.cases, len(report.counterexamples))
    return report

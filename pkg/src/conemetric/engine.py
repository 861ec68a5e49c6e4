"""Existence decisions for CSC-1 reducible cone metrics.

Each decider maps angle data to a ``Verdict``. Exists verdicts carry a ``Certificate``
holding the residue vector

    r = {beta_1, ..., beta_J, -gamma_1, ..., -gamma_L, 1 (p times), -1 (q times)}

of a character 1-form, where the ``+1``/``-1`` entries are smooth extremal points of Phi.
On the sphere, ``p`` and ``q`` are pinned by the residue theorem and Riemann-Roch:

    p + q = sum(alpha_i - 1) - (J + L) + 2,     q - p = sum(beta_j) - sum(gamma_l).
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from fractions import Fraction
from functools import reduce
from itertools import combinations

from conemetric.angles import (
    all_angles,
    point_count,
    saddle_excess,
    swap_orientation,
    validate,
)
from conemetric.residues import degree_of
from conemetric.schemas import (
    CaseTag,
    Certificate,
    NotExistsReason,
    Role,
    SingularityDivisor,
    Verdict,
)

logger = logging.getLogger(__name__)

LABEL_FREE_CASES = frozenset(
    {
        CaseTag.FOOTBALL,
        CaseTag.THREE_MIXED,
        CaseTag.SADDLES_TWO_NON_INTEGER,
        CaseTag.THREE_INTEGER_ONE_SADDLE,
        CaseTag.THREE_INTEGER_TWO_SADDLES,
        CaseTag.THREE_INTEGER_ALL_SADDLES,
    }
)


def _is_integer(x: Fraction) -> bool:
    return x.denominator == 1


def _nonnegative_even(x: Fraction) -> bool:
    """Exact reading of "nonnegative even number"."""
    return _is_integer(x) and x >= 0 and x.numerator % 2 == 0


def solve_pq(S: int | Fraction, D: int | Fraction) -> tuple[int, int] | None:
    """Solve ``p + q = S``, ``q - p = D`` over the nonnegative integers.

    The system pins ``p = (S - D)/2`` and ``q = (S + D)/2``; ``None`` when either is
    not a nonnegative integer.
    """
    p = (Fraction(S) - Fraction(D)) / 2
    q = (Fraction(S) + Fraction(D)) / 2
    if not (_is_integer(p) and _is_integer(q)) or p < 0 or q < 0:
        return None
    return int(p), int(q)


def _pq_failure(S: int | Fraction, D: int | Fraction) -> NotExistsReason:
    p = (Fraction(S) - Fraction(D)) / 2
    q = (Fraction(S) + Fraction(D)) / 2
    if not (_is_integer(p) and _is_integer(q)):
        return NotExistsReason.NO_INTEGER_PQ
    return NotExistsReason.NEGATIVE_PQ


def residue_vector_for(d: SingularityDivisor, p: int, q: int) -> tuple[Fraction, ...]:
    """Residues in certificate order: minima, negated maxima, then p ones and q minus ones."""
    return (
        *d.minima,
        *(-g for g in d.maxima),
        *(Fraction(1),) * p,
        *(Fraction(-1),) * q,
    )


def _saddle_bound(d: SingularityDivisor) -> int:
    return max((int(a) - 1 for a in d.saddles), default=0)


def _certificate(
    case: CaseTag,
    realized: SingularityDivisor,
    p: int,
    q: int,
    *,
    swapped: bool = False,
    conditions: Sequence[int] = (),
) -> Certificate:
    residues = residue_vector_for(realized, p, q)
    return Certificate(
        case=case,
        p=p,
        q=q,
        residues=residues,
        degree="inf" if realized.irrational else degree_of(residues),
        saddle_bound=_saddle_bound(realized),
        orientation_swapped=swapped,
        divisor=realized,
        conditions=tuple(conditions),
    )


def decide_football(a: Fraction, b: Fraction) -> Verdict:
    """Two cone points on the sphere: a CSC-1 metric exists iff the angles are equal."""
    a, b = Fraction(a), Fraction(b)
    if a != b:
        return Verdict.not_exists(
            NotExistsReason.UNEQUAL_FOOTBALL, f"angles {a} and {b} differ"
        )
    realized = SingularityDivisor(minima=(a,), maxima=(b,))
    return Verdict.exists(_certificate(CaseTag.FOOTBALL, realized, 0, 0))


def _two_nonint(
    case: CaseTag,
    alphas: Sequence[int],
    beta: Fraction,
    gamma: Fraction,
    roles: tuple[Role, Role] | None,
) -> Verdict:
    """Shared body of the mixed-triple rule and its multi-saddle generalization."""
    s = sum(int(a) - 1 for a in alphas)
    same = _nonnegative_even(s - beta - gamma) and _nonnegative_even(s + beta + gamma)
    opposite = _nonnegative_even(s + beta - gamma) and _nonnegative_even(s - beta + gamma)
    conditions = [n for n, ok in ((1, same), (2, opposite)) if ok]
    if not conditions:
        return Verdict.not_exists(
            NotExistsReason.PARITY_FAILED,
            f"neither parity condition holds for saddles {list(alphas)}, {beta}, {gamma}",
        )

    wanted = 2 if roles is not None and roles[0] != roles[1] else 1
    chosen = wanted if wanted in conditions else conditions[0]
    saddles = tuple(Fraction(a) for a in alphas)
    if chosen == 1:
        if roles is not None and roles[0] == roles[1] == Role.MAXIMUM:
            realized = SingularityDivisor(saddles=saddles, maxima=tuple(sorted((beta, gamma))))
        else:
            realized = SingularityDivisor(saddles=saddles, minima=tuple(sorted((beta, gamma))))
    else:
        realized = SingularityDivisor(saddles=saddles, minima=(beta,), maxima=(gamma,))

    S = s - len(realized.minima) - len(realized.maxima) + 2
    D = sum(realized.minima, Fraction(0)) - sum(realized.maxima, Fraction(0))
    pq = solve_pq(S, D)
    if pq is None:  # pragma: no cover - the parity conditions are exactly p, q >= 0 integers
        raise AssertionError(f"parity condition {chosen} holds but p, q are not integral")
    return Verdict.exists(_certificate(case, realized, *pq, conditions=conditions))


def decide_three_mixed(
    alpha: int | Fraction,
    beta: Fraction,
    gamma: Fraction,
    roles: tuple[Role, Role] | None = None,
) -> Verdict:
    """One integer angle and two non-integer angles on the sphere.

    Exists iff (1) ``alpha - beta - gamma - 1`` and ``alpha + beta + gamma - 1`` are
    nonnegative even numbers (both extremal points share a role), or (2)
    ``alpha + beta - gamma - 1`` and ``alpha - beta + gamma - 1`` are (opposite roles).
    The rule carries no Morse labels; ``roles`` only picks which holding condition
    the certificate realizes.
    """
    return _two_nonint(
        CaseTag.THREE_MIXED, [int(alpha)], Fraction(beta), Fraction(gamma), roles
    )


def decide_saddles_two_nonint(
    alphas: Sequence[int],
    beta: Fraction,
    gamma: Fraction,
    roles: tuple[Role, Role] | None = None,
) -> Verdict:
    """Integer saddles plus two non-integer extremal points, parity conditions only."""
    return _two_nonint(
        CaseTag.SADDLES_TWO_NON_INTEGER,
        [int(a) for a in alphas],
        Fraction(beta),
        Fraction(gamma),
        roles,
    )


def decide_three_integer(angles: Sequence[int], saddle_spec: Iterable[int]) -> Verdict:
    """Three integer angles with a chosen set of saddle positions.

    ``saddle_spec`` holds indices into ``angles``. With one saddle the remaining two
    points are taken as minimum then maximum; with two saddles the remaining point is a
    minimum. Both choices are free by the orientation symmetry.
    """
    values = [Fraction(a) for a in angles]
    if len(values) != 3 or not all(_is_integer(v) and v >= 2 for v in values):
        raise ValueError("decide_three_integer expects three integer angles >= 2")
    spec = sorted(set(saddle_spec))
    if not spec or any(i not in (0, 1, 2) for i in spec):
        raise ValueError(f"invalid saddle spec {spec}")
    others = [values[i] for i in range(3) if i not in spec]
    saddles = tuple(values[i] for i in spec)
    total = sum(values, Fraction(0))

    if len(spec) == 1:
        alpha, (beta, gamma) = saddles[0], others
        checks = (alpha - beta + gamma - 1, alpha + beta - gamma - 1)
        strict = total - 1 > 2 * (alpha - 1)
        case = CaseTag.THREE_INTEGER_ONE_SADDLE
        realized = SingularityDivisor(saddles=saddles, minima=(beta,), maxima=(gamma,))
    elif len(spec) == 2:
        (gamma,) = others
        checks = (saddles[0] + saddles[1] - gamma - 1, total - 1)
        strict = total - 1 > 2 * max(a - 1 for a in saddles)
        case = CaseTag.THREE_INTEGER_TWO_SADDLES
        realized = SingularityDivisor(saddles=saddles, minima=(gamma,))
    else:
        checks = (total - 1, total - 1)
        strict = total - 1 > 2 * max(a - 1 for a in saddles)
        case = CaseTag.THREE_INTEGER_ALL_SADDLES
        realized = SingularityDivisor(saddles=saddles)

    if any(c % 2 != 0 for c in checks):
        return Verdict.not_exists(NotExistsReason.PARITY_FAILED, f"odd value among {checks}")
    if any(c < 0 for c in checks):
        return Verdict.not_exists(NotExistsReason.NEGATIVE_PQ, f"negative value among {checks}")
    if not strict:
        return Verdict.not_exists(
            NotExistsReason.SADDLE_TOO_LARGE,
            f"{total - 1} does not exceed twice the largest saddle order",
        )
    S = saddle_excess(realized) - len(others) + 2
    D = sum(realized.minima, Fraction(0)) - sum(realized.maxima, Fraction(0))
    pq = solve_pq(S, D)
    if pq is None:  # pragma: no cover - the parity checks are exactly this system
        raise AssertionError("parity checks passed but p, q are not integral")
    return Verdict.exists(_certificate(case, realized, *pq))


def feasible_saddle_specs(angles: Sequence[int]) -> list[tuple[int, ...]]:
    """All saddle position sets for which an all-integer triple admits a metric."""
    found: list[tuple[int, ...]] = []
    for size in (1, 2, 3):
        for spec in combinations(range(3), size):
            if decide_three_integer(angles, spec).is_exists:
                found.append(spec)
    return found


def decide_sphere_general(d: SingularityDivisor) -> Verdict:
    """Genus zero with integer saddles: p, q from the linear system and deg(r) > max(alpha_i - 1).

    Both Morse orientations are tried; the first success is reported with
    ``orientation_swapped`` set accordingly.
    """
    first_failure: Verdict | None = None
    for swapped in (False, True):
        dd = swap_orientation(d) if swapped else d
        _, J, L = dd.counts
        S = saddle_excess(dd) - (J + L) + 2
        D = sum(dd.minima, Fraction(0)) - sum(dd.maxima, Fraction(0))
        pq = solve_pq(S, D)
        if pq is None:
            failure = Verdict.not_exists(_pq_failure(S, D), f"S={S}, D={D}")
        else:
            cert = _certificate(CaseTag.SPHERE_GENERAL, dd, *pq, swapped=swapped)
            if cert.degree == "inf" or cert.degree > cert.saddle_bound:
                return Verdict.exists(cert)
            failure = Verdict.not_exists(
                NotExistsReason.DEGREE_BOUND_FAILED,
                f"degree {cert.degree} does not exceed {cert.saddle_bound}",
            )
        first_failure = first_failure or failure
    assert first_failure is not None
    return first_failure


def decide_positive_genus(d: SingularityDivisor) -> Verdict:
    """Genus g >= 1: nonnegative integers p, q with p + J >= 1, q + L >= 1 and
    (p + J) + (q + L) = sum(alpha_i - 1) + 2 - 2g, q - p = sum(beta) - sum(gamma).

    There is no degree condition in positive genus.
    """
    _, J, L = d.counts
    S = saddle_excess(d) + 2 - 2 * d.genus - (J + L)
    D = sum(d.minima, Fraction(0)) - sum(d.maxima, Fraction(0))
    pq = solve_pq(S, D)
    if pq is None:
        return Verdict.not_exists(_pq_failure(S, D), f"S={S}, D={D}")
    p, q = pq
    if p + J < 1 or q + L < 1:
        return Verdict.not_exists(
            NotExistsReason.MISSING_EXTREMUM,
            f"Phi needs a minimum and a maximum (p+J={p + J}, q+L={q + L})",
        )
    return Verdict.exists(_certificate(CaseTag.POSITIVE_GENUS, d, p, q))


def _round_sphere() -> Verdict:
    realized = SingularityDivisor()
    return Verdict.exists(_certificate(CaseTag.FOOTBALL, realized, 1, 1))


def decide(d: SingularityDivisor) -> Verdict:
    """Route a divisor to the most specific decider that covers it."""
    if d.irrational:
        return Verdict.out_of_scope("irrational angle data has infinite degree")
    I, J, L = d.counts
    if d.genus >= 1:
        if I == 0:
            return Verdict.out_of_scope("positive genus without saddles is not covered")
        return decide_positive_genus(d)

    n = point_count(d)
    if n == 0:
        return _round_sphere()
    if n == 1:
        return Verdict.not_exists(
            NotExistsReason.UNEQUAL_FOOTBALL,
            "a single cone point would pair with a smooth point of angle 1",
        )
    if n == 2:
        return decide_football(*sorted(all_angles(d)))
    if I == 0:
        return Verdict.out_of_scope("no saddle point: no decider covers this configuration")

    if n == 3:
        return _decide_triple(d)
    return decide_sphere_general(d)


def _decide_triple(d: SingularityDivisor) -> Verdict:
    I, _, _ = d.counts
    extremal = [(b, Role.MINIMUM) for b in d.minima] + [(g, Role.MAXIMUM) for g in d.maxima]
    if I == 1 and all(not _is_integer(v) for v, _ in extremal):
        (beta, r1), (gamma, r2) = extremal
        return decide_three_mixed(d.saddles[0], beta, gamma, roles=(r1, r2))

    angles = [*d.saddles, *(v for v, _ in extremal)]
    if all(_is_integer(v) for v in angles):
        ints = [int(v) for v in angles]
        specs = tuple(feasible_saddle_specs(ints))
        verdict = decide_three_integer(ints, range(I))
        if verdict.is_exists:
            cert = verdict.certificate.model_copy(update={"feasible_saddle_specs": specs})
            return Verdict.exists(cert)
        return verdict.model_copy(update={"feasible_saddle_specs": specs})
    return Verdict.out_of_scope(
        "three points of mixed integrality outside the mixed-triple rule"
    )


def _independent_degree(values: Sequence[Fraction]) -> int:
    positives = [v for v in values if v > 0]
    common = reduce(math.lcm, (v.denominator for v in values), 1)
    content = reduce(math.gcd, (abs(v.numerator) * (common // v.denominator) for v in values), 0)
    return int(sum(positives, Fraction(0)) * common / content)


def revalidate_certificate(d: SingularityDivisor, cert: Certificate) -> list[str]:
    """Re-derive a certificate from scratch; returns the list of disagreements."""
    problems: list[str] = []
    realized = cert.divisor
    if realized.genus != d.genus:
        problems.append(f"genus {realized.genus} != {d.genus}")

    if cert.case == CaseTag.FOOTBALL and point_count(d) == 0:
        if (cert.p, cert.q) != (1, 1) or point_count(realized) != 0:
            problems.append("round sphere certificate must be p = q = 1 with no cone points")
    elif cert.case in LABEL_FREE_CASES:
        if sorted(all_angles(realized)) != sorted(all_angles(d)):
            problems.append("realized angles are not a relabeling of the input")
    else:
        expected = swap_orientation(d) if cert.orientation_swapped else d
        if (realized.saddles, realized.minima, realized.maxima) != (
            expected.saddles,
            expected.minima,
            expected.maxima,
        ):
            problems.append("realized labels differ from the (oriented) input labels")

    if sorted(residue_vector_for(realized, cert.p, cert.q)) != sorted(cert.residues):
        problems.append("residues do not match minima, maxima and p, q")
    if sum(cert.residues, Fraction(0)) != 0:
        problems.append("residues do not sum to zero")

    _, J, L = realized.counts
    excess = sum((a - 1 for a in realized.saddles), Fraction(0))
    if cert.p + cert.q != excess - (J + L) + 2 - 2 * realized.genus:
        problems.append("p + q violates the residue/Riemann-Roch count")
    if cert.q - cert.p != sum(realized.minima, Fraction(0)) - sum(realized.maxima, Fraction(0)):
        problems.append("q - p violates the residue sum")

    bound = max((int(a) - 1 for a in realized.saddles), default=0)
    if cert.saddle_bound != bound:
        problems.append(f"saddle bound {cert.saddle_bound} != {bound}")
    if cert.degree != "inf":
        recomputed = _independent_degree(cert.residues)
        if cert.degree != recomputed:
            problems.append(f"degree {cert.degree} != {recomputed}")
        if realized.genus == 0 and recomputed <= bound:
            problems.append(f"degree {recomputed} does not exceed saddle bound {bound}")

    if realized.genus >= 1 and (cert.p + J < 1 or cert.q + L < 1):
        problems.append("positive genus needs a minimum and a maximum")
    if problems:
        logger.info("certificate rejected: %s", problems)
    return problems


def shift_extremal_pair(
    d: SingularityDivisor, min_index: int, max_index: int, eta: Fraction
) -> Verdict:
    """Add ``eta`` to one minimum and one maximum and decide the shifted divisor.

    When a plan ends by gluing S^2_{beta_1, beta_1} along an extremal slit, raising
    ``beta_1`` and ``gamma_1`` by the same ``eta > -beta_1`` keeps the metric, so an
    Exists input stays Exists.
    """
    eta = Fraction(eta)
    minima, maxima = list(d.minima), list(d.maxima)
    if eta <= -minima[min_index] or eta <= -maxima[max_index]:
        raise ValueError(f"eta = {eta} would make an angle nonpositive")
    minima[min_index] += eta
    maxima[max_index] += eta
    shifted = validate(
        {"genus": d.genus, "saddles": list(d.saddles), "minima": minima, "maxima": maxima}
    )
    return decide(shifted)

"""Exact cone-angle divisors with Morse-role labels.

Angles are measured in full turns: an angle value ``a`` is the cone angle ``2*pi*a``.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from fractions import Fraction
from typing import Any

from pydantic import ValidationError

from conemetric.errors import DivisorValidationError
from conemetric.schemas import (
    Rational,
    Role,
    SingularityDivisor,
    Violation,
    format_rational,
    parse_rational,
)

logger = logging.getLogger(__name__)

__all__ = [
    "Rational",
    "Role",
    "SingularityDivisor",
    "all_angles",
    "divisor_from_angles",
    "gauss_bonnet_mass",
    "point_count",
    "saddle_excess",
    "swap_orientation",
    "validate",
]


def _check_angles(
    field: str, raw: Iterable[Any], violations: list[Violation]
) -> list[Fraction]:
    """Parse one angle list, recording every problem instead of stopping at the first."""
    parsed: list[Fraction] = []
    for item in raw:
        try:
            value = parse_rational(item)
        except ValueError as exc:
            violations.append(
                Violation(code="InvalidAngle", field=field, value=str(item), message=str(exc))
            )
            continue
        if value <= 0:
            violations.append(
                Violation(
                    code="InvalidAngle",
                    field=field,
                    value=format_rational(value),
                    message="angles must be positive",
                )
            )
            continue
        if field == "saddles" and (value.denominator != 1 or value < 2):
            violations.append(
                Violation(
                    code="NonIntegerSaddle",
                    field=field,
                    value=format_rational(value),
                    message="saddle angles are integers >= 2",
                )
            )
            continue
        if field != "saddles" and value == 1:
            violations.append(
                Violation(
                    code="UnitExtremalAngle",
                    field=field,
                    value="1",
                    message="an extremal cone point cannot have angle 1 (that is a smooth point)",
                )
            )
            continue
        parsed.append(value)
    return parsed


def validate(raw: Mapping[str, Any] | SingularityDivisor) -> SingularityDivisor:
    """Normalize raw angle data into a divisor.

    Angle lists are sorted ascending so that ``validate(validate(x)) == validate(x)``.

    Args:
        raw: A mapping with ``genus``, ``saddles``, ``minima``, ``maxima`` (and optionally
            ``irrational``), or an existing divisor.

    Returns:
        The normalized divisor.

    Raises:
        DivisorValidationError: With every violation found.
    """
    if isinstance(raw, SingularityDivisor):
        raw = raw.model_dump()
    if not isinstance(raw, Mapping):
        raise DivisorValidationError(
            [
                Violation(
                    code="InvalidAngle",
                    field="divisor",
                    value=type(raw).__name__,
                    message="divisor must be a JSON object",
                )
            ]
        )

    violations: list[Violation] = []
    genus_raw = raw.get("genus", 0)
    genus = 0
    if isinstance(genus_raw, bool) or not isinstance(genus_raw, int):
        violations.append(
            Violation(
                code="InvalidAngle",
                field="genus",
                value=str(genus_raw),
                message="genus must be an integer",
            )
        )
    elif genus_raw < 0:
        violations.append(
            Violation(
                code="NegativeGenus",
                field="genus",
                value=str(genus_raw),
                message="genus must be nonnegative",
            )
        )
    else:
        genus = genus_raw

    lists: dict[str, list[Fraction]] = {}
    for field in ("saddles", "minima", "maxima"):
        values = raw.get(field, ()) or ()
        if isinstance(values, (str, bytes)) or not isinstance(values, Iterable):
            violations.append(
                Violation(
                    code="InvalidAngle",
                    field=field,
                    value=str(values),
                    message="expected a list of rationals",
                )
            )
            values = ()
        lists[field] = _check_angles(field, values, violations)

    if violations:
        logger.debug("divisor rejected: %s", [v.code for v in violations])
        raise DivisorValidationError(violations)

    try:
        return SingularityDivisor(
            genus=genus,
            saddles=tuple(sorted(lists["saddles"])),
            minima=tuple(sorted(lists["minima"])),
            maxima=tuple(sorted(lists["maxima"])),
            irrational=bool(raw.get("irrational", False)),
        )
    except ValidationError as exc:  # pragma: no cover - guarded by the checks above
        raise DivisorValidationError(
            [Violation(code="InvalidAngle", field="divisor", value="", message=str(exc))]
        ) from exc


def divisor_from_angles(
    genus: int = 0,
    saddles: Iterable[Any] = (),
    minima: Iterable[Any] = (),
    maxima: Iterable[Any] = (),
) -> SingularityDivisor:
    """Convenience constructor that runs ``validate``."""
    return validate(
        {"genus": genus, "saddles": list(saddles), "minima": list(minima), "maxima": list(maxima)}
    )


def all_angles(d: SingularityDivisor) -> list[Fraction]:
    return [*d.saddles, *d.minima, *d.maxima]


def point_count(d: SingularityDivisor) -> int:
    return len(d.saddles) + len(d.minima) + len(d.maxima)


def saddle_excess(d: SingularityDivisor) -> int:
    """Sum of (alpha_i - 1) over saddles: the total zero order of the character form."""
    return int(sum((a - 1 for a in d.saddles), Fraction(0)))


def gauss_bonnet_mass(d: SingularityDivisor) -> Fraction:
    """(2 - 2g) + sum over all cone points of (angle - 1).

    Proportional to the area of a CSC-1 metric, hence positive whenever one exists.
    """
    return Fraction(2 - 2 * d.genus) + sum((a - 1 for a in all_angles(d)), Fraction(0))


def swap_orientation(d: SingularityDivisor) -> SingularityDivisor:
    """Exchange minima and maxima (Phi -> 4 - Phi, omega -> -omega)."""
    return d.model_copy(update={"minima": d.maxima, "maxima": d.minima})


def role_multiset(d: SingularityDivisor) -> list[tuple[Role, Fraction]]:
    """Sorted (role, angle) pairs, the comparison key used by plan verification."""
    pairs = [(Role.SADDLE, a) for a in d.saddles]
    pairs += [(Role.MINIMUM, a) for a in d.minima]
    pairs += [(Role.MAXIMUM, a) for a in d.maxima]
    return sorted(pairs)

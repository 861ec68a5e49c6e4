"""JSON schemas shared across conemetric.

Exact rationals travel as reduced ``"p/q"`` strings ("3" for integers).
"""

from __future__ import annotations

from enum import StrEnum
from fractions import Fraction
from typing import Annotated, Any, Literal

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    PlainValidator,
    WithJsonSchema,
)


def parse_rational(value: Any) -> Fraction:
    """Parse an exact rational from an int, a Fraction or a ``"p/q"`` string.

    Floats and decimal strings are refused: every angle in this package is exact.

    Raises:
        ValueError: If ``value`` is not an exact rational.
    """
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE"):
            raise ValueError(f"expected an exact rational 'p/q', got {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"expected an exact rational 'p/q', got {value!r}") from exc
    raise ValueError(f"expected an exact rational 'p/q', got {type(value).__name__}")


def format_rational(value: Fraction) -> str:
    """Reduced ``"p/q"`` text, or ``"p"`` when the denominator is 1."""
    return str(Fraction(value))


Rational = Annotated[
    Fraction,
    PlainValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]


class Role(StrEnum):
    """Morse role of a point for the function Phi."""

    SADDLE = "saddle"
    MINIMUM = "minimum"
    MAXIMUM = "maximum"


class SingularityDivisor(BaseModel):
    """Cone-angle data with Morse-role labels on a genus ``g`` surface.

    Angles are in units of 2*pi. ``irrational`` marks data whose residue vector is
    irrational; every decider answers OutOfScope for it.
    """

    model_config = ConfigDict(frozen=True)

    genus: int = 0
    saddles: tuple[Rational, ...] = ()
    minima: tuple[Rational, ...] = ()
    maxima: tuple[Rational, ...] = ()
    irrational: bool = False

    @property
    def counts(self) -> tuple[int, int, int]:
        """(I, J, L): numbers of saddles, minima and maxima."""
        return len(self.saddles), len(self.minima), len(self.maxima)


class Violation(BaseModel):
    """One problem found while validating raw angle data."""

    code: str
    field: str
    value: str
    message: str


class CaseTag(StrEnum):
    FOOTBALL = "Football"
    THREE_MIXED = "ThreeMixed"
    THREE_INTEGER_ONE_SADDLE = "ThreeIntegerOneSaddle"
    THREE_INTEGER_TWO_SADDLES = "ThreeIntegerTwoSaddles"
    THREE_INTEGER_ALL_SADDLES = "ThreeIntegerAllSaddles"
    SPHERE_GENERAL = "SphereGeneral"
    SADDLES_TWO_NON_INTEGER = "SaddlesTwoNonInteger"
    POSITIVE_GENUS = "PositiveGenus"


class NotExistsReason(StrEnum):
    NO_INTEGER_PQ = "NoIntegerPQ"
    NEGATIVE_PQ = "NegativePQ"
    DEGREE_BOUND_FAILED = "DegreeBoundFailed"
    PARITY_FAILED = "ParityFailed"
    UNEQUAL_FOOTBALL = "UnequalFootball"
    SADDLE_TOO_LARGE = "SaddleTooLarge"
    MISSING_EXTREMUM = "MissingExtremum"


class Certificate(BaseModel):
    """Machine-checkable evidence for an Exists verdict.

    ``divisor`` is the Morse labeling the certificate realizes. It equals the input
    divisor except for label-free cases (footballs, mixed triples) and orientation
    swaps, where roles may be exchanged.
    """

    model_config = ConfigDict(frozen=True)

    case: CaseTag
    p: int = Field(ge=0)
    q: int = Field(ge=0)
    residues: tuple[Rational, ...]
    degree: int | Literal["inf"]
    saddle_bound: int = Field(ge=0)
    orientation_swapped: bool = False
    divisor: SingularityDivisor
    conditions: tuple[int, ...] = ()
    feasible_saddle_specs: tuple[tuple[int, ...], ...] = ()


class Verdict(BaseModel):
    """Outcome of a decision procedure."""

    model_config = ConfigDict(frozen=True)

    status: Literal["exists", "not_exists", "out_of_scope"]
    certificate: Certificate | None = None
    reason: NotExistsReason | None = None
    detail: str | None = None
    feasible_saddle_specs: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def exists(cls, certificate: Certificate) -> Verdict:
        return cls(
            status="exists",
            certificate=certificate,
            feasible_saddle_specs=certificate.feasible_saddle_specs,
        )

    @classmethod
    def not_exists(cls, reason: NotExistsReason, detail: str | None = None) -> Verdict:
        return cls(status="not_exists", reason=reason, detail=detail)

    @classmethod
    def out_of_scope(cls, detail: str) -> Verdict:
        return cls(status="out_of_scope", detail=detail)

    @property
    def is_exists(self) -> bool:
        return self.status == "exists"

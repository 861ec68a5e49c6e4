"""Exception hierarchy for conemetric.

Every error carries a stable ``code`` that the CLI prints in its JSON error payload.
Decision procedures never raise for a mathematical outcome; they return a ``Verdict``.
"""

from __future__ import annotations

from typing import Any


class ConeMetricError(Exception):
    """Base class for all library errors."""

    code = "ConeMetricError"

    def __init__(self, message: str = "", **context: Any) -> None:
        super().__init__(message or self.code)
        self.message = message or self.code
        self.context = context

    def to_payload(self) -> dict[str, Any]:
        """Return the JSON-ready error description used by the CLI."""
        payload: dict[str, Any] = {"error": self.code, "message": self.message}
        if self.context:
            payload["context"] = {key: str(value) for key, value in self.context.items()}
        return payload


# angles


class DivisorValidationError(ConeMetricError):
    """Raised by ``validate`` with every violation found, not just the first."""

    code = "DivisorValidationError"

    def __init__(self, violations: list[Any]) -> None:
        codes = ", ".join(sorted({v.code for v in violations}))
        super().__init__(f"invalid divisor: {codes}")
        self.violations = violations

    def to_payload(self) -> dict[str, Any]:
        payload = super().to_payload()
        payload["violations"] = [v.model_dump(mode="json") for v in self.violations]
        return payload


# residues


class HypothesisViolated(ConeMetricError):
    code = "HypothesisViolated"


class SizeLimitExceeded(ConeMetricError):
    code = "SizeLimitExceeded"


# planner


class PlanFailure(ConeMetricError):
    """The planner could not realize a certificate. Valid certificates never reach this."""

    code = "PlanFailure"


# oneforms


class InvalidParameter(ConeMetricError):
    code = "InvalidParameter"


class PoleEvaluation(ConeMetricError):
    code = "PoleEvaluation"


class PathThroughPole(ConeMetricError):
    code = "PathThroughPole"


# metric


class ParameterMismatch(ConeMetricError):
    code = "ParameterMismatch"


class GridTouchesSingularity(ConeMetricError):
    code = "GridTouchesSingularity"


class SingularPointUnknown(ConeMetricError):
    code = "SingularPointUnknown"


class NotASingularity(ConeMetricError):
    code = "NotASingularity"


# commands


class InputError(ConeMetricError):
    """Malformed JSON, unreadable input file or inconsistent flags."""

    code = "InputError"

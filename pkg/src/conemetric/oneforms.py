"""Character 1-forms on the Riemann sphere.

A character form is an abelian differential of the third kind (simple poles only) whose
residues are nonzero reals. Here residues are exact rationals and finite poles are exact
Gaussian rationals, or symbolic roots of ``z**alpha + c`` for the standard forms:

    std1:  lam / z dz
    std2:  alpha z**(alpha-1) / (z**alpha + 1) dz
    std3:  alpha z**(alpha-1) / (z**alpha + 1) dz - alpha z**(alpha-1) / (z**alpha + a) dz

Structure (poles, residues, zero orders) is exact; evaluation is floating point.
"""

from __future__ import annotations

import cmath
import logging
import math
from collections.abc import Sequence
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Any, Literal

import numpy as np
import sympy
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator
from scipy.integrate import quad
from scipy.special import expit

from conemetric.config import settings
from conemetric.errors import InvalidParameter, PathThroughPole, PoleEvaluation
from conemetric.schemas import Certificate, Rational, SingularityDivisor, parse_rational

logger = logging.getLogger(__name__)

INFINITY = "inf"
FormKind = Literal["pf", "std1", "std2", "std3"]


class ComplexRational(BaseModel):
    """Exact Gaussian rational ``re + i*im``.

    Accepts ``"p/q"`` (real), ``[re, im]`` or ``{"re": ..., "im": ...}``.
    """

    model_config = ConfigDict(frozen=True)

    re: Rational
    im: Rational = Fraction(0)

    @model_validator(mode="before")
    @classmethod
    def _coerce(cls, data: Any) -> Any:
        if isinstance(data, (list, tuple)) and len(data) == 2:
            return {"re": data[0], "im": data[1]}
        if isinstance(data, (str, int, Fraction)) and not isinstance(data, bool):
            return {"re": data, "im": 0}
        return data

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def to_sympy(self) -> sympy.Expr:
        return sympy.Rational(self.re.numerator, self.re.denominator) + sympy.I * sympy.Rational(
            self.im.numerator, self.im.denominator
        )

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0


class RootPoint(BaseModel):
    """The ``index``-th root of ``z**degree + shift = 0``, kept symbolic."""

    model_config = ConfigDict(frozen=True)

    shift: ComplexRational
    degree: int
    index: int

    def to_complex(self) -> complex:
        base = cmath.exp(cmath.log(-self.shift.to_complex()) / self.degree)
        return base * cmath.exp(2j * math.pi * self.index / self.degree)


PoleKey = ComplexRational | RootPoint | str


class PoleTerm(BaseModel):
    model_config = ConfigDict(frozen=True)

    pole: ComplexRational
    residue: Rational


class ZeroPoint(BaseModel):
    """A zero of the form; ``location`` is ``"inf"`` or ``[re, im]`` (numeric)."""

    model_config = ConfigDict(frozen=True)

    location: tuple[float, float] | Literal["inf"]
    order: int

    def to_complex(self) -> complex | None:
        if self.location == INFINITY:
            return None
        return complex(*self.location)


class RationalOneForm(BaseModel):
    """A character 1-form, either partial fractions or one of the standard forms."""

    model_config = ConfigDict(frozen=True)

    kind: FormKind
    terms: tuple[PoleTerm, ...] = ()
    lam: Rational | None = None
    alpha: int | None = None
    a: ComplexRational | None = None

    @model_validator(mode="after")
    def _check(self) -> RationalOneForm:
        if self.kind == "pf":
            if not self.terms:
                raise ValueError("a partial-fraction form needs at least one pole")
            if any(t.residue == 0 for t in self.terms):
                raise ValueError("residues must be nonzero")
            if len({t.pole for t in self.terms}) != len(self.terms):
                raise ValueError("poles must be distinct")
        elif self.kind == "std1":
            if self.lam is None or self.lam == 0:
                raise ValueError("std1 needs lam != 0")
        else:
            if self.alpha is None or self.alpha < 2:
                raise ValueError(f"{self.kind} needs an integer alpha >= 2")
            if self.kind == "std3":
                if self.a is None or self.a.is_zero() or (self.a.re == 1 and self.a.im == 0):
                    raise ValueError("std3 needs a parameter a not in {0, 1}")
        return self


def standard_form(kind: int | str, **params: Any) -> RationalOneForm:
    """Build ``std1`` (``lam``), ``std2`` (``alpha``) or ``std3`` (``alpha``, ``a``).

    Raises:
        InvalidParameter: If ``kind`` is unknown or the parameters are out of range.
    """
    name = f"std{kind}" if isinstance(kind, int) else kind
    if name not in ("std1", "std2", "std3"):
        raise InvalidParameter(f"unknown standard form kind {kind!r}")
    try:
        return RationalOneForm(kind=name, **params)
    except ValidationError as exc:
        raise InvalidParameter(exc.errors()[0]["msg"], kind=name) from exc


def partial_fractions(terms: Sequence[tuple[Any, Any]]) -> RationalOneForm:
    """``sum residue / (z - pole) dz`` from ``(pole, residue)`` pairs.

    Raises:
        InvalidParameter: On a zero residue or repeated pole.
    """
    try:
        return RationalOneForm(
            kind="pf",
            terms=tuple(
                PoleTerm(pole=ComplexRational.model_validate(p), residue=parse_rational(r))
                for p, r in terms
            ),
        )
    except (ValidationError, ValueError) as exc:
        raise InvalidParameter(str(exc)) from exc


def _root_poles(shift: ComplexRational, degree: int) -> list[RootPoint]:
    return [RootPoint(shift=shift, degree=degree, index=k) for k in range(degree)]


def residues(form: RationalOneForm) -> dict[PoleKey, Fraction]:
    """Exact residue at every pole, ``"inf"`` included when it is a pole."""
    out: dict[PoleKey, Fraction] = {}
    if form.kind == "pf":
        for t in form.terms:
            out[t.pole] = t.residue
        at_infinity = -sum((t.residue for t in form.terms), Fraction(0))
        if at_infinity != 0:
            out[INFINITY] = at_infinity
    elif form.kind == "std1":
        out[ComplexRational(re=0)] = form.lam
        out[INFINITY] = -form.lam
    elif form.kind == "std2":
        for p in _root_poles(ComplexRational(re=1), form.alpha):
            out[p] = Fraction(1)
        out[INFINITY] = Fraction(-form.alpha)
    else:
        for p in _root_poles(ComplexRational(re=1), form.alpha):
            out[p] = Fraction(1)
        for p in _root_poles(form.a, form.alpha):
            out[p] = Fraction(-1)
    return out


def finite_poles(form: RationalOneForm) -> list[tuple[complex, Fraction]]:
    """Numeric locations of the finite poles with their residues."""
    return [(key.to_complex(), r) for key, r in residues(form).items() if key != INFINITY]


@lru_cache(maxsize=256)
def _pf_numerator(form: RationalOneForm) -> sympy.Poly:
    z = sympy.Symbol("z")
    poles = [t.pole.to_sympy() for t in form.terms]
    numerator = sympy.Integer(0)
    for k, t in enumerate(form.terms):
        term = sympy.Rational(t.residue.numerator, t.residue.denominator)
        for j, p in enumerate(poles):
            if j != k:
                term *= z - p
        numerator += term
    return sympy.Poly(sympy.expand(numerator), z)


def zeros(form: RationalOneForm) -> list[ZeroPoint]:
    """Zeros with exact orders (square-free factorization) and numeric locations."""
    if form.kind == "std1":
        return []
    if form.kind in ("std2", "std3"):
        found = [ZeroPoint(location=(0.0, 0.0), order=form.alpha - 1)]
        if form.kind == "std3":
            found.append(ZeroPoint(location=INFINITY, order=form.alpha - 1))
        return found

    numerator = _pf_numerator(form)
    found: list[ZeroPoint] = []
    if not numerator.is_zero and numerator.degree() > 0:
        _, factors = numerator.sqf_list()
        for factor, multiplicity in factors:
            for root in factor.nroots(n=30):
                value = complex(root)
                found.append(ZeroPoint(location=(value.real, value.imag), order=multiplicity))
    at_infinity = len(form.terms) - numerator.degree() - 2
    if at_infinity > 0:
        found.append(ZeroPoint(location=INFINITY, order=at_infinity))
    return sorted(found, key=lambda zp: (zp.location == INFINITY, str(zp.location)))


def zero_order_total(form: RationalOneForm) -> int:
    return sum(zp.order for zp in zeros(form))


def divisor_degree(form: RationalOneForm) -> int:
    """Sum of zero orders minus the number of (simple) poles; -2 on the sphere."""
    return zero_order_total(form) - len(residues(form))


def evaluate(form: RationalOneForm, z: Any) -> np.ndarray:
    """Vectorized value of ``omega / dz``.

    Raises:
        PoleEvaluation: If any ``z`` sits on a finite pole.
    """
    zz = np.asarray(z, dtype=complex)
    _check_off_poles(form, zz)
    with np.errstate(divide="ignore", invalid="ignore"):
        if form.kind == "pf":
            value = np.zeros_like(zz)
            for t in form.terms:
                value = value + float(t.residue) / (zz - t.pole.to_complex())
            return value
        if form.kind == "std1":
            return float(form.lam) / zz
        alpha = form.alpha
        value = alpha * zz ** (alpha - 1) / (zz**alpha + 1)
        if form.kind == "std3":
            value = value - alpha * zz ** (alpha - 1) / (zz**alpha + form.a.to_complex())
        return value


def evaluate_w(form: RationalOneForm, w: Any) -> np.ndarray:
    """``omega / dw`` in the chart ``w = 1/z`` (valid for ``w != 0``)."""
    ww = np.asarray(w, dtype=complex)
    return -evaluate(form, 1.0 / ww) / ww**2


def _check_off_poles(form: RationalOneForm, zz: np.ndarray) -> None:
    for pole, residue in finite_poles(form):
        if np.any(np.abs(zz - pole) <= 1e-14 * (1.0 + abs(pole))):
            raise PoleEvaluation(f"evaluation at the pole {pole} (residue {residue})")


def log_developing_ratio(form: RationalOneForm, z: Any) -> np.ndarray:
    """``log |f(z)|**2`` for the closed-form developing map, unnormalized."""
    zz = np.asarray(z, dtype=complex)
    _check_off_poles(form, zz)
    if form.kind == "pf":
        value = np.zeros(zz.shape)
        for t in form.terms:
            value = value + 2.0 * float(t.residue) * np.log(np.abs(zz - t.pole.to_complex()))
        return value
    if form.kind == "std1":
        return 2.0 * float(form.lam) * np.log(np.abs(zz))
    value = 2.0 * np.log(np.abs(zz**form.alpha + 1))
    if form.kind == "std3":
        value = value - 2.0 * np.log(np.abs(zz**form.alpha + form.a.to_complex()))
    return value


def default_basepoint(form: RationalOneForm) -> complex:
    """``1``, or the nearest nonzero Gaussian integer that is not a pole."""
    poles = [p for p, _ in finite_poles(form)]
    candidates = sorted(
        (complex(x, y) for x, y in product(range(-3, 4), repeat=2) if (x, y) != (0, 0)),
        key=lambda c: (abs(c), c != 1, -c.real, -c.imag),
    )
    for c in candidates:
        if all(abs(c - p) > 1e-9 for p in poles):
            return c
    raise PoleEvaluation("no admissible basepoint on the small lattice")


def _clearance(form: RationalOneForm) -> float:
    poles = [p for p, _ in finite_poles(form)]
    gaps = [abs(a - b) for i, a in enumerate(poles) for b in poles[i + 1 :]]
    scale = min(gaps) if gaps else 1.0
    return settings.evaluator.pole_clearance_factor * scale


def _segment_distance(u: complex, v: complex, p: complex) -> tuple[float, float]:
    d = v - u
    t = 0.0 if d == 0 else max(0.0, min(1.0, ((p - u) * d.conjugate()).real / abs(d) ** 2))
    return abs(u + t * d - p), t


def route(
    form: RationalOneForm, start: complex, end: complex, depth: int = 8
) -> list[complex]:
    """Polyline from ``start`` to ``end`` staying ``clearance`` away from interior poles.

    Raises:
        PathThroughPole: If the detours do not converge.
    """
    clearance = _clearance(form)
    for pole, _ in finite_poles(form):
        dist, t = _segment_distance(start, end, pole)
        if dist >= clearance or t in (0.0, 1.0):
            continue
        if depth == 0:
            raise PathThroughPole(f"cannot route around the pole {pole}")
        direction = (end - start) / abs(end - start)
        waypoint = pole + 2.0 * clearance * direction * 1j
        head = route(form, start, waypoint, depth - 1)
        tail = route(form, waypoint, end, depth - 1)
        return [*head, *tail[1:]]
    return [start, end]


def real_period(form: RationalOneForm, start: complex, end: complex) -> float:
    """``Re`` of the integral of ``omega`` along a pole-avoiding polyline."""
    points = route(form, complex(start), complex(end))
    total = 0.0
    for u, v in zip(points, points[1:]):
        d = v - u

        def integrand(t: float, u: complex = u, d: complex = d) -> float:
            return float((evaluate(form, u + t * d) * d).real)

        value, _ = quad(
            integrand,
            0.0,
            1.0,
            epsabs=settings.evaluator.quad_epsabs,
            epsrel=settings.evaluator.quad_epsrel,
            limit=200,
        )
        total += value
    return total


def developing_ratio(
    form: RationalOneForm,
    z: Any,
    basepoint: complex | None = None,
    a0: float = 0.0,
    method: Literal["closed", "quadrature"] = "closed",
) -> Any:
    """``|f(z)|**2 * exp(2 a0)`` where ``f = exp(integral of omega)``.

    With ``basepoint`` the ratio is normalized to ``exp(2 a0)`` there; without it the
    closed forms are used as is (``|z|**(2 lam)``, ``|z**alpha + 1|**2``, ...).
    ``method="quadrature"`` integrates ``Re omega`` numerically from the basepoint
    (default ``default_basepoint``) and only takes a scalar ``z``.

    Raises:
        PoleEvaluation: If ``z`` or the basepoint is a pole.
        PathThroughPole: If no pole-avoiding path is found.
    """
    if method == "quadrature":
        start = default_basepoint(form) if basepoint is None else complex(basepoint)
        _check_off_poles(form, np.asarray(start))
        _check_off_poles(form, np.asarray(z, dtype=complex))
        return math.exp(2.0 * a0 + 2.0 * real_period(form, start, complex(z)))
    log_ratio = log_developing_ratio(form, z)
    if basepoint is not None:
        log_ratio = log_ratio - log_developing_ratio(form, basepoint)
    result = np.exp(2.0 * a0 + log_ratio)
    return float(result) if np.ndim(result) == 0 else result


class PhiValue(BaseModel):
    value: float
    at_pole: bool = False
    residue: Rational | None = None


def phi_field(
    form: RationalOneForm, z: Any, phi0: float = 2.0, p0: complex | None = None
) -> np.ndarray:
    """Vectorized Phi in (0, 4) with ``Phi(p0) = phi0``."""
    if not 0.0 < phi0 < 4.0:
        raise InvalidParameter(f"phi0 must lie in (0, 4), got {phi0}")
    p0 = default_basepoint(form) if p0 is None else p0
    log_k = math.log(phi0 / (4.0 - phi0))
    t = log_k + log_developing_ratio(form, z) - log_developing_ratio(form, p0)
    return 4.0 * expit(t)


def phi(
    form: RationalOneForm, z: complex, phi0: float = 2.0, p0: complex | None = None
) -> PhiValue:
    """Phi at one point; poles return the limit (0 for residue > 0, 4 for residue < 0)."""
    for pole, residue in finite_poles(form):
        if abs(complex(z) - pole) <= 1e-14 * (1.0 + abs(pole)):
            return PhiValue(value=0.0 if residue > 0 else 4.0, at_pole=True, residue=residue)
    return PhiValue(value=float(phi_field(form, complex(z), phi0, p0)))


def phi_at_infinity(form: RationalOneForm) -> PhiValue | None:
    """Limit of Phi at infinity when infinity is a pole, else ``None``."""
    r = residues(form).get(INFINITY)
    if r is None:
        return None
    return PhiValue(value=0.0 if r > 0 else 4.0, at_pole=True, residue=r)


def angles_from_form(form: RationalOneForm) -> SingularityDivisor:
    """Read the cone divisor: zeros of order n give saddles of angle n + 1; poles with
    ``|Res| != 1`` give minima (Res > 0) or maxima (Res < 0) of angle ``|Res|``."""
    saddles = sorted(Fraction(zp.order + 1) for zp in zeros(form))
    minima = sorted(r for r in residues(form).values() if r > 0 and r != 1)
    maxima = sorted(-r for r in residues(form).values() if r < 0 and r != -1)
    return SingularityDivisor(saddles=tuple(saddles), minima=tuple(minima), maxima=tuple(maxima))


class FormReport(BaseModel):
    """Outcome of ``check_character_form``."""

    kind: FormKind
    ok: bool
    residues_nonzero: bool
    residue_sum: Rational
    residue_sum_zero: bool
    zero_order_total: int
    pole_count: int
    divisor_degree: int
    divisor_degree_ok: bool
    real_part_exact: bool
    divisor: SingularityDivisor


def check_character_form(form: RationalOneForm) -> FormReport:
    """Check the character-form conditions exactly.

    Real-part exactness is derived: on the sphere with real residues every period of
    ``omega`` is ``2*pi*i*Res``, purely imaginary.
    """
    res = residues(form)
    total = sum(res.values(), Fraction(0))
    nonzero = all(r != 0 for r in res.values())
    orders = zero_order_total(form)
    degree = orders - len(res)
    report = FormReport(
        kind=form.kind,
        ok=nonzero and total == 0 and degree == -2,
        residues_nonzero=nonzero,
        residue_sum=total,
        residue_sum_zero=total == 0,
        zero_order_total=orders,
        pole_count=len(res),
        divisor_degree=degree,
        divisor_degree_ok=degree == -2,
        real_part_exact=nonzero,
        divisor=angles_from_form(form),
    )
    logger.debug("form %s checked: ok=%s", form.kind, report.ok)
    return report


def form_from_divisor(
    d: SingularityDivisor, cert: Certificate | None = None
) -> RationalOneForm:
    """The ``std1`` form of a football divisor (or the round sphere).

    With a certificate, its realized labeling is used instead of ``d``.

    Raises:
        InvalidParameter: If ``d`` is not a genus-zero football.
    """
    if cert is not None:
        d = cert.divisor
    angles = sorted([*d.saddles, *d.minima, *d.maxima])
    if d.genus != 0 or d.saddles or len(angles) not in (0, 2):
        raise InvalidParameter("only football divisors have a standard form here")
    if not angles:
        return standard_form(1, lam=Fraction(1))
    if angles[0] != angles[1]:
        raise InvalidParameter(f"unequal football angles {angles}")
    lam = angles[0] if (d.minima or not d.maxima) else -angles[0]
    return standard_form(1, lam=lam)


def form_from_json(data: Any) -> RationalOneForm:
    """Build a form from ``{"kind": "std2", "alpha": 3}`` or
    ``{"kind": "pf", "terms": [[pole, residue], ...]}`` (terms may also be objects).

    Raises:
        InvalidParameter: If the description is not a valid character form.
    """
    if not isinstance(data, dict) or "kind" not in data:
        raise InvalidParameter("a form needs an object with a 'kind' field")
    params = {k: v for k, v in data.items() if k != "kind"}
    if data["kind"] != "pf":
        return standard_form(data["kind"], **params)
    terms = params.get("terms") or []
    pairs = [(t.get("pole"), t.get("residue")) if isinstance(t, dict) else tuple(t) for t in terms]
    if not pairs or any(len(pair) != 2 for pair in pairs):
        raise InvalidParameter("pf terms must be [pole, residue] pairs")
    return partial_fractions(pairs)

"""Numerical checks of conformal cone metrics ``lambda(z) |dz|**2``.

Densities are handled through ``log lambda``. Near infinity the chart ``w = 1/z`` is
used, where ``lambda_w(w) = lambda(1/w) / |w|**4``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel
from scipy.integrate import quad
from scipy.special import expit, log_expit

from conemetric.config import settings
from conemetric.errors import (
    GridTouchesSingularity,
    InvalidParameter,
    NotASingularity,
    ParameterMismatch,
    SingularPointUnknown,
)
from conemetric.oneforms import (
    INFINITY,
    RationalOneForm,
    default_basepoint,
    evaluate,
    evaluate_w,
    finite_poles,
    log_developing_ratio,
    residues,
    zeros,
)

logger = logging.getLogger(__name__)

Location = complex | Literal["inf"]


@dataclass(frozen=True)
class SingularPoint:
    location: Location
    angle: Fraction


@dataclass(frozen=True)
class MetricField:
    """A conformal density with its declared cone points.

    ``special`` lists finite points the density cannot be evaluated at (all poles and
    zeros of a form, smooth or not); sampling keeps away from them.
    """

    log_density: Callable[[np.ndarray], np.ndarray]
    singular: tuple[SingularPoint, ...]
    label: str
    special: tuple[complex, ...] = ()
    form: RationalOneForm | None = None
    radial_symmetric: bool = False
    extras: dict = field(default_factory=dict)

    def density(self, z) -> np.ndarray:
        return np.exp(self.log_density(np.asarray(z, dtype=complex)))

    def log_density_w(self, w) -> np.ndarray:
        ww = np.asarray(w, dtype=complex)
        return self.log_density(1.0 / ww) - 4.0 * np.log(np.abs(ww))

    def find(self, p: Location) -> SingularPoint:
        """The declared singular point at ``p``.

        Raises:
            SingularPointUnknown: If ``p`` is not declared.
        """
        for s in self.singular:
            if s.location == INFINITY or p == INFINITY:
                if s.location == p:
                    return s
            elif abs(complex(s.location) - complex(p)) < 1e-9:
                return s
        raise SingularPointUnknown(f"{p} is not a singular point of {self.label}")


def explicit_football_metric(alpha: Fraction | int | float, b: float | None = None) -> MetricField:
    """The football ``S^2_{alpha,alpha}`` in closed form.

    ``4 alpha**2 |z|**(2(alpha-1)) / (1 + |z|**(2 alpha))**2``, or for integer ``alpha``
    with a shift ``b``: ``4 alpha**2 |z|**(2(alpha-1)) / (1 + |z**alpha + b|**2)**2``.

    Raises:
        InvalidParameter: If ``alpha <= 0``.
        ParameterMismatch: If ``b`` is given with a non-integer ``alpha``.
    """
    a = Fraction(alpha)
    if a <= 0:
        raise InvalidParameter(f"alpha must be positive, got {alpha}")
    if b is not None and a.denominator != 1:
        raise ParameterMismatch("the shifted football needs an integer alpha", alpha=a, b=b)
    af = float(a)
    base = math.log(4.0 * af * af)

    if b is None:

        def log_density(z: np.ndarray) -> np.ndarray:
            log_r = np.log(np.abs(z))
            return base + 2.0 * (af - 1.0) * log_r - 2.0 * np.logaddexp(0.0, 2.0 * af * log_r)

        label = f"football alpha={a}"
    else:
        n = int(a)

        def log_density(z: np.ndarray) -> np.ndarray:
            return (
                base
                + 2.0 * (af - 1.0) * np.log(np.abs(z))
                - 2.0 * np.log1p(np.abs(z**n + b) ** 2)
            )

        label = f"football alpha={a} b={b}"

    return MetricField(
        log_density=log_density,
        singular=(SingularPoint(0j, a), SingularPoint(INFINITY, a)),
        label=label,
        special=(0j,),
        radial_symmetric=b is None or b == 0,
    )


def form_metric(
    form: RationalOneForm, phi0: float = 2.0, p0: complex | None = None
) -> MetricField:
    """``Phi (4 - Phi) / 4 * |omega|**2`` for a character form, ``Phi(p0) = phi0``."""
    if not 0.0 < phi0 < 4.0:
        raise InvalidParameter(f"phi0 must lie in (0, 4), got {phi0}")
    p0 = default_basepoint(form) if p0 is None else p0
    shift = math.log(phi0 / (4.0 - phi0)) - float(log_developing_ratio(form, p0))

    def log_density(z: np.ndarray) -> np.ndarray:
        t = shift + log_developing_ratio(form, z)
        return (
            math.log(4.0)
            + log_expit(t)
            + log_expit(-t)
            + 2.0 * np.log(np.abs(evaluate(form, z)))
        )

    singular: list[SingularPoint] = []
    special: list[complex] = []
    for zp in zeros(form):
        loc = zp.to_complex()
        singular.append(SingularPoint(INFINITY if loc is None else loc, Fraction(zp.order + 1)))
        if loc is not None:
            special.append(loc)
    for key, r in residues(form).items():
        loc = INFINITY if key == INFINITY else key.to_complex()
        if abs(r) != 1:
            singular.append(SingularPoint(loc, abs(r)))
        if loc != INFINITY:
            special.append(loc)

    return MetricField(
        log_density=log_density,
        singular=tuple(singular),
        label=f"form {form.kind}",
        special=tuple(special),
        form=form,
        radial_symmetric=form.kind == "std1",
        extras={"phi0": phi0, "p0": p0},
    )


def flat_cone_metric() -> MetricField:
    """``|z|**2 |dz|**2``: curvature zero, cone angle 2 at the origin."""

    def log_density(z: np.ndarray) -> np.ndarray:
        return 2.0 * np.log(np.abs(z))

    return MetricField(
        log_density=log_density,
        singular=(SingularPoint(0j, Fraction(2)),),
        label="flat cone",
        special=(0j,),
    )


class GridSample(BaseModel):
    z_re: float
    z_im: float
    density: float
    curvature: float
    residual: float


class GridReport(BaseModel):
    rmin: float
    rmax: float
    h: float
    target: float
    points: int
    excluded: int
    max_residual: float
    max_residual_half: float | None = None
    ratio: float | None = None
    samples: list[GridSample] = []

    def to_csv(self, path: str | Path) -> None:
        """Write ``z_re, z_im, lambda, K, residual`` rows."""
        rows = np.array(
            [[s.z_re, s.z_im, s.density, s.curvature, s.residual] for s in self.samples]
        ).reshape(-1, 5)
        np.savetxt(
            path, rows, delimiter=",", header="z_re,z_im,lambda,K,residual", comments=""
        )


def _harmonic_part(field: MetricField, chart: str) -> Callable[[np.ndarray], np.ndarray]:
    """Sum of ``2 (alpha - 1) log|x - p|`` over cone points visible in the chart."""
    terms: list[tuple[complex, float]] = []
    for s in field.singular:
        weight = 2.0 * (float(s.angle) - 1.0)
        if weight == 0.0:
            continue
        if chart == "z" and s.location != INFINITY:
            terms.append((complex(s.location), weight))
        elif chart == "w":
            if s.location == INFINITY:
                terms.append((0j, weight))
            elif complex(s.location) != 0:
                terms.append((1.0 / complex(s.location), weight))

    def harmonic(x: np.ndarray) -> np.ndarray:
        total = np.zeros(x.shape)
        for p, weight in terms:
            total = total + weight * np.log(np.abs(x - p))
        return total

    return harmonic


def _laplacian(u: Callable[[np.ndarray], np.ndarray], x: np.ndarray, h: float) -> np.ndarray:
    """Five-point stencil."""
    return (u(x + h) + u(x - h) + u(x + 1j * h) + u(x - 1j * h) - 4.0 * u(x)) / (h * h)


def _curvature(
    field: MetricField, x: np.ndarray, h: float, chart: str
) -> tuple[np.ndarray, np.ndarray]:
    log_density = field.log_density if chart == "z" else field.log_density_w
    harmonic = _harmonic_part(field, chart)

    def u(y: np.ndarray) -> np.ndarray:
        return log_density(y) - harmonic(y)

    lam = np.exp(log_density(x))
    return lam, -_laplacian(u, x, h) / (2.0 * lam)


def _grid(rmin: float, rmax: float) -> np.ndarray:
    ev = settings.evaluator
    radii = np.geomspace(rmin, rmax, ev.radial_samples)
    # offset keeps rays off the coordinate axes, where standard-form poles sit
    thetas = np.linspace(0.0, 2.0 * math.pi, ev.angular_samples, endpoint=False) + 0.1234
    rr, tt = np.meshgrid(radii, thetas, indexing="ij")
    return (rr * np.exp(1j * tt)).ravel()


def _sample_curvature(
    field: MetricField,
    h: float,
    rmin: float,
    rmax: float,
    target: float,
    exclude_singular: bool,
) -> tuple[np.ndarray, list[GridSample], int]:
    ev = settings.evaluator
    margin = ev.stencil_margin * h
    seam = ev.chart_switch_radius
    z = _grid(rmin, rmax)
    inner = np.abs(z) <= seam
    keep = np.abs(np.abs(z) - seam) >= margin
    # distances are measured in the chart the stencil runs in
    for p in field.special:
        if p == 0:
            distance = np.where(inner, np.abs(z), np.inf)
        else:
            distance = np.where(inner, np.abs(z - p), np.abs(1.0 / z - 1.0 / p))
        near = distance < margin + 2.0 * h
        if near.any() and not exclude_singular:
            raise GridTouchesSingularity(f"grid passes within {margin} of {p}", h=h)
        keep &= ~near
    excluded = int((~keep).sum())
    z = z[keep]
    inner = inner[keep]
    if z.size == 0:
        raise GridTouchesSingularity("every grid point is excluded", h=h)

    lam = np.empty(z.shape)
    curvature = np.empty(z.shape)
    lam[inner], curvature[inner] = _curvature(field, z[inner], h, "z")
    lam_w, curvature_w = _curvature(field, 1.0 / z[~inner], h, "w")
    # report the z-chart density at outer points
    lam[~inner] = lam_w * np.abs(1.0 / z[~inner]) ** 4
    curvature[~inner] = curvature_w
    residual = np.abs(curvature - target)
    samples = [
        GridSample(
            z_re=float(zi.real),
            z_im=float(zi.imag),
            density=float(li),
            curvature=float(ki),
            residual=float(ri),
        )
        for zi, li, ki, ri in zip(z, lam, curvature, residual)
    ]
    return residual, samples, excluded


def curvature_residual(
    field: MetricField,
    h: float = 1e-3,
    annulus: tuple[float, float] = (0.2, 5.0),
    target: float = 1.0,
    compare_half: bool = True,
    exclude_singular: bool = True,
) -> GridReport:
    """Max ``|K - target|`` with ``K = -Laplacian(log lambda) / (2 lambda)`` on a polar grid.

    Cone terms ``2 (alpha - 1) log|z - p|`` are harmonic off the cone points and are
    removed from ``log lambda`` before differencing. With ``compare_half`` the grid is
    re-evaluated at ``h/2`` and ``ratio`` holds ``max(h) / max(h/2)``.

    Raises:
        InvalidParameter: If ``h`` or the annulus is not positive.
        GridTouchesSingularity: If a special point is within the stencil margin and
            ``exclude_singular`` is off, or nothing is left to sample.
    """
    rmin, rmax = annulus
    if h <= 0 or not 0 < rmin < rmax:
        raise InvalidParameter(f"bad grid h={h}, annulus={annulus}")
    residual, samples, excluded = _sample_curvature(
        field, h, rmin, rmax, target, exclude_singular
    )
    report = GridReport(
        rmin=rmin,
        rmax=rmax,
        h=h,
        target=target,
        points=len(samples),
        excluded=excluded,
        max_residual=float(residual.max()),
        samples=samples,
    )
    if compare_half:
        half, _, _ = _sample_curvature(field, h / 2, rmin, rmax, target, exclude_singular)
        report.max_residual_half = float(half.max())
        if report.max_residual_half > 0:
            report.ratio = report.max_residual / report.max_residual_half
    logger.info(
        "%s: max |K - %s| = %.3e (ratio %s)", field.label, target, report.max_residual, report.ratio
    )
    return report


class ConeFit(BaseModel):
    alpha: float
    declared: float
    error: float
    rays: int


def cone_angle_fit(field: MetricField, p: Location) -> ConeFit:
    """Fit ``phi = log(lambda)/2`` against ``log r`` near ``p``; ``alpha = slope + 1``.

    Each ray is fitted separately with regressors ``[log r, 1, r]`` and the slopes are
    averaged over symmetric rays.

    Raises:
        SingularPointUnknown: If ``p`` is not a declared singular point.
    """
    point = field.find(p)
    ev = settings.evaluator
    radii = np.logspace(math.log10(ev.fit_rmin), math.log10(ev.fit_rmax), ev.fit_samples)
    design = np.column_stack([np.log(radii), np.ones_like(radii), radii])
    slopes = []
    for k in range(ev.fit_rays):
        theta = 2.0 * math.pi * k / ev.fit_rays + 0.1234
        offsets = radii * np.exp(1j * theta)
        if point.location == INFINITY:
            y = 0.5 * field.log_density_w(offsets)
        else:
            y = 0.5 * field.log_density(complex(point.location) + offsets)
        coefficients, *_ = np.linalg.lstsq(design, y, rcond=None)
        slopes.append(coefficients[0])
    alpha = float(np.mean(slopes)) + 1.0
    return ConeFit(
        alpha=alpha,
        declared=float(point.angle),
        error=abs(alpha - float(point.angle)),
        rays=ev.fit_rays,
    )


def _cone_angle(field: MetricField, p: Location) -> float:
    try:
        return float(field.find(p).angle)
    except SingularPointUnknown:
        return 1.0


def _power_quad(
    log_density: Callable[[float], np.ndarray], a: float, lo: float, hi: float
) -> float:
    """``integral of sqrt(lambda(r)) dr`` over ``(lo, hi)``, integrated in ``u = r**a``.

    With ``a`` the cone angle at ``r = 0`` the integrand stays bounded there.
    """
    ev = settings.evaluator

    def integrand(u: float) -> float:
        r = u ** (1.0 / a)
        return float(np.exp(0.5 * log_density(r) + math.log(r / (a * u))))

    value, _ = quad(
        integrand, lo**a, hi**a, epsabs=ev.quad_epsabs, epsrel=ev.quad_epsrel, limit=200
    )
    return value


def _radial_arc(
    field: MetricField, theta: float, lo: float = 0.0, hi: float = math.inf
) -> float:
    """Length of the ray ``arg z = theta`` between radii ``lo < hi``.

    The part outside the unit circle is integrated in the ``w = 1/z`` chart.
    """
    direction = complex(math.cos(theta), math.sin(theta))
    total = 0.0
    if lo < 1.0:
        total += _power_quad(
            lambda r: field.log_density(np.asarray(r * direction)),
            _cone_angle(field, 0j),
            lo,
            min(hi, 1.0),
        )
    if hi > 1.0:
        total += _power_quad(
            lambda rho: field.log_density_w(np.asarray(rho * direction.conjugate())),
            _cone_angle(field, INFINITY),
            0.0 if math.isinf(hi) else 1.0 / hi,
            1.0 / max(lo, 1.0),
        )
    return total


def geodesic_min_to_max_length(field: MetricField, theta: float = 0.0) -> float:
    """Length of the radial line from 0 to infinity, which is ``pi`` on a football."""
    return _radial_arc(field, theta)


def geodesic_length_from_phi() -> float:
    """``integral over (0, 4) of dPhi / sqrt(Phi (4 - Phi))``, which equals ``pi``."""
    value, _ = quad(lambda x: 1.0, 0.0, 4.0, weight="alg", wvar=(-0.5, -0.5))
    return value


class ProfileSample(BaseModel):
    r: float
    arc_length: float
    phi: float
    expected: float
    error: float


class ProfileReport(BaseModel):
    max_error: float
    samples: list[ProfileSample]


def phi_profile_check(
    form: RationalOneForm,
    phi0: float = 2.0,
    p0: complex | None = None,
    radii: np.ndarray | None = None,
) -> ProfileReport:
    """Compare Phi with ``4 sin(s/2)**2`` along the ray from the minimum of a ``std1`` form.

    ``s`` is the arc length from the minimum (``z = 0`` when ``lam > 0``, infinity
    otherwise).

    Raises:
        InvalidParameter: If ``form`` is not ``std1``.
    """
    if form.kind != "std1":
        raise InvalidParameter("the profile identity needs a rotationally symmetric std1 form")
    field = form_metric(form, phi0, p0)
    p0 = field.extras["p0"]
    shift = math.log(phi0 / (4.0 - phi0)) - float(log_developing_ratio(form, p0))
    radii = np.logspace(-3, 3, 25) if radii is None else radii
    samples = []
    for r in radii:
        s = _radial_arc(field, 0.0, 0.0, r) if form.lam > 0 else _radial_arc(field, 0.0, r)
        x = shift + float(log_developing_ratio(form, complex(r)))
        phi = 4.0 * float(expit(x))
        expected = 4.0 * math.sin(s / 2.0) ** 2
        samples.append(
            ProfileSample(r=r, arc_length=s, phi=phi, expected=expected, error=abs(phi - expected))
        )
    return ProfileReport(max_error=max(s.error for s in samples), samples=samples)


class SingularityClass(BaseModel):
    """Killing-field classification of a zero or pole of a character form."""

    kind: Literal["extremal", "saddle"]
    zero_order: int = 0
    residue: str | None = None
    separatrix_count: int | None = None
    separatrices_per_family: int | None = None
    numeric_separatrices: int | None = None
    included_angle: float | None = None


def _count_sign_changes(values: np.ndarray) -> int:
    signs = np.sign(values)
    return int(np.count_nonzero(signs != np.roll(signs, 1)))


def classify_vector_field_singularity(form: RationalOneForm, p: Location) -> SingularityClass:
    """Poles are extremal points of Phi; a zero of order ``n`` is a saddle with
    ``2(n + 1)`` separatrices meeting at included angle ``pi``.

    The separatrix count is also measured: the sign of ``Im(omega(p + eps e^{i t}) e^{i t})``
    changes ``2(n + 1)`` times around a small circle.

    Raises:
        NotASingularity: If ``p`` is neither a zero nor a pole.
    """
    res = residues(form)
    if p == INFINITY:
        if INFINITY in res:
            return SingularityClass(kind="extremal", residue=str(res[INFINITY]))
        match = [zp for zp in zeros(form) if zp.location == INFINITY]
    else:
        for pole, r in finite_poles(form):
            if abs(pole - complex(p)) < 1e-9:
                return SingularityClass(kind="extremal", residue=str(r))
        match = [
            zp
            for zp in zeros(form)
            if zp.location != INFINITY and abs(zp.to_complex() - complex(p)) < 1e-9
        ]
    if not match:
        raise NotASingularity(f"{p} is neither a zero nor a pole of the form")

    n = match[0].order
    special = [q for q, _ in finite_poles(form)] + [
        zp.to_complex() for zp in zeros(form) if zp.location != INFINITY
    ]
    if p == INFINITY:
        center = 0j
        spread = [abs(1.0 / q) for q in special if q != 0]
    else:
        center = complex(p)
        spread = [abs(q - center) for q in special if abs(q - center) > 1e-9]
    eps = 1e-2 * min(spread, default=1.0)
    thetas = np.linspace(0.0, 2.0 * math.pi, 2048, endpoint=False) + 1e-3
    circle = np.exp(1j * thetas)
    if p == INFINITY:
        values = evaluate_w(form, center + eps * circle)
    else:
        values = evaluate(form, center + eps * circle)
    counted = _count_sign_changes((values * circle).imag)
    return SingularityClass(
        kind="saddle",
        zero_order=n,
        separatrix_count=2 * (n + 1),
        separatrices_per_family=n + 1,
        numeric_separatrices=counted,
        included_angle=math.pi,
    )

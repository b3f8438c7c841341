"""Analytic model of one spinning massive particle in flat spacetime.

The particle sits on a vertical line; space around it is a cone of
total angle ``theta0`` (mass ``2*pi - theta0``) and crossing the glued
wedge face shifts time by the spin ``sigma``.  Everything here is
closed-form: adapted coordinates, the metric quadratic form, the CTC
radius ``r0 = sigma/theta0`` with its region classification, the
developing isometries, return times and directions of lightrays sent
and received by an inertial observer, and the inverse problem of
reading the particle parameters off those measurements.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AngleOutOfRange,
    DegenerateGeometry,
    InadmissibleWinding,
    NonpositiveRadius,
)
from .exact import ExactAngle, angle_value, require_exact

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ParticleModel:
    """Cone angle and spin, with the radii they determine."""

    theta0: float
    sigma: float
    theta0_exact: ExactAngle | None = None

    def __post_init__(self):
        if self.theta0 <= 0:
            raise AngleOutOfRange("cone angle must be positive")

    @staticmethod
    def make(theta0, sigma) -> "ParticleModel":
        if isinstance(theta0, ExactAngle):
            return ParticleModel(theta0.value, float(sigma), theta0)
        return ParticleModel(float(theta0), float(sigma), None)

    @property
    def mass(self) -> float:
        return TWO_PI - self.theta0

    @property
    def ctc_radius(self) -> float:
        """Signed radius r0 at which the rotational field turns null."""
        return self.sigma / self.theta0

    @property
    def paradox_radius(self) -> float:
        """pi/2 times |r0|: outside it no returning signal is paradoxical."""
        return math.pi * abs(self.ctc_radius) / 2.0

    def is_finite_quotient(self) -> bool:
        """Whether the wedge copies close up: 2*pi / theta0 rational."""
        return require_exact(self.theta0_exact).two_pi_ratio_is_rational()


def is_finite_quotient(theta0) -> bool:
    """Whether the developed wedges match up perfectly around the line."""
    return require_exact(theta0).two_pi_ratio_is_rational()


@dataclass(frozen=True)
class ObserverLine:
    """Inertial observer worldline (t sinh(v), d, t cosh(v)) in (x, y, time)."""

    distance: float
    rapidity: float = 0.0

    def __post_init__(self):
        if self.distance == 0.0:
            raise DegenerateGeometry("observer must not meet the singular line")

    @property
    def velocity(self) -> float:
        return math.tanh(self.rapidity)

    def position(self, t):
        return (
            t * math.sinh(self.rapidity),
            self.distance,
            t * math.cosh(self.rapidity),
        )


# -- coordinates and metric -----------------------------------------------------


@dataclass(frozen=True)
class AdaptedPoint:
    """Point in (r, alpha, tau) coordinates, with the stored winding."""

    r: float
    alpha: float
    tau: float
    winding: int

    @property
    def alpha_total(self) -> float:
        return self.alpha + TWO_PI * self.winding


def to_adapted_coords(model: ParticleModel, point) -> AdaptedPoint:
    """Wedge coordinates (r, theta, t) -> adapted (r, alpha, tau).

    ``alpha`` rescales the angle to a full turn and ``tau`` untwists
    time; the integer part of the turn is kept, so the map inverts
    exactly.
    """
    r, theta, t = point
    if r <= 0:
        raise NonpositiveRadius("radial coordinate must be positive")
    alpha_raw = TWO_PI * theta / model.theta0
    winding = math.floor(alpha_raw / TWO_PI)
    return AdaptedPoint(
        r,
        alpha_raw - TWO_PI * winding,
        model.theta0 * t - model.sigma * theta,
        int(winding),
    )


def from_adapted_coords(model: ParticleModel, adapted: AdaptedPoint):
    """Inverse of :func:`to_adapted_coords`."""
    if adapted.r <= 0:
        raise NonpositiveRadius("radial coordinate must be positive")
    theta = model.theta0 * adapted.alpha_total / TWO_PI
    t = (adapted.tau + model.sigma * theta) / model.theta0
    return (adapted.r, theta, t)


def metric_value(model: ParticleModel, point, tangent) -> float:
    """The stationary metric evaluated on a tangent at (r, alpha, tau)."""
    r = point[0]
    if r <= 0:
        raise NonpositiveRadius("radial coordinate must be positive")
    dr, dalpha, dtau = tangent
    r0 = model.ctc_radius
    scale = model.theta0 / TWO_PI
    return (
        -(dtau * dtau) / (model.theta0 * model.theta0)
        - (r0 / math.pi) * dalpha * dtau
        + scale * scale * (r * r - r0 * r0) * dalpha * dalpha
        + dr * dr
    )


class RegionClass(enum.Enum):
    CTC_REGION = "ctc-region"
    CTC_SURFACE = "ctc-surface"
    INTERIOR = "interior"


def classify_region(model: ParticleModel, r) -> RegionClass:
    """Which causal zone the circle of radius r lies in.

    Matches the causal character of the rotational Killing field:
    timelike inside the CTC radius, null on it, spacelike outside.
    """
    if r <= 0:
        raise NonpositiveRadius("radial coordinate must be positive")
    r0 = abs(model.ctc_radius)
    if r0 == 0.0:
        return RegionClass.INTERIOR
    if abs(r - r0) <= 1e-9 * max(r, r0):
        return RegionClass.CTC_SURFACE
    return RegionClass.CTC_REGION if r < r0 else RegionClass.INTERIOR


# -- developing map --------------------------------------------------------------


@dataclass(frozen=True)
class WedgeIsometry:
    """The elliptic isometry powering the developing map.

    Power ``i`` rotates by ``i * theta0`` and lifts time by
    ``i * sigma``; composition adds powers exactly.
    """

    theta0: float
    sigma: float
    power: int

    @property
    def rotation(self) -> float:
        return self.power * self.theta0

    @property
    def time_shift(self) -> float:
        return self.power * self.sigma

    def apply(self, point):
        r, theta, t = point
        return (r, theta + self.rotation, t + self.time_shift)

    def apply_cartesian(self, event):
        x, y, t = event
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        return (c * x - s * y, s * x + c * y, t + self.time_shift)

    def compose(self, other: "WedgeIsometry") -> "WedgeIsometry":
        if (self.theta0, self.sigma) != (other.theta0, other.sigma):
            raise DegenerateGeometry("isometries belong to different models")
        return WedgeIsometry(self.theta0, self.sigma, self.power + other.power)


def develop(model: ParticleModel, i: int) -> WedgeIsometry:
    """The i-th developing isometry (rotate by i*theta0, lift by i*sigma)."""
    return WedgeIsometry(model.theta0, model.sigma, int(i))


# -- returning lightrays ----------------------------------------------------------


def admissible_windings(model: ParticleModel):
    """Winding numbers m for which a returning lightray exists.

    Nonzero integers with |m| * theta0 < pi, empty from theta0 >= pi on.
    Decided exactly when the cone angle is exact; otherwise a relative
    tolerance treats near-threshold windings as inadmissible.
    """
    out = []
    m = 1
    while _winding_ok(model, m):
        out.append(m)
        m += 1
    return [-k for k in reversed(out)] + out


def _winding_ok(model, m_abs):
    if model.theta0_exact is not None:
        return model.theta0_exact.multiple_below(Fraction(1), m_abs)
    return m_abs * model.theta0 < math.pi * (1.0 - 1e-12)


def _require_admissible(model, m):
    if not isinstance(m, int) or m == 0 or not _winding_ok(model, abs(m)):
        raise InadmissibleWinding(
            f"winding {m} has no returning ray for cone angle {model.theta0!r}"
        )


def return_time(model: ParticleModel, obs: ObserverLine, t, m) -> float:
    """Eigentime between emission and reception of the m-th returning ray.

    The ray leaves the observer at eigentime ``t`` and returns at
    ``t + dt`` with ``dt`` the returned value; a negative value means
    the ray comes back before it left (a paradoxical ray).  The value
    is the future-directed root of the lightlike-connection condition
    between the lifted emission event and the reception event, which
    :func:`null_interval_residual` checks independently.
    """
    _require_admissible(model, m)
    th = model.theta0
    sg = model.sigma
    d = obs.distance
    sh, ch = math.sinh(obs.rapidity), math.cosh(obs.rapidity)
    half = 0.5 * m * th
    s_half, c_half = math.sin(half), math.cos(half)
    t_m = 2.0 * s_half * (t * sh * s_half + d * c_half)
    s_m = 2.0 * s_half * (t * sh * c_half - d * s_half)
    inner = m * sg * sh + ch * t_m
    return m * sg * ch + sh * t_m + math.sqrt(inner * inner + s_m * s_m)


def return_time_static(model: ParticleModel, d, m) -> float:
    """Return time for an observer at rest: m*sigma + 2 d |sin(m theta0/2)|."""
    _require_admissible(model, m)
    return m * model.sigma + 2.0 * d * abs(math.sin(0.5 * m * model.theta0))


def emission_event(model: ParticleModel, obs: ObserverLine, t, m):
    """Developed emission event of the ray leaving at eigentime t."""
    return develop(model, m).apply_cartesian(obs.position(t))


def null_interval_residual(model: ParticleModel, obs: ObserverLine, t, m, dt) -> float:
    """Minkowski interval^2 between the developed emission and reception.

    The ray leaves at eigentime ``t`` (event lifted by the m-th
    developing isometry) and is received at ``t + dt``.  The residual
    vanishes exactly when ``dt`` solves the lightlike-connection
    condition, giving an independent check on :func:`return_time`.
    """
    px, py, pt = obs.position(t + dt)
    ex, ey, et = emission_event(model, obs, t, m)
    dx, dy, dtau = px - ex, py - ey, pt - et
    return dx * dx + dy * dy - dtau * dtau


def return_direction(model: ParticleModel, m) -> float:
    """Signed angle between the particle direction and the returning ray."""
    _require_admissible(model, m)
    sign = 1.0 if m > 0 else -1.0
    return sign * (math.pi - abs(m) * model.theta0) / 2.0


def positivity_threshold(model: ParticleModel, m) -> float:
    """Observer-particle distance above which the m-th return time is positive."""
    _require_admissible(model, m)
    return abs(m * model.sigma / (2.0 * math.sin(0.5 * m * model.theta0)))


def infer_parameters(dt_plus, dt_minus, angle_between_rays):
    """Recover (theta0, sigma, d) from the first two returning rays.

    ``angle_between_rays`` is the full angle between the m = 1 and
    m = -1 return directions as the observer sees them (twice the
    single-ray offset).
    """
    if not 0.0 < angle_between_rays < math.pi:
        raise DegenerateGeometry(
            "angle between returning rays must lie strictly between 0 and pi"
        )
    if dt_plus + dt_minus <= 0.0:
        raise DegenerateGeometry("return times must sum to a positive distance")
    alpha1 = angle_between_rays / 2.0
    theta0 = math.pi - angle_between_rays
    sigma = (dt_plus - dt_minus) / 2.0
    d = (dt_plus + dt_minus) / (4.0 * math.cos(alpha1))
    return theta0, sigma, d


# -- the analytic single-cone plane ------------------------------------------------


class SingleConePlane:
    """The plane with one cone point: the analytic model geometry.

    Stands in for a triangulated surface where the relevant queries are
    closed-form; its injectivity radius at the cone is unbounded since
    no other singularity and no geodesic loop exists.
    """

    def __init__(self, theta0):
        theta0 = angle_value(theta0)
        if theta0 <= 0:
            raise AngleOutOfRange("cone angle must be positive")
        self.theta0 = theta0

    def injectivity_radius_at_cone(self) -> float:
        return math.inf

    def kgon_perimeter(self, radius, k) -> float:
        """Perimeter of the inscribed k-gon at the given radius."""
        if radius <= 0:
            raise NonpositiveRadius("k-gon radius must be positive")
        if k < 2:
            raise DegenerateGeometry("k-gon needs at least 2 corners")
        return 2.0 * k * radius * math.sin(self.theta0 / (2.0 * k))

    def kgon_loop_ratio(self, sigma, radius, k) -> float:
        """|period| / length for the inscribed k-gon around a spin-sigma cone."""
        return abs(sigma) / self.kgon_perimeter(radius, k)

"""Stationary flat spacetimes over cone surfaces.

A stationary spacetime is a cone surface plus a closed 1-form: the
metric is the static product metric minus the square of (omega + dt).
It is never materialised as a matrix field; everything observable comes
through geodesic lifts and signal timing.  A surface geodesic of
arclength s lifts to the spacetime path (c(s), t0 + lam*s - int(omega)),
timelike for |lam| > 1, lightlike for |lam| = 1.  A light signal
relayed between vertical observers therefore advances the time
coordinate by (length - omega period) on every leg, and a closed signal
is paradoxical when the total is negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import (
    DegenerateGeometry,
    DisconnectedLegs,
    NotClosed,
    PathThroughVertex,
)
from .geodesics import trace, DirectionState, TracedGeodesic
from .one_form import EdgeCochain, LoopRatioReport, integrate, loop_ratio_report
from .surface import ConeSurface, dist, normalize, rotate, sub
from . import unfolding

PARADOX_FACTOR = math.pi / 2.0  # paradox radius = this times the CTC radius


class StationarySpacetime:
    """A cone surface with a closed 1-form, read as a flat spacetime."""

    def __init__(self, surface: ConeSurface, omega: EdgeCochain):
        if omega.surface is not surface:
            raise DegenerateGeometry("cochain lives on a different surface")
        self.surface = surface
        self.omega = omega

    def ctc_radii(self) -> dict:
        """Per-cone (signed CTC radius, paradox-exclusion radius)."""
        out = {}
        for vc in self.surface.cone_points:
            r = self.omega.residue(vc.index) / vc.angle
            out[vc.label] = (r, PARADOX_FACTOR * abs(r))
        return out

    def is_static(self) -> bool:
        return self.omega.is_zero()


@dataclass
class LiftedPath:
    """A surface geodesic lifted to the spacetime."""

    geodesic: TracedGeodesic
    lam: float
    t0: float
    times: list  # time coordinate after each segment boundary

    @property
    def elapsed(self) -> float:
        return self.times[-1] - self.times[0]

    @property
    def causal_character(self) -> str:
        a = abs(self.lam)
        if abs(a - 1.0) <= 1e-12:
            return "lightlike"
        return "timelike" if a > 1.0 else "spacelike"


def lift_geodesic(
    st: StationarySpacetime, c: TracedGeodesic, lam: float, t0: float = 0.0
) -> LiftedPath:
    """Lift a traced surface geodesic to a spacetime geodesic.

    The time profile is t0 + lam * arclength - integral of omega along
    the way; the discrete omega integral jumps at edge crossings.
    """
    if c.through_vertices:
        raise PathThroughVertex("lift undefined across triangulation vertices")
    times = [t0]
    t = t0
    ci = 0
    for i, seg in enumerate(c.segments):
        t = t + lam * seg.length
        while ci < len(c.crossings) and c.crossing_segments[ci] <= i + 1:
            t -= st.omega.jump(c.crossings[ci])
            ci += 1
        times.append(t)
    return LiftedPath(c, lam, t0, times)


@dataclass
class LightSignal:
    """A chain of future-null legs relayed between vertical observers."""

    waypoints: list  # (triangle, point) chart positions
    legs: list  # TracedGeodesic per leg
    times: list  # time coordinate at each waypoint, times[0] = 0
    leg_lengths: list
    leg_periods: list  # omega integral per leg
    closed: bool

    @property
    def elapsed(self) -> float:
        return self.times[-1] - self.times[0]


def chart_points_close(surface, a, b, tol) -> bool:
    """Whether two chart points describe the same surface point."""
    (t1, p1), (t2, p2) = a, b
    if t1 == t2:
        return dist(p1, p2) <= tol
    for e in range(3):
        if surface.gluings[(t1, e)][0] == t2:
            iso = surface.gluing_isometry(t1, e)
            if dist(iso.apply(p1), p2) <= tol:
                return True
    return False


def signal_time(st: StationarySpacetime, waypoints, legs) -> LightSignal:
    """Time a relayed light signal along caller-supplied geodesic legs.

    Leg j must run from waypoint j to waypoint j+1 (each leg is a traced
    homotopy class; which way a signal routes around a particle is the
    caller's choice, never picked silently).  Each leg advances the time
    coordinate by its length minus its omega period.
    """
    if len(legs) != len(waypoints) - 1:
        raise DisconnectedLegs("need exactly one leg between consecutive waypoints")
    surface = st.surface
    tol = 1e4 * surface.eps_len
    times = [0.0]
    lengths = []
    periods = []
    for j, leg in enumerate(legs):
        start = (leg.start.tri, leg.start.point)
        end = (leg.end.tri, leg.end.point)
        if not chart_points_close(surface, start, tuple(waypoints[j]), tol):
            raise DisconnectedLegs(f"leg {j} does not start at waypoint {j}")
        if not chart_points_close(surface, end, tuple(waypoints[j + 1]), tol):
            raise DisconnectedLegs(f"leg {j} does not end at waypoint {j + 1}")
        period = integrate(st.omega, leg)
        lengths.append(leg.length)
        periods.append(period)
        times.append(times[-1] + leg.length - period)
    closed = len(waypoints) >= 2 and chart_points_close(
        surface, tuple(waypoints[0]), tuple(waypoints[-1]), tol
    )
    return LightSignal(
        waypoints=list(waypoints),
        legs=list(legs),
        times=times,
        leg_lengths=lengths,
        leg_periods=periods,
        closed=closed,
    )


def is_paradoxical(sig: LightSignal) -> bool:
    """Whether a closed signal returns before it was emitted."""
    if not sig.legs:
        raise NotClosed("signal has no legs")
    if not sig.closed:
        raise NotClosed("signal endpoints differ; paradox undefined")
    return sig.elapsed < 0.0


def paradox_guard(st: StationarySpacetime, waypoints, budget=None) -> bool:
    """Sufficient condition excluding paradoxes through these waypoints.

    True when every waypoint keeps a distance strictly greater than the
    paradox-exclusion radius from every cone point.  Closed signals
    relayed through guarded waypoints always have positive elapsed time,
    no matter how deep the legs dip toward the particles; the guard is
    not necessary, only sufficient.
    """
    surface = st.surface
    radii = {
        surface.vertex(label).index: rc for label, (_, rc) in st.ctc_radii().items()
    }
    eps = surface.eps_len
    for (tri, point) in waypoints:
        dists = unfolding.distances_to_cones_from_point(
            surface, tri, tuple(point), budget=budget
        )
        for cone_idx, rc in radii.items():
            if dists[cone_idx] <= rc + eps:
                return False
    return True


def leg_ctc_contacts(st: StationarySpacetime, sig: LightSignal, samples=16) -> list:
    """Classify each leg's contact with the CTC circles.

    Returns one of ``none`` / ``touches`` / ``enters`` per leg, from
    sampled distance bounds anchored at triangle vertices.  Whether a
    tangentially touching leg is admissible is left to the caller; this
    merely reports the contact instead of deciding.
    """
    surface = st.surface
    spinning = {
        surface.vertex(label).index: abs(r)
        for label, (r, _) in st.ctc_radii().items()
        if r != 0.0
    }
    if not spinning:
        return ["none"] * len(sig.legs)
    dmaps = {}
    for i in spinning:
        # distance map must reach every vertex class for the anchor bounds
        cutoff = surface.skeleton_eccentricity(i) * (1 + 1e-12) + surface.eps_len
        dmaps[i] = unfolding.distance_map_from_class(surface, i, cutoff)
    tol = 1e-7 * surface.longest_edge
    out = []
    for leg in sig.legs:
        verdict = "none"
        for cone, radius in spinning.items():
            lo, hi = math.inf, math.inf
            dmap = dmaps[cone]
            for seg in leg.segments:
                pts = surface.triangles[seg.tri].points
                for k in range(samples + 1):
                    f = k / samples
                    x = (
                        seg.entry[0] + f * (seg.exit[0] - seg.entry[0]),
                        seg.entry[1] + f * (seg.exit[1] - seg.entry[1]),
                    )
                    lb_x, ub_x = 0.0, math.inf
                    for s in range(3):
                        via = dmap.get(surface.corner_class(seg.tri, s))
                        if via is None:
                            continue
                        gap = dist(x, pts[s])
                        lb_x = max(lb_x, via - gap)
                        ub_x = min(ub_x, via + gap)
                    lo = min(lo, lb_x)
                    hi = min(hi, ub_x)
            if hi < radius - tol:
                verdict = "enters"
                break
            if lo <= radius + tol:
                verdict = "touches"
        out.append(verdict)
    return out


# -- global hyperbolicity checker ---------------------------------------------------


@dataclass
class ConeVerdict:
    label: str
    ctc_radius: float
    injectivity_radius: float
    embedded: bool


@dataclass
class PairVerdict:
    label_a: str
    label_b: str
    radius_sum: float
    distance: float
    ok: bool


@dataclass
class GHReport:
    """Verdicts for the three global-hyperbolicity conditions.

    Condition 1: each CTC disk is embedded.  Condition 2: CTC disks are
    pairwise disjoint (radius sums strictly below distances).  Condition
    3: every loop outside the disks has |period| strictly below its
    length, certified here only up to a cutoff by sampling, so a clean
    pass reads "holds-up-to-cutoff" unless the form vanishes.
    """

    cones: list
    pairs: list
    loop_report: object  # LoopRatioReport or None (when skipped)
    loop_cutoff: float
    verdict: str  # "holds" | "holds-up-to-cutoff" | "fails"
    failed_condition: int | None = None
    witness: str | None = None


def gh_check(st: StationarySpacetime, loop_cutoff: float, budget=None) -> GHReport:
    """Run the three-part global-hyperbolicity criterion."""
    if loop_cutoff <= 0:
        raise DegenerateGeometry("loop cutoff must be positive")
    surface = st.surface
    eps = surface.eps_len
    radii = st.ctc_radii()
    cones = []
    failed = None
    witness = None
    for vc in surface.cone_points:
        r = abs(radii[vc.label][0])
        inj = surface.injectivity_radius_at_cone(vc.index, budget=budget)
        embedded = r == 0.0 or r < inj - eps
        cones.append(ConeVerdict(vc.label, r, inj, embedded))
        if not embedded and failed is None:
            failed = 1
            witness = f"CTC disk at {vc.label}: radius {r!r} vs injectivity {inj!r}"
    pairs = []
    cone_list = list(surface.cone_points)
    for i, va in enumerate(cone_list):
        for vb in cone_list[i + 1 :]:
            ra, rb = abs(radii[va.label][0]), abs(radii[vb.label][0])
            d = surface.saddle_distance(va.index, vb.index, budget=budget)
            ok = ra + rb < d - eps
            pairs.append(PairVerdict(va.label, vb.label, ra + rb, d, ok))
            if not ok and failed is None:
                failed = 2
                witness = (
                    f"disks at {va.label}, {vb.label}: radius sum {ra + rb!r} "
                    f"vs distance {d!r}"
                )
    loop_report = None
    if failed is None:
        excluded = {label: abs(rr[0]) for label, rr in radii.items()}
        loop_report = loop_ratio_report(
            surface, st.omega, excluded, loop_cutoff, budget=budget
        )
        if not loop_report.holds:
            failed = 3
            w = loop_report.witness
            witness = (
                f"loop of length {w.length!r} with period "
                f"{loop_report.witness_integral!r}"
                if w is not None
                else "worst sampled ratio at or above one"
            )
    if failed is not None:
        verdict = "fails"
    elif loop_report is not None and loop_report.proven:
        verdict = "holds"
    else:
        verdict = "holds-up-to-cutoff"
    return GHReport(
        cones=cones,
        pairs=pairs,
        loop_report=loop_report,
        loop_cutoff=loop_cutoff,
        verdict=verdict,
        failed_condition=failed,
        witness=witness,
    )


# -- polygon signals around a cone point ---------------------------------------------


def _star_frame(surface, vc):
    """Cumulative angles and chart data of the star corners around a vertex."""
    frames = []
    acc = 0.0
    for (t, s) in vc.corners:
        tri = surface.triangles[t]
        first = normalize(sub(tri.points[(s + 1) % 3], tri.points[s]))
        frames.append((acc, t, s, tri.points[s], first))
        acc += tri.angles[s]
    return frames, acc


def point_at_cone_polar(surface, cone_key, angle, radius):
    """Chart position of the point at given star angle and radius from a cone."""
    vc = surface.vertex(cone_key)
    frames, total = _star_frame(surface, vc)
    phi = angle % total
    tri = slot = vpos = first = None
    offset = 0.0
    for (acc, t, s, v, f) in frames:
        tri, slot, vpos, first, offset = t, s, v, f, acc
        if phi < acc + surface.triangles[t].angles[s]:
            break
    d = rotate(first, math.cos(phi - offset), math.sin(phi - offset))
    p = (vpos[0] + radius * d[0], vpos[1] + radius * d[1])
    if not surface.triangles[tri].contains(p, -surface.eps_len):
        raise DegenerateGeometry(
            "radius reaches beyond the star triangle; choose a finer star or smaller radius"
        )
    return tri, p


def cone_polygon_signal(
    st: StationarySpacetime,
    cone_key,
    radius: float,
    k: int,
    start_angle: float = 0.0,
    orientation: int = 1,
):
    """Closed inscribed k-gon signal around a cone point.

    Returns (waypoints, legs): k chart waypoints at the given radius,
    connected by traced geodesic chords, each subtending the cone angle
    over k.  ``orientation`` +1 circulates counterclockwise.
    """
    if k < 2:
        raise DegenerateGeometry("polygon needs at least 2 corners")
    if radius <= 0:
        raise DegenerateGeometry("polygon radius must be positive")
    surface = st.surface
    vc = surface.vertex(cone_key)
    frames, theta = _star_frame(surface, vc)
    step = orientation * theta / k
    waypoints = []
    legs = []
    for i in range(k):
        phi = start_angle + i * step
        tri, p = point_at_cone_polar(surface, cone_key, phi, radius)
        waypoints.append((tri, p))
    waypoints.append(waypoints[0])
    chord = 2.0 * radius * math.sin(abs(step) / 2.0)
    for i in range(k):
        phi = start_angle + i * step
        # develop the chord in the plane of the leg's start corner
        frames_phi = phi % theta
        for (acc, t, s, v, f) in frames:
            if frames_phi < acc + surface.triangles[t].angles[s]:
                offset, tri, slot, vpos, first = acc, t, s, v, f
                break
        a0 = frames_phi - offset
        local_start = rotate(first, math.cos(a0), math.sin(a0))
        w0 = (vpos[0] + radius * local_start[0], vpos[1] + radius * local_start[1])
        a1 = a0 + step
        local_end = rotate(first, math.cos(a1), math.sin(a1))
        w1 = (vpos[0] + radius * local_end[0], vpos[1] + radius * local_end[1])
        direction = normalize(sub(w1, w0))
        leg = trace(
            surface, DirectionState(tri, w0, direction), chord, detect_closure=False
        )
        if leg.termination != "length-budget":
            raise DegenerateGeometry(
                f"polygon leg {i} hit {leg.termination} before closing"
            )
        legs.append(leg)
    return waypoints, legs

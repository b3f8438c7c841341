"""Geodesic tracing on cone surfaces.

A geodesic is straight inside every triangle chart and continues across
glued edges by the gluing isometry.  Regular vertices (total angle
2*pi) are passed through exactly straight; cone points terminate the
trace, since the continuation of a geodesic through a singularity is
not unique.  A trace that merely passes within the length tolerance of
a cone point is also terminated there: such near-misses are numerically
undecidable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidStart
from .surface import (
    TWO_PI,
    ConeSurface,
    ccw_angle,
    cross,
    dist,
    dot,
    norm,
    normalize,
    rotate,
    sub,
)

TERM_LENGTH = "length-budget"
TERM_CONE = "cone-point-hit"
TERM_CLOSURE = "loop-closure"


@dataclass(frozen=True)
class DirectionState:
    """A point of a chart together with a unit direction."""

    tri: int
    point: tuple
    direction: tuple

    def reversed(self):
        return DirectionState(
            self.tri, self.point, (-self.direction[0], -self.direction[1])
        )


@dataclass(frozen=True)
class Segment:
    tri: int
    entry: tuple
    exit: tuple

    @property
    def length(self):
        return dist(self.entry, self.exit)


@dataclass
class TracedGeodesic:
    """A chart-by-chart polyline realising a geodesic."""

    segments: list
    crossings: list  # directed edge slots (t, e), crossed from t outward
    length: float
    termination: str
    start: DirectionState
    end: DirectionState
    crossing_segments: list = field(default_factory=list)  # crossing i happens
    # after segments[crossing_segments[i] - 1], i.e. before that segment index
    through_vertices: list = field(default_factory=list)  # regular classes passed
    cone_hit: int | None = None  # vertex class index when termination is cone
    winding: dict = field(default_factory=dict)

    def crossings_before_segment(self, seg_index):
        return [
            c
            for c, off in zip(self.crossings, self.crossing_segments)
            if off <= seg_index
        ]

    def reversed_states(self):
        return self.end.reversed(), self.start.reversed()


def _exit_candidates(tri, p, d, skip_edge):
    """Exit events (s, u, edge) for the ray p + s d leaving the triangle."""
    out = []
    for e in range(3):
        if e == skip_edge:
            continue
        a, b = tri.edge(e)
        ab = sub(b, a)
        denom = cross(d, ab)
        if denom == 0.0:
            continue
        ap = sub(a, p)
        s = cross(ap, ab) / denom
        u = cross(ap, d) / denom
        out.append((s, u, e))
    return out


def continue_through_vertex(surface: ConeSurface, tri: int, slot: int, dir_in):
    """Continue a geodesic straight through a regular vertex.

    ``dir_in`` is the unit travel direction pointing at the vertex,
    arriving through triangle ``tri``.  Returns the outgoing
    DirectionState (based at the vertex) plus the CCW list of edge slots
    crossed while pivoting around the vertex.
    """
    u0 = (-dir_in[0], -dir_in[1])
    t, s = tri, slot
    tri_obj = surface.triangles[t]
    a_ray = sub(tri_obj.points[(s + 1) % 3], tri_obj.points[s])
    gamma = tri_obj.angles[s]
    phi0 = ccw_angle(normalize(a_ray), u0)
    if phi0 > gamma:
        # u0 lies inside the corner up to roundoff; clamp to the nearer edge
        phi0 = gamma if phi0 - gamma < TWO_PI - phi0 else 0.0
    remaining = math.pi - (gamma - phi0)
    crossings = []
    guard = 0
    while True:
        crossings.append((t, (s + 2) % 3))
        t, s = surface.gluings[(t, (s + 2) % 3)]
        tri_obj = surface.triangles[t]
        gamma = tri_obj.angles[s]
        if remaining <= gamma + 1e-15:
            a_ray = normalize(sub(tri_obj.points[(s + 1) % 3], tri_obj.points[s]))
            out_dir = rotate(a_ray, math.cos(remaining), math.sin(remaining))
            state = DirectionState(t, tri_obj.points[s], out_dir)
            return state, crossings
        remaining -= gamma
        guard += 1
        if guard > 4 * len(surface.triangles) + 8:
            raise InvalidStart("vertex continuation did not terminate; cone vertex?")


def trace(
    surface: ConeSurface,
    start: DirectionState,
    max_length: float,
    detect_closure: bool = True,
) -> TracedGeodesic:
    """Trace a geodesic of arclength at most ``max_length``.

    Terminates early when the ray reaches (or passes within the length
    tolerance of) a cone point, or when it closes up onto its start
    state.
    """
    if max_length <= 0:
        raise InvalidStart("max_length must be positive")
    d0 = norm(start.direction)
    if not math.isfinite(d0) or d0 == 0.0:
        raise InvalidStart("direction must be a nonzero vector")
    if abs(d0 - 1.0) > 1e-6:
        start = DirectionState(start.tri, start.point, normalize(start.direction))
    else:
        start = DirectionState(
            start.tri, start.point, (start.direction[0] / d0, start.direction[1] / d0)
        )
    if not (0 <= start.tri < len(surface.triangles)):
        raise InvalidStart(f"no triangle {start.tri}")
    if not surface.triangles[start.tri].contains(start.point, 10.0 * surface.eps_len):
        raise InvalidStart("start point does not lie in the start triangle")

    eps = surface.eps_len
    snap = 1e-12 * surface.longest_edge
    segments = []
    crossings = []
    crossing_segments = []
    through = []
    winding = {}
    consumed = 0.0
    tri_i = start.tri
    p = start.point
    d = start.direction
    entry_edge = None
    termination = TERM_LENGTH
    cone_hit = None
    end_state = None
    guard_steps = 0

    while True:
        guard_steps += 1
        if guard_steps > 10_000_000:
            raise InvalidStart("tracer exceeded step guard; degenerate input?")
        tri = surface.triangles[tri_i]
        remaining = max_length - consumed
        cands = [c for c in _exit_candidates(tri, p, d, entry_edge) if c[0] > snap]
        cands = [c for c in cands if -1e-9 <= c[1] <= 1.0 + 1e-9]
        if not cands:
            # start on an edge pointing outward, or numeric failure
            raise InvalidStart("ray does not cross the triangle interior")
        s_exit, u_exit, e_exit = min(cands)
        seg_end = min(s_exit, remaining)

        # events along this chart segment, ordered by (parameter, priority)
        events = [(remaining, 2, "budget", None)]
        for slot in range(3):
            v = tri.points[slot]
            cls = surface.corner_class(tri_i, slot)
            if not surface.is_cone_class(cls):
                continue
            vp = sub(v, p)
            if consumed == 0.0 and norm(vp) <= eps:
                # radial start at this vertex: not a hit of itself
                continue
            tf = dot(vp, d)
            perp = abs(cross(d, vp))
            if perp <= eps and -eps <= tf <= seg_end + eps:
                events.append((max(tf, 0.0), 1, "cone", cls))
        if detect_closure and tri_i == start.tri:
            vp = sub(start.point, p)
            tf = dot(vp, d)
            perp = abs(cross(d, vp))
            if (
                perp <= eps
                and -eps <= tf <= seg_end + eps
                and dot(d, start.direction) > 1.0 - 1e-9
                and consumed + tf > eps
            ):
                events.append((max(tf, 0.0), 0, "closure", None))
        events.sort(key=lambda ev: (ev[0], ev[1]))
        first = events[0]
        if first[0] <= seg_end + eps and first[2] != "budget":
            param, _, kind, payload = first
            q = (p[0] + param * d[0], p[1] + param * d[1])
            segments.append(Segment(tri_i, p, q))
            consumed += param
            end_state = DirectionState(tri_i, q, d)
            termination = TERM_CLOSURE if kind == "closure" else TERM_CONE
            cone_hit = payload
            break
        if remaining <= s_exit:
            q = (p[0] + remaining * d[0], p[1] + remaining * d[1])
            segments.append(Segment(tri_i, p, q))
            consumed += remaining
            end_state = DirectionState(tri_i, q, d)
            termination = TERM_LENGTH
            break

        q = (p[0] + s_exit * d[0], p[1] + s_exit * d[1])
        # crossing exactly at (or within snap of) a vertex
        vertex_slot = None
        for slot in range(3):
            if dist(q, tri.points[slot]) <= max(snap, 1e-12):
                vertex_slot = slot
                break
        if vertex_slot is not None:
            cls = surface.corner_class(tri_i, vertex_slot)
            v = tri.points[vertex_slot]
            segments.append(Segment(tri_i, p, v))
            consumed += dist(p, v)
            if surface.is_cone_class(cls):
                end_state = DirectionState(tri_i, v, d)
                termination = TERM_CONE
                cone_hit = cls
                break
            through.append(cls)
            state, star_crossings = continue_through_vertex(
                surface, tri_i, vertex_slot, d
            )
            crossings.extend(star_crossings)
            crossing_segments.extend([len(segments)] * len(star_crossings))
            tri_i, p, d = state.tri, state.point, state.direction
            entry_edge = None
            continue

        segments.append(Segment(tri_i, p, q))
        consumed += s_exit
        iso = surface.gluing_isometry(tri_i, e_exit)
        crossings.append((tri_i, e_exit))
        crossing_segments.append(len(segments))
        t2, e2 = surface.gluings[(tri_i, e_exit)]
        p = iso.apply(q)
        d = normalize(iso.apply_dir(d))
        tri_i = t2
        entry_edge = e2

    total = math.fsum(seg.length for seg in segments)
    return TracedGeodesic(
        segments=segments,
        crossings=crossings,
        length=total,
        termination=termination,
        start=start,
        end=end_state,
        crossing_segments=crossing_segments,
        through_vertices=through,
        cone_hit=cone_hit,
        winding=winding,
    )


@dataclass
class GeodesicLoop:
    """A geodesic loop based at a point, straight except possibly there."""

    geodesic: TracedGeodesic
    base: DirectionState
    word: tuple  # canonical edge-crossing word (homotopy data)
    length: float
    corner_angle: float  # signed turn at the base point, ~0 for smooth loops
    winding: dict  # cone class -> winding number, when determinable

    def __repr__(self):
        return f"<GeodesicLoop length={self.length:.6g} word={self.word}>"


def reversed_word(surface, word):
    """The crossing word of the reversed path."""
    return tuple(surface.gluings[slot] for slot in reversed(word))


def loop_canonical(surface, word):
    """Orientation-free canonical form of a loop's crossing word."""
    fwd = tuple(word)
    if any(len(item) != 2 for item in fwd):
        return fwd  # edge-marker words are canonical by construction
    rev = reversed_word(surface, fwd)
    return min(fwd, rev)

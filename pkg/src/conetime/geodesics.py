"""Geodesic queries: tracing, single-cone connections, loop enumeration.

The single-cone plane of total angle theta is the model geometry near a
cone point: geodesics between two points that advance by a developed
angle ``dphi`` exist exactly when ``|dphi| < pi`` and then have the
planar chord length of the unrolled wedge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AngleOutOfRange, InvalidStart, NonpositiveRadius
from .surface import ConeSurface, ccw_angle, cross, dist, dot, norm, normalize, sub
from .tracing import (
    DirectionState,
    GeodesicLoop,
    TracedGeodesic,
    loop_canonical,
    trace,
)
from . import unfolding

__all__ = [
    "trace",
    "DirectionState",
    "TracedGeodesic",
    "GeodesicLoop",
    "chord_in_disk",
    "single_cone_connection",
    "SingleConeConnection",
    "loops_at",
]


def chord_in_disk(r_c, alpha):
    """Length of the chord subtending angle alpha in a disk of radius r_c."""
    if r_c <= 0:
        raise NonpositiveRadius("disk radius must be positive")
    if not 0.0 < alpha < math.pi:
        raise AngleOutOfRange(
            "chord angle must lie strictly between 0 and pi; beyond that the "
            "minimising arc in the branched cover is not a single chord"
        )
    return 2.0 * r_c * math.sin(alpha / 2.0)


@dataclass(frozen=True)
class SingleConeConnection:
    exists: bool
    length: float | None
    developed_angle: float


def single_cone_connection(theta0, a, b, m) -> SingleConeConnection:
    """Geodesic between two points of the single-cone plane.

    Points are polar pairs ``(r, phi)`` around the cone; ``m`` counts
    extra windings, so the developed angular advance is
    ``(phi_b - phi_a) + m * theta0``.  The geodesic exists iff that
    advance is strictly inside (-pi, pi); its length is then the planar
    chord of the unrolled wedge.
    """
    if theta0 <= 0:
        raise AngleOutOfRange("cone angle must be positive")
    r_a, phi_a = a
    r_b, phi_b = b
    if r_a <= 0 or r_b <= 0:
        raise NonpositiveRadius("polar radii must be positive")
    dphi = (phi_b - phi_a) + m * theta0
    if abs(dphi) >= math.pi:
        return SingleConeConnection(False, None, dphi)
    length = math.sqrt(r_a * r_a + r_b * r_b - 2.0 * r_a * r_b * math.cos(dphi))
    return SingleConeConnection(True, length, dphi)


# -- loop enumeration ---------------------------------------------------------


def loops_at(surface: ConeSurface, base, max_length, budget=None):
    """All geodesic loops based at ``base`` of length up to ``max_length``.

    ``base`` is either a vertex-class key (label, index or VertexClass)
    or an interior point ``(triangle_index, (x, y))``.  Loops are
    straight everywhere except possibly at the base point, avoid cone
    points in their interior, and are reported once up to reversal,
    sorted by length with ties broken by crossing word.
    """
    if max_length <= 0:
        raise InvalidStart("max_length must be positive")
    if isinstance(base, tuple) and len(base) == 2 and not isinstance(base[0], str):
        tri, point = base
        hits = unfolding.loop_candidates_at_point(
            surface, tri, tuple(point), max_length, budget
        )
        base_vertex = None
    else:
        vc = surface.vertex(base)
        hits = unfolding.loop_candidates_at_vertex(
            surface, vc.index, max_length, budget
        )
        base_vertex = vc
    chosen = {}
    for h in hits:
        key = loop_canonical(surface, h.word)
        old = chosen.get(key)
        if old is None or h.length < old.length - surface.eps_len:
            chosen[key] = h
    loops = []
    for key, h in chosen.items():
        g = _reconstruct(surface, h)
        loops.append(
            GeodesicLoop(
                geodesic=g,
                base=h.state,
                word=key,
                length=g.length,
                corner_angle=_corner_angle(surface, base_vertex, h.state, g),
                winding=loop_winding(surface, g),
            )
        )
    # words may mix plain crossings with edge markers, so order by text
    loops.sort(key=lambda lp: (lp.length, str(lp.word)))
    return loops


def _reconstruct(surface, hit) -> TracedGeodesic:
    g = trace(surface, hit.state, hit.length, detect_closure=False)
    if abs(g.length - hit.length) > 100 * surface.eps_len:
        raise InvalidStart(
            f"loop reconstruction drifted: {g.length!r} vs {hit.length!r}"
        )
    return g


def _nearest_slot(surface, tri, point):
    pts = surface.triangles[tri].points
    slot = min(range(3), key=lambda s: dist(pts[s], point))
    return slot


def _corner_angle(surface, base_vertex, start_state, g):
    """Signed deviation from straightness at the base, CCW convention."""
    if base_vertex is None:
        e, s = g.end.direction, g.start.direction
        return math.atan2(cross(e, s), dot(e, s))
    theta = base_vertex.angle
    s_slot = _nearest_slot(surface, start_state.tri, start_state.point)
    e_slot = _nearest_slot(surface, g.end.tri, g.end.point)
    phi_out = _star_angle(surface, base_vertex, start_state.tri, s_slot, g.start.direction)
    rev = (-g.end.direction[0], -g.end.direction[1])
    phi_in = _star_angle(surface, base_vertex, g.end.tri, e_slot, rev)
    a1 = (phi_in - phi_out) % theta
    return math.pi - a1


def _star_angle(surface, vc, tri, slot, direction):
    """Cumulative angle of a chart direction in the star around a vertex."""
    acc = 0.0
    for (t, s) in vc.corners:
        if t == tri and s == slot:
            pts = surface.triangles[t].points
            first = normalize(sub(pts[(s + 1) % 3], pts[s]))
            return acc + ccw_angle(first, direction)
        acc += surface.triangles[t].angles[s]
    raise InvalidStart("corner does not belong to the vertex class")


def loop_winding(surface, g: TracedGeodesic) -> dict:
    """Winding numbers of a loop around cone points, when determinable.

    Winding is computed by developing the loop's chart chain into a
    plane and checking whether a cone class keeps a single consistent
    developed position off the loop; then the subtended angle divided by
    the cone angle is the winding number.  Loops that wander beyond a
    single developed star report nothing.
    """
    if not g.segments:
        return {}
    placements = _segment_placements(surface, g)
    eps = 100 * surface.eps_len
    candidates = {}
    first_tri = g.segments[0].tri
    pl0 = placements[0]
    for s in range(3):
        cls = surface.corner_class(first_tri, s)
        pos = pl0.apply(surface.triangles[first_tri].points[s])
        candidates.setdefault(cls, []).append(pos)
    for cls in list(candidates):
        keep = []
        for pos in candidates[cls]:
            ok = True
            for seg, pl in zip(g.segments, placements):
                slots = [
                    s
                    for s in range(3)
                    if surface.corner_class(seg.tri, s) == cls
                    and dist(pl.apply(surface.triangles[seg.tri].points[s]), pos) <= eps
                ]
                if not slots:
                    ok = False
                    break
            if ok:
                keep.append(pos)
        if keep:
            candidates[cls] = keep
        else:
            del candidates[cls]
    out = {}
    for cls, positions in candidates.items():
        vc = surface.vertex_classes[cls]
        if not vc.is_cone:
            continue
        pos = positions[0]
        total = 0.0
        grazes = False
        for seg, pl in zip(g.segments, placements):
            a = sub(pl.apply(seg.entry), pos)
            b = sub(pl.apply(seg.exit), pos)
            if norm(a) <= eps or norm(b) <= eps:
                grazes = True
                break
            total += math.atan2(cross(a, b), dot(a, b))
        if grazes:
            continue
        w = total / vc.angle
        if abs(w - round(w)) < 1e-6 and round(w) != 0:
            out[cls] = int(round(w))
    return out


def _segment_placements(surface, g):
    """Developing isometries mapping each segment's chart to a fixed plane."""
    from .surface import Isometry

    placements = [Isometry.identity()]
    pl = placements[0]
    crossings = list(zip(g.crossings, g.crossing_segments))
    ci = 0
    for seg_index in range(1, len(g.segments)):
        while ci < len(crossings) and crossings[ci][1] <= seg_index:
            (t, e), _ = crossings[ci]
            t2, e2 = surface.gluings[(t, e)]
            pl = pl.compose(surface.gluing_isometry(t2, e2))
            ci += 1
        placements.append(pl)
    return placements

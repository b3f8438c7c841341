"""Unfolded-chart searches: saddle connections, distances, geodesic loops.

The engine develops chains of triangle charts into a common plane,
keeping for every chain the angular window of directions (seen from the
source) whose geodesics realise it.  Windows only narrow as the chain
deepens, so a best-first expansion over a lower bound of the reachable
distance terminates once the frontier is beyond the cutoff.

A window boundary passing exactly through a regular vertex is the one
direction a corridor cannot represent; those geodesics continue
straight through the vertex and are handed to the tracer as rays.
Directions through cone points terminate there, since geodesics do not
continue through singularities.
"""

from __future__ import annotations

import heapq
import math
import os
from dataclasses import dataclass

from .errors import InvalidStart, SearchBudgetExceeded, UnknownVertex
from .surface import (
    Isometry,
    cross,
    dist,
    norm,
    normalize,
    segment_point_distance,
    sub,
)
from .tracing import DirectionState, continue_through_vertex, trace

DEFAULT_BUDGET = 1_000_000


def search_budget(budget=None):
    """Chart-expansion cap; the CONETIME_BUDGET env var overrides default."""
    if budget is not None:
        return int(budget)
    return int(os.environ.get("CONETIME_BUDGET", DEFAULT_BUDGET))


@dataclass(frozen=True)
class Hit:
    """A geodesic from the search source found by the engine.

    ``cls`` is the vertex class reached, or -1 for a return to the
    source point itself.  ``state`` is the start of the geodesic in the
    source chart, so ``trace(state, length)`` reconstructs it.
    """

    cls: int
    length: float
    word: tuple
    state: DirectionState
    kind: str  # "edge" | "corridor" | "ray"


_WINDOW_EPS = 1e-12


def _ordered(a, b):
    return (a, b) if cross(a, b) > 0 else (b, a)


def _inside(window, d):
    u, w = window
    return (
        cross(u, d) > _WINDOW_EPS * norm(u) * norm(d)
        and cross(d, w) > _WINDOW_EPS * norm(d) * norm(w)
    )


def _intersect(w1, w2):
    u = w2[0] if cross(w1[0], w2[0]) > 0 else w1[0]
    w = w1[1] if cross(w1[1], w2[1]) > 0 else w2[1]
    if cross(u, w) <= _WINDOW_EPS * norm(u) * norm(w):
        return None
    return (u, w)


def _window_segment_lb(a, b, window):
    """Distance from the origin to the window-visible part of segment ab."""
    ab = sub(a, b)
    params = []
    for r in window:
        den = cross(r, ab)
        if abs(den) < 1e-300:
            continue
        params.append(cross(r, a) / den)
    if len(params) < 2:
        lo, hi = 0.0, 1.0
    else:
        lo = min(1.0, max(0.0, min(params)))
        hi = min(1.0, max(0.0, max(params)))
    pa = (a[0] + lo * (b[0] - a[0]), a[1] + lo * (b[1] - a[1]))
    pb = (a[0] + hi * (b[0] - a[0]), a[1] + hi * (b[1] - a[1]))
    return segment_point_distance(pa, pb, (0.0, 0.0))


class _Engine:
    def __init__(self, surface, cutoff, budget, base_tri=None, base_point=None,
                 source_class=None):
        self.surface = surface
        self.cutoff = cutoff
        self.eps = surface.eps_len
        self.budget = search_budget(budget)
        self.expansions = 0
        self.base_tri = base_tri
        self.base_point = base_point
        self.source_class = source_class
        self.vertex_hits = []
        self.self_hits = []
        self.heap = []
        self._counter = 0

    # -- bookkeeping --------------------------------------------------------

    def _spend(self, n=1):
        self.expansions += n
        if self.expansions > self.budget:
            raise SearchBudgetExceeded(
                f"unfolding search exceeded {self.budget} chart expansions"
            )

    def _push(self, placement, tri, entry, window, word, root_state):
        a = placement.apply(self.surface.triangles[tri].points[entry])
        b = placement.apply(self.surface.triangles[tri].points[(entry + 1) % 3])
        lb = _window_segment_lb(a, b, window)
        if lb > self.cutoff + self.eps:
            return
        self._counter += 1
        heapq.heappush(
            self.heap,
            (lb, self._counter, placement, tri, entry, window, word, root_state),
        )

    def _push_across(self, placement, tri, far_edge, window, word, root_state):
        """Push the neighbour across edge slot (tri, far_edge)."""
        t2, e2 = self.surface.gluings[(tri, far_edge)]
        placement2 = placement.compose(self.surface.gluing_isometry(t2, e2))
        self._push(
            placement2, t2, e2, window, word + ((tri, far_edge),), root_state
        )

    # -- roots ---------------------------------------------------------------

    def seed_vertex(self, cls_index):
        vc = self.surface.vertex_classes[cls_index]
        seen_edges = set()
        for (t, s) in vc.corners:
            pts = self.surface.triangles[t].points
            v = pts[s]
            placement = Isometry.translation((-v[0], -v[1]))
            b1 = placement.apply(pts[(s + 1) % 3])
            b2 = placement.apply(pts[(s + 2) % 3])
            root_state = DirectionState(t, v, (1.0, 0.0))
            # the two boundary directions are triangulation edges
            self._edge_hit(t, s, seen_edges, root_state)
            window = (b1, b2)
            self._push_across(placement, t, (s + 1) % 3, window, (), root_state)

    def _edge_hit(self, t, s, seen_edges, root_state):
        """Record the outgoing triangulation edge at corner (t, s)."""
        surface = self.surface
        slot = (t, s)
        partner = surface.gluings[slot]
        key = min(slot, partner)
        if key in seen_edges:
            return
        seen_edges.add(key)
        length = surface.triangles[t].edge_lengths[s]
        if length > self.cutoff + self.eps:
            far_reachable = False
        else:
            far_reachable = True
        far_cls = surface.corner_class(t, (s + 1) % 3)
        pts = surface.triangles[t].points
        direction = normalize(sub(pts[(s + 1) % 3], pts[s]))
        state = DirectionState(t, pts[s], direction)
        word = (("E",) + key,)
        if far_reachable:
            self._record_vertex(far_cls, length, word, state, "edge")
        # continue straight through a regular far endpoint
        if not surface.is_cone_class(far_cls) and length < self.cutoff:
            self._spawn_ray(
                state, length, word, (t, (s + 1) % 3), direction
            )

    def seed_point(self, tri, point):
        surface = self.surface
        if not surface.triangles[tri].contains(point, -self.eps):
            raise InvalidStart("base point must lie strictly inside its triangle")
        placement = Isometry.translation((-point[0], -point[1]))
        pts = surface.triangles[tri].points
        root_state = DirectionState(tri, point, (1.0, 0.0))
        for s in range(3):
            v = placement.apply(pts[s])
            d = norm(v)
            cls = surface.corner_class(tri, s)
            direction = normalize(v)
            state = DirectionState(tri, point, direction)
            if d <= self.cutoff + self.eps:
                self._record_vertex(cls, d, ((tri, "corner", s),), state, "corridor")
            if not surface.is_cone_class(cls) and d < self.cutoff:
                self._spawn_ray(state, d, (), (tri, s), direction)
        for f in range(3):
            window = _ordered(placement.apply(pts[f]), placement.apply(pts[(f + 1) % 3]))
            self._push_across(placement, tri, f, window, (), root_state)

    # -- recording -----------------------------------------------------------

    def _record_vertex(self, cls, length, word, state, kind):
        if cls == self.source_class:
            self.self_hits.append(Hit(cls, length, word, state, kind))
        else:
            self.vertex_hits.append(Hit(cls, length, word, state, kind))

    def _record_self_point(self, length, word, state, kind):
        self.self_hits.append(Hit(-1, length, word, state, kind))

    # -- rays -----------------------------------------------------------------

    def _spawn_ray(self, root_state, base_len, word_prefix, corner, chart_dir_in):
        """Continue a geodesic straight through the regular vertex ``corner``."""
        surface = self.surface
        remaining = self.cutoff + self.eps - base_len
        if remaining <= self.eps:
            return
        out_state, star = continue_through_vertex(
            surface, corner[0], corner[1], chart_dir_in
        )
        try:
            g = trace(surface, out_state, remaining, detect_closure=False)
        except InvalidStart:
            return
        self._spend(max(1, len(g.segments) // 4))
        word = word_prefix + tuple(star)
        # passes over the base point
        if self.base_tri is not None:
            prefix = base_len
            for i, seg in enumerate(g.segments):
                if seg.tri == self.base_tri:
                    hit_at = _segment_pass(seg, self.base_point, self.eps)
                    if hit_at is not None:
                        w = word + tuple(g.crossings_before_segment(i))
                        self._record_self_point(
                            prefix + hit_at, w, root_state, "ray"
                        )
                prefix += seg.length
        if g.termination == "cone-point-hit" and g.cone_hit is not None:
            total = base_len + g.length
            if total <= self.cutoff + self.eps:
                w = word + tuple(g.crossings)
                self._record_vertex(g.cone_hit, total, w, root_state, "ray")

    # -- main loop -------------------------------------------------------------

    def run(self):
        surface = self.surface
        while self.heap:
            lb, _, placement, tri, entry, window, word, root_state = heapq.heappop(
                self.heap
            )
            if lb > self.cutoff + self.eps:
                break
            self._spend()
            pts = surface.triangles[tri].points
            apex_slot = (entry + 2) % 3
            c = placement.apply(pts[apex_slot])
            dc = norm(c)
            if _inside(window, c):
                cls = surface.corner_class(tri, apex_slot)
                direction = (c[0] / dc, c[1] / dc)
                state = DirectionState(
                    root_state.tri, root_state.point, direction
                )
                if dc <= self.cutoff + self.eps:
                    self._record_vertex(cls, dc, word, state, "corridor")
                if not surface.is_cone_class(cls) and dc < self.cutoff:
                    chart_dir = placement.inverse().apply_dir(direction)
                    self._spawn_ray(state, dc, word, (tri, apex_slot), chart_dir)
            if (
                self.base_tri is not None
                and tri == self.base_tri
                and word
            ):
                x = placement.apply(self.base_point)
                dx = norm(x)
                if dx <= self.cutoff + self.eps and _inside(window, x):
                    direction = (x[0] / dx, x[1] / dx)
                    state = DirectionState(
                        root_state.tri, root_state.point, direction
                    )
                    self._record_self_point(dx, word, state, "corridor")
            for far in ((entry + 1) % 3, (entry + 2) % 3):
                p1 = placement.apply(pts[far])
                p2 = placement.apply(pts[(far + 1) % 3])
                wnew = _intersect(window, _ordered(p1, p2))
                if wnew is not None:
                    self._push_across(placement, tri, far, wnew, word, root_state)
        return self


def _segment_pass(seg, point, eps):
    """Arclength along the segment at which it passes ``point``, or None."""
    d = sub(seg.exit, seg.entry)
    length = norm(d)
    if length == 0.0:
        return None
    dn = (d[0] / length, d[1] / length)
    vp = sub(point, seg.entry)
    tf = vp[0] * dn[0] + vp[1] * dn[1]
    if not (-eps <= tf <= length + eps):
        return None
    if abs(cross(dn, vp)) > eps:
        return None
    return min(max(tf, 0.0), length)


# -- public queries -----------------------------------------------------------


def direct_connections(surface, cls_index, cutoff, budget=None):
    """Geodesics from a vertex class to vertex classes, length <= cutoff."""
    eng = _Engine(surface, cutoff, budget, source_class=None)
    eng.seed_vertex(cls_index)
    eng.run()
    return eng.vertex_hits + eng.self_hits


def point_connections(surface, tri, point, cutoff, budget=None):
    """Geodesics from an interior point to vertex classes, length <= cutoff."""
    eng = _Engine(surface, cutoff, budget)
    eng.seed_point(tri, point)
    eng.run()
    return eng.vertex_hits


def loop_candidates_at_vertex(surface, cls_index, max_length, budget=None):
    """Self-returning geodesics based at a vertex class."""
    eng = _Engine(surface, max_length, budget, source_class=cls_index)
    eng.seed_vertex(cls_index)
    eng.run()
    return eng.self_hits


def loop_candidates_at_point(surface, tri, point, max_length, budget=None):
    """Geodesic loops based at an interior point."""
    eng = _Engine(
        surface, max_length, budget, base_tri=tri, base_point=point
    )
    eng.seed_point(tri, point)
    eng.run()
    return eng.self_hits


def _connection_graph(surface, cutoff, budget=None):
    """Adjacency (min direct geodesic length) between vertex classes."""
    cache = getattr(surface, "_unfold_cache", None)
    if cache is None:
        cache = {}
        surface._unfold_cache = cache
    cached = cache.get("graph")
    if cached is not None and cached[0] >= cutoff:
        return cached[1]
    adj = {vc.index: {} for vc in surface.vertex_classes}
    for vc in surface.vertex_classes:
        for hit in direct_connections(surface, vc.index, cutoff, budget):
            if hit.cls < 0 or hit.cls == vc.index:
                continue
            a, b = vc.index, hit.cls
            if hit.length < adj[a].get(b, math.inf):
                adj[a][b] = hit.length
                adj[b][a] = hit.length
    cache["graph"] = (cutoff, adj)
    return adj


def _dijkstra(adj, source):
    best = {source: 0.0}
    heap = [(0.0, source)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > best.get(u, math.inf):
            continue
        for w, length in adj[u].items():
            nd = d + length
            if nd < best.get(w, math.inf):
                best[w] = nd
                heapq.heappush(heap, (nd, w))
    return best


def surface_distance(surface, i, j, budget=None):
    """Metric distance between two vertex classes."""
    upper = surface.skeleton_distance(i, j)
    adj = _connection_graph(surface, upper * (1.0 + 1e-12) + surface.eps_len, budget)
    d = _dijkstra(adj, surface.vertex(i).index).get(surface.vertex(j).index)
    if d is None:
        raise UnknownVertex("no path between vertex classes")
    return d


def distance_map_from_class(surface, cls_index, cutoff, budget=None):
    adj = _connection_graph(surface, cutoff, budget)
    return _dijkstra(adj, cls_index)


def distances_to_cones_from_point(surface, tri, point, budget=None):
    """Metric distance from an interior point to every cone point."""
    pts = surface.triangles[tri].points
    cones = [vc.index for vc in surface.cone_points]
    if not cones:
        return {}
    upper = {}
    for c in cones:
        bound = math.inf
        for s in range(3):
            v_cls = surface.corner_class(tri, s)
            bound = min(
                bound,
                dist(point, pts[s]) + surface.skeleton_distance(v_cls, c),
            )
        upper[c] = bound
    cutoff = max(upper.values()) * (1.0 + 1e-12) + surface.eps_len
    hits = point_connections(surface, tri, point, cutoff, budget)
    adj = _connection_graph(surface, cutoff, budget)
    out = {}
    for c in cones:
        dmap = _dijkstra(adj, c)
        best = math.inf
        for hit in hits:
            via = dmap.get(hit.cls)
            if via is not None:
                best = min(best, hit.length + via)
        out[c] = best
    return out


def injectivity_radius(surface, cls_index, budget=None):
    """Largest embedded-ball radius at a cone point (or any vertex class).

    The bound is the smaller of the distance to the nearest other cone
    point and half the shortest geodesic loop based here that stays in
    the regular part.
    """
    vc = surface.vertex(cls_index)
    cones = [c.index for c in surface.cone_points if c.index != vc.index]
    d_min = math.inf
    if cones:
        diam = max(surface.skeleton_distance(vc.index, c) for c in cones)
        dmap = distance_map_from_class(
            surface, vc.index, diam * (1.0 + 1e-12) + surface.eps_len, budget
        )
        d_min = min(dmap[c] for c in cones)
        loop_cutoff = 2.0 * d_min
    else:
        loop_cutoff = surface.skeleton_loop_bound(vc.index)
    shortest_loop = math.inf
    for _ in range(20):
        hits = loop_candidates_at_vertex(surface, vc.index, loop_cutoff, budget)
        if hits:
            shortest_loop = min(h.length for h in hits)
            break
        if cones:
            break  # nothing shorter than 2*d_min exists; d_min rules
        loop_cutoff *= 2.0
    else:
        raise SearchBudgetExceeded("no geodesic loop found within doubling budget")
    return min(d_min, shortest_loop / 2.0)

"""Closed Euclidean surfaces with cone points, as glued planar triangles.

A surface is a list of positively oriented triangles, each living in its
own planar chart, together with a perfect matching of directed edge
slots.  Gluing edge slot ``(t, e)`` to ``(t2, e2)`` identifies the edge
of ``t`` with the reversed edge of ``t2`` (start to end), which is the
orientation-consistent way to glue two counterclockwise triangles.

All derived structure (vertex classes, star cycles, cone angles, the
Euler characteristic, gluing isometries) is computed eagerly at
construction; instances are immutable afterwards and safe to query from
several threads at once.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from .errors import (
    DegenerateTriangle,
    DisconnectedSurface,
    GaussBonnetViolation,
    MismatchedEdgeLength,
    UnknownVertex,
    UnpairedEdge,
)

TWO_PI = 2.0 * math.pi

Point = tuple  # (x, y)
EdgeSlot = tuple  # (triangle index, edge index 0..2)
Corner = tuple  # (triangle index, vertex slot 0..2)


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def norm(a):
    return math.hypot(a[0], a[1])


def dist(a, b):
    return math.hypot(a[0] - b[0], a[1] - b[1])


def scale(a, f):
    return (a[0] * f, a[1] * f)


def normalize(a):
    n = norm(a)
    return (a[0] / n, a[1] / n)


def rotate(a, cos_t, sin_t):
    return (cos_t * a[0] - sin_t * a[1], sin_t * a[0] + cos_t * a[1])


def ccw_angle(u, v):
    """Angle in [0, 2*pi) swept counterclockwise from direction u to v."""
    a = math.atan2(cross(u, v), dot(u, v))
    return a if a >= 0.0 else a + TWO_PI


def segment_point_distance(a, b, p):
    """Distance from point p to the closed segment [a, b]."""
    ab = sub(b, a)
    denom = dot(ab, ab)
    if denom == 0.0:
        return dist(a, p)
    t = dot(sub(p, a), ab) / denom
    t = min(1.0, max(0.0, t))
    return dist((a[0] + t * ab[0], a[1] + t * ab[1]), p)


@dataclass(frozen=True)
class Isometry:
    """Orientation-preserving planar isometry x -> R x + t."""

    c: float
    s: float
    tx: float
    ty: float

    @staticmethod
    def identity():
        return Isometry(1.0, 0.0, 0.0, 0.0)

    @staticmethod
    def translation(v):
        return Isometry(1.0, 0.0, v[0], v[1])

    @staticmethod
    def mapping_segment(a, b, a2, b2):
        """The unique rotation+translation with a -> a2 and b -> b2."""
        u = sub(b, a)
        v = sub(b2, a2)
        nu = norm(u)
        nv = norm(v)
        c = dot(u, v) / (nu * nv)
        s = cross(u, v) / (nu * nv)
        # renormalise to fight drift
        h = math.hypot(c, s)
        c, s = c / h, s / h
        ra = rotate(a, c, s)
        return Isometry(c, s, a2[0] - ra[0], a2[1] - ra[1])

    def apply(self, p):
        return (
            self.c * p[0] - self.s * p[1] + self.tx,
            self.s * p[0] + self.c * p[1] + self.ty,
        )

    def apply_dir(self, d):
        return (self.c * d[0] - self.s * d[1], self.s * d[0] + self.c * d[1])

    def compose(self, other):
        """self after other: (self*other)(x) = self(other(x))."""
        c = self.c * other.c - self.s * other.s
        s = self.s * other.c + self.c * other.s
        t = self.apply((other.tx, other.ty))
        return Isometry(c, s, t[0], t[1])

    def inverse(self):
        c, s = self.c, -self.s
        tx = -(c * self.tx - s * self.ty)
        ty = -(s * self.tx + c * self.ty)
        return Isometry(c, s, tx, ty)


class Triangle:
    """A positively oriented triangle in its own planar chart.

    Edge slot ``e`` is the directed edge from vertex ``e`` to vertex
    ``(e + 1) % 3``.
    """

    __slots__ = ("points", "edge_lengths", "angles", "area")

    def __init__(self, points):
        pts = tuple((float(p[0]), float(p[1])) for p in points)
        if len(pts) != 3:
            raise DegenerateTriangle("a triangle needs exactly three vertices")
        self.points = pts
        a2 = cross(sub(pts[1], pts[0]), sub(pts[2], pts[0]))
        self.area = 0.5 * a2
        self.edge_lengths = tuple(dist(pts[(i + 1) % 3], pts[i]) for i in range(3))
        self.angles = tuple(
            ccw_angle(
                sub(pts[(i + 1) % 3], pts[i]),
                sub(pts[(i + 2) % 3], pts[i]),
            )
            for i in range(3)
        )

    def edge(self, e):
        return self.points[e], self.points[(e + 1) % 3]

    def contains(self, p, slack):
        pts = self.points
        for i in range(3):
            if cross(sub(pts[(i + 1) % 3], pts[i]), sub(p, pts[i])) < -slack:
                return False
        return True


@dataclass(frozen=True)
class VertexClass:
    """An equivalence class of triangle corners: one point of the surface."""

    index: int
    corners: tuple  # CCW star cycle of (triangle, slot)
    angle: float
    is_cone: bool
    label: str

    def __repr__(self):
        kind = "cone" if self.is_cone else "regular"
        return f"<{self.label}: {kind} vertex, angle {self.angle:.6g}>"


class ConeSurface:
    """A closed oriented Euclidean cone surface built from glued triangles."""

    def __init__(self, triangles, gluings, labels=None):
        self.triangles = [t if isinstance(t, Triangle) else Triangle(t) for t in triangles]
        if not self.triangles:
            raise DegenerateTriangle("surface needs at least one triangle")
        self.gluings = dict(gluings)
        self._validate_triangles()
        self._validate_gluings()
        self._gluing_isometries = {
            slot: self._derive_isometry(slot) for slot in self.gluings
        }
        self._check_connected()
        self._build_vertex_classes(labels or {})
        self._check_gauss_bonnet()
        self._skeleton = self._build_skeleton()

    # -- construction ------------------------------------------------------

    def _validate_triangles(self):
        longest = 0.0
        for t in self.triangles:
            longest = max(longest, max(t.edge_lengths))
        if longest == 0.0:
            raise DegenerateTriangle("all edges have zero length")
        self.eps_len = 1e-9 * longest
        self.eps_angle = 1e-9
        self.eps_gb = 1e-6
        self.longest_edge = longest
        area_floor = 1e-14 * longest * longest
        for i, t in enumerate(self.triangles):
            if t.area <= area_floor:
                kind = "negatively oriented" if t.area < 0 else "collinear"
                raise DegenerateTriangle(f"triangle {i} is {kind}")

    def _validate_gluings(self):
        for slot, partner in list(self.gluings.items()):
            if slot == partner:
                raise UnpairedEdge(f"edge {slot} glued to itself")
            if self.gluings.get(partner) != slot:
                raise UnpairedEdge(f"gluing {slot} <-> {partner} is not an involution")
        for t in range(len(self.triangles)):
            for e in range(3):
                if (t, e) not in self.gluings:
                    raise UnpairedEdge(f"edge ({t}, {e}) has no partner; surface not closed")
        for (t, e), (t2, e2) in self.gluings.items():
            l1 = self.triangles[t].edge_lengths[e]
            l2 = self.triangles[t2].edge_lengths[e2]
            if abs(l1 - l2) > self.eps_len:
                raise MismatchedEdgeLength(
                    f"gluing ({t},{e}) <-> ({t2},{e2}) pairs lengths {l1!r} and {l2!r}"
                )

    def _derive_isometry(self, slot):
        t, e = slot
        t2, e2 = self.gluings[slot]
        a, b = self.triangles[t].edge(e)
        a2, b2 = self.triangles[t2].edge(e2)
        # start of e lands on the end of e2 and vice versa
        return Isometry.mapping_segment(a, b, b2, a2)

    def _check_connected(self):
        seen = {0}
        stack = [0]
        while stack:
            t = stack.pop()
            for e in range(3):
                t2 = self.gluings[(t, e)][0]
                if t2 not in seen:
                    seen.add(t2)
                    stack.append(t2)
        if len(seen) != len(self.triangles):
            raise DisconnectedSurface(
                f"only {len(seen)} of {len(self.triangles)} triangles are connected"
            )

    def _build_vertex_classes(self, labels):
        corner_class = {}
        cycles = []
        for t in range(len(self.triangles)):
            for s in range(3):
                if (t, s) in corner_class:
                    continue
                cycle = []
                cur = (t, s)
                while cur not in corner_class:
                    corner_class[cur] = len(cycles)
                    cycle.append(cur)
                    ct, cs = cur
                    cur = self.gluings[(ct, (cs + 2) % 3)]
                if corner_class[cur] != len(cycles):
                    raise UnpairedEdge("star walk escaped its own cycle")
                cycles.append(tuple(cycle))
        cycles.sort(key=min)
        label_of = {}
        for name, corner in labels.items():
            label_of[tuple(corner)] = name
        classes = []
        for idx, cyc in enumerate(cycles):
            angle = math.fsum(self.triangles[t].angles[s] for (t, s) in cyc)
            is_cone = abs(angle - TWO_PI) > self.eps_angle
            name = None
            for corner in cyc:
                if corner in label_of:
                    name = label_of[corner]
                    break
            if name is None:
                name = f"v{idx}"
            classes.append(VertexClass(idx, cyc, angle, is_cone, name))
        self.vertex_classes = tuple(classes)
        self._corner_class = {
            corner: vc.index for vc in classes for corner in vc.corners
        }
        self._label_index = {vc.label: vc.index for vc in classes}
        if len(self._label_index) != len(classes):
            raise UnknownVertex("duplicate vertex labels")
        self.cone_points = tuple(vc for vc in classes if vc.is_cone)

    def _check_gauss_bonnet(self):
        v = len(self.vertex_classes)
        f = len(self.triangles)
        e = 3 * f // 2
        self.euler_characteristic = v - e + f
        defect = math.fsum(TWO_PI - vc.angle for vc in self.vertex_classes)
        self.gauss_bonnet_residual = abs(TWO_PI * self.euler_characteristic - defect)
        if self.gauss_bonnet_residual > self.eps_gb:
            raise GaussBonnetViolation(
                f"angle defect {defect!r} vs 2*pi*chi "
                f"{TWO_PI * self.euler_characteristic!r}"
            )

    def _build_skeleton(self):
        adj = {vc.index: [] for vc in self.vertex_classes}
        for (t, e) in self.gluings:
            a = self._corner_class[(t, e)]
            b = self._corner_class[(t, (e + 1) % 3)]
            length = self.triangles[t].edge_lengths[e]
            adj[a].append((b, length))
            adj[b].append((a, length))
        return adj

    # -- basic queries -------------------------------------------------------

    @property
    def total_area(self):
        return math.fsum(t.area for t in self.triangles)

    def vertex(self, key) -> VertexClass:
        """Resolve a vertex class from an index, label, or VertexClass."""
        if isinstance(key, VertexClass):
            return key
        if isinstance(key, str):
            if key not in self._label_index:
                raise UnknownVertex(f"no vertex labelled {key!r}")
            return self.vertex_classes[self._label_index[key]]
        if isinstance(key, int) and 0 <= key < len(self.vertex_classes):
            return self.vertex_classes[key]
        raise UnknownVertex(f"no vertex class {key!r}")

    def corner_class(self, t, s) -> int:
        return self._corner_class[(t, s)]

    def cone_angle(self, key) -> float:
        """Total angle around a vertex class (2*pi at regular points)."""
        return self.vertex(key).angle

    def gluing_isometry(self, t, e) -> Isometry:
        """Chart-to-chart isometry across edge slot (t, e)."""
        return self._gluing_isometries[(t, e)]

    def vertex_position(self, corner):
        t, s = corner
        return self.triangles[t].points[s]

    def is_cone_class(self, index) -> bool:
        return self.vertex_classes[index].is_cone

    def skeleton_distance(self, a, b) -> float:
        """Shortest path between vertex classes along triangulation edges."""
        a = self.vertex(a).index
        b = self.vertex(b).index
        best = {a: 0.0}
        heap = [(0.0, a)]
        while heap:
            d, u = heapq.heappop(heap)
            if u == b:
                return d
            if d > best.get(u, math.inf):
                continue
            for w, length in self._skeleton[u]:
                nd = d + length
                if nd < best.get(w, math.inf):
                    best[w] = nd
                    heapq.heappush(heap, (nd, w))
        raise UnknownVertex("vertex classes not connected")

    def skeleton_loop_bound(self, a) -> float:
        """Length of some edge-path loop through vertex class a (upper bound
        for the shortest geodesic loop based there)."""
        a = self.vertex(a).index
        best = math.inf
        for w, length in self._skeleton[a]:
            if w == a:
                best = min(best, length)
        # go out one edge and come back another way around a face
        for (t, e) in self.gluings:
            ids = [self._corner_class[(t, s)] for s in range(3)]
            if a in ids:
                best = min(best, math.fsum(self.triangles[t].edge_lengths))
        return best if best < math.inf else 2.0 * self.skeleton_diameter_bound()

    def skeleton_diameter_bound(self) -> float:
        return math.fsum(
            self.triangles[t].edge_lengths[e] for (t, e) in self.gluings
        )

    def skeleton_eccentricity(self, a) -> float:
        """Largest skeleton distance from a vertex class to any other."""
        a = self.vertex(a).index
        best = {a: 0.0}
        heap = [(0.0, a)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > best.get(u, math.inf):
                continue
            for w, length in self._skeleton[u]:
                nd = d + length
                if nd < best.get(w, math.inf):
                    best[w] = nd
                    heapq.heappush(heap, (nd, w))
        return max(best.values())

    # -- metric queries (delegated to the unfolding engine) ----------------

    def saddle_distance(self, i, j, budget=None) -> float:
        """Length of the shortest geodesic between two distinct cone points."""
        from . import unfolding

        vi, vj = self.vertex(i), self.vertex(j)
        if vi.index == vj.index:
            raise UnknownVertex("saddle_distance needs two distinct points")
        lo, hi = sorted((vi.index, vj.index))
        return unfolding.surface_distance(self, lo, hi, budget=budget)

    def injectivity_radius_at_cone(self, i, budget=None) -> float:
        """Largest radius of an embedded metric ball centred at cone i."""
        from . import unfolding

        vc = self.vertex(i)
        return unfolding.injectivity_radius(self, vc.index, budget=budget)

    def disk_embedded(self, i, r, budget=None) -> bool:
        """Whether the disk of radius r around cone i is embedded.

        Ties within tolerance count as not embedded.
        """
        if r < 0:
            raise UnknownVertex("radius must be nonnegative")
        if r == 0.0:
            return True
        inj = self.injectivity_radius_at_cone(i, budget=budget)
        return r < inj - self.eps_len

    # -- refinement ----------------------------------------------------------

    def refine_barycentric(self, tri_index) -> "ConeSurface":
        """Split one triangle at its barycenter (adds a regular vertex)."""
        tris = []
        glue = {}
        children = {}  # old edge slot -> new edge slot
        new_index = {}
        for t, tri in enumerate(self.triangles):
            if t == tri_index:
                continue
            new_index[t] = len(tris)
            tris.append(tri.points)
            for e in range(3):
                children[(t, e)] = (new_index[t], e)
        a, b, c = self.triangles[tri_index].points
        g = ((a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0)
        base = len(tris)
        tris.extend([(a, b, g), (b, c, g), (c, a, g)])
        for k in range(3):
            children[(tri_index, k)] = (base + k, 0)
            glue[(base + k, 1)] = (base + (k + 1) % 3, 2)
            glue[(base + (k + 1) % 3, 2)] = (base + k, 1)
        for (t, e), (t2, e2) in self.gluings.items():
            glue[children[(t, e)]] = children[(t2, e2)]
        labels = {
            vc.label: _map_corner(vc.corners[0], tri_index, children)
            for vc in self.vertex_classes
        }
        return ConeSurface(tris, glue, labels)

    def refine_edge(self, slot) -> "ConeSurface":
        """Split a glued edge at its midpoint (adds a regular vertex)."""
        t, e = slot
        t2, e2 = self.gluings[(t, e)]
        if t == t2:
            raise UnpairedEdge("cannot midpoint-split an edge glued to its own triangle")
        tris = []
        glue = {}
        moved = {}
        new_index = {}
        for ti, tri in enumerate(self.triangles):
            if ti in (t, t2):
                continue
            new_index[ti] = len(tris)
            tris.append(tri.points)
            for k in range(3):
                moved[(ti, k)] = (new_index[ti], k)

        def split(ti, ei):
            pts = self.triangles[ti].points
            a, b = pts[ei], pts[(ei + 1) % 3]
            c = pts[(ei + 2) % 3]
            m = ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)
            ia = len(tris)
            tris.append((a, m, c))
            ib = len(tris)
            tris.append((m, b, c))
            glue[(ia, 1)] = (ib, 2)
            glue[(ib, 2)] = (ia, 1)
            moved[(ti, (ei + 1) % 3)] = (ib, 1)
            moved[(ti, (ei + 2) % 3)] = (ia, 2)
            return ia, ib

        ta, tb = split(t, e)
        ua, ub = split(t2, e2)
        glue[(ta, 0)] = (ub, 0)
        glue[(ub, 0)] = (ta, 0)
        glue[(tb, 0)] = (ua, 0)
        glue[(ua, 0)] = (tb, 0)
        for (ti, ei), (tj, ej) in self.gluings.items():
            if (ti, ei) in ((t, e), (t2, e2)):
                continue
            glue[moved[(ti, ei)]] = moved[(tj, ej)]

        def corner_map(ti, s):
            ref, ia, ib = (e, ta, tb) if ti == t else (e2, ua, ub)
            rel = (s - ref) % 3
            return ((ia, 0), (ib, 1), (ia, 2))[rel]

        labels = {}
        for vc in self.vertex_classes:
            ti, s = vc.corners[0]
            if ti in (t, t2):
                labels[vc.label] = corner_map(ti, s)
            else:
                labels[vc.label] = (new_index[ti], s)
        return ConeSurface(tris, glue, labels)


def _map_corner(corner, split_tri, children):
    t, s = corner
    if t != split_tri:
        # children maps edge slots; vertex slot s of an unsplit triangle is
        # the start of edge slot s
        return children[(t, s)][0], children[(t, s)][1]
    child, _ = children[(split_tri, s)]
    return (child, 0)

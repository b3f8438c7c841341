"""Closed 1-forms on the punctured surface, as edge-jump cochains.

A cochain assigns a real jump to every oriented interior edge of the
triangulation (reversing orientation flips the sign).  Integrating
along a path means summing the jumps of the edges it crosses, so path
integrals are plain finite sums: residues at cone points, gauge
transformations and loop periods are all exact edge arithmetic.

The counterclockwise sum of jumps around a cone point is its residue;
around a regular vertex it vanishes.  Residues can be realised if and
only if they sum to zero, and on a sphere they determine the cochain up
to a coboundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DegenerateGeometry,
    FormatError,
    IncompleteResidues,
    InconsistentPeriods,
    PathThroughVertex,
    ResidueSumNonzero,
)
from .geodesics import loops_at
from .surface import ConeSurface, dist, sub
from .tracing import TracedGeodesic
from . import unfolding

EPS_RES = 1e-9  # absolute residue tolerance; cochain arithmetic itself is exact


def canonical_slot(surface, slot):
    return min(slot, surface.gluings[slot])


class EdgeCochain:
    """A closed discrete 1-form with prescribed residues at cone points."""

    def __init__(self, surface: ConeSurface, values: dict, residues: dict):
        self.surface = surface
        self.values = dict(values)  # canonical slot -> jump when crossing that way
        self.residues = {surface.vertex(k).index: float(v) for k, v in residues.items()}
        for vc in surface.cone_points:
            self.residues.setdefault(vc.index, 0.0)

    def jump(self, slot) -> float:
        """Jump picked up when crossing out of ``slot``'s triangle there."""
        canon = canonical_slot(self.surface, slot)
        v = self.values.get(canon, 0.0)
        return v if slot == canon else -v

    def vertex_sum(self, key) -> float:
        """Counterclockwise sum of jumps around a vertex class."""
        vc = self.surface.vertex(key)
        return math.fsum(self.jump((t, (s + 2) % 3)) for (t, s) in vc.corners)

    def residue(self, key) -> float:
        return self.residues[self.surface.vertex(key).index]

    def is_zero(self) -> bool:
        return all(v == 0.0 for v in self.values.values())

    def integrate_word(self, word) -> float:
        """Integral along a path given as a directed crossing word."""
        return math.fsum(
            self.jump(item) for item in word if len(item) == 2
        )


@dataclass
class GaugeFunction:
    """A discrete potential: one real value per triangle."""

    values: list

    def __call__(self, tri):
        return self.values[tri]


def add_coboundary(omega: EdgeCochain, f: GaugeFunction) -> EdgeCochain:
    """Gauge-transform: add the coboundary of a per-triangle potential.

    Crossing from triangle t into t2 picks up f(t2) - f(t) extra, so all
    closed-loop integrals and all residues are unchanged.
    """
    if len(f.values) != len(omega.surface.triangles):
        raise FormatError("gauge function must assign a value to every triangle")
    new_values = {}
    for (t, e) in omega.surface.gluings:
        canon = canonical_slot(omega.surface, (t, e))
        if canon != (t, e):
            continue
        t2 = omega.surface.gluings[canon][0]
        new_values[canon] = omega.values.get(canon, 0.0) + f(t2) - f(t)
    return EdgeCochain(omega.surface, new_values, dict(omega.residues))


# -- construction ---------------------------------------------------------------


def _exact_solve(rows, rhs, n_unknowns):
    """Solve an integer-coefficient system over the rationals.

    Gaussian elimination with exact Fraction arithmetic; free unknowns
    are set to zero.  Returns None when the system is inconsistent.
    """
    m = [[Fraction(c) for c in row] + [Fraction(r)] for row, r in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(n_unknowns):
        piv = None
        for i in range(r, len(m)):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][col]
        m[r] = [x / inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                factor = m[i][col]
                m[i] = [a - factor * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    for i in range(r, len(m)):
        if m[i][n_unknowns] != 0:
            return None
    x = [Fraction(0)] * n_unknowns
    for i, col in enumerate(pivots):
        x[col] = m[i][n_unknowns]
    return x


def build_cochain(surface: ConeSurface, residues: dict, periods=None) -> EdgeCochain:
    """Construct a cochain with the given residues (and optional periods).

    ``residues`` maps every cone point to a real number summing to zero.
    ``periods`` is an optional list of ``(path, value)`` pairs fixing
    integrals over homology basis loops (paths are TracedGeodesics or
    crossing words); unconstrained homology directions default to zero
    period.  Jumps vanish on a spanning tree of the dual graph, which
    pins the result uniquely on a sphere.
    """
    res_idx = {}
    for key, val in residues.items():
        vc = surface.vertex(key)
        res_idx[vc.index] = res_idx.get(vc.index, 0.0) + float(val)
    for vc in surface.cone_points:
        if vc.index not in res_idx:
            raise IncompleteResidues(f"no residue for cone point {vc.label}")
    for idx in res_idx:
        if not surface.vertex_classes[idx].is_cone and res_idx[idx] != 0.0:
            raise IncompleteResidues(
                f"{surface.vertex_classes[idx].label} is regular; residue must be 0"
            )
    total = math.fsum(res_idx.values())
    if abs(total) > EPS_RES:
        raise ResidueSumNonzero(
            f"residues sum to {total!r}; a closed 1-form needs sum zero"
        )

    # spanning tree of the dual graph (triangles as nodes), canonical order
    all_canon = sorted(
        {canonical_slot(surface, slot) for slot in surface.gluings}
    )
    tree = set()
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for slot in all_canon:
            (t, e) = slot
            t2 = surface.gluings[slot][0]
            if t in seen and t2 not in seen:
                tree.add(slot)
                seen.add(t2)
                nxt.append(t2)
            elif t2 in seen and t not in seen:
                tree.add(slot)
                seen.add(t)
                nxt.append(t)
        if not nxt:
            break
        frontier = nxt
    cotree = [slot for slot in all_canon if slot not in tree]
    index_of = {slot: i for i, slot in enumerate(cotree)}

    rows = []
    rhs = []
    classes = sorted(surface.vertex_classes, key=lambda vc: vc.index)
    for vc in classes[:-1]:  # the last vertex equation is redundant
        row = [0] * len(cotree)
        for (t, s) in vc.corners:
            slot = (t, (s + 2) % 3)
            canon = canonical_slot(surface, slot)
            if canon in index_of:
                row[index_of[canon]] += 1 if slot == canon else -1
        rows.append(row)
        rhs.append(Fraction(res_idx.get(vc.index, 0.0)))
    n_vertex_rows = len(rows)
    for path, value in periods or []:
        word = path.crossings if isinstance(path, TracedGeodesic) else list(path)
        row = [0] * len(cotree)
        for slot in word:
            if len(slot) != 2:
                continue
            canon = canonical_slot(surface, tuple(slot))
            if canon in index_of:
                row[index_of[canon]] += 1 if tuple(slot) == canon else -1
            # tree edges carry jump zero, so they do not enter the row
        rows.append(row)
        rhs.append(Fraction(value))
    solution = _exact_solve(rows, rhs, len(cotree))
    if solution is None:
        raise InconsistentPeriods(
            "prescribed periods are inconsistent with the residues"
        )
    values = {
        slot: float(solution[i]) for slot, i in index_of.items() if solution[i] != 0
    }
    omega = EdgeCochain(surface, values, res_idx)
    for vc in surface.vertex_classes:
        want = res_idx.get(vc.index, 0.0)
        if abs(omega.vertex_sum(vc.index) - want) > EPS_RES:
            raise InconsistentPeriods("cochain solve failed to match residues")
    return omega


# -- integration -----------------------------------------------------------------


def integrate(omega: EdgeCochain, path) -> float:
    """Integral of the cochain along a path.

    ``path`` is a TracedGeodesic or a chart polyline: a list of
    ``(triangle, (x, y))`` waypoints where consecutive waypoints lie in
    the same chart or in charts glued along a shared edge (crossed once
    by the straight step between them).
    """
    surface = omega.surface
    if isinstance(path, TracedGeodesic):
        if path.through_vertices:
            raise PathThroughVertex(
                "path runs through a triangulation vertex; crossings undecidable"
            )
        return omega.integrate_word(path.crossings)
    word = polyline_crossings(surface, path)
    return omega.integrate_word(word)


def polyline_crossings(surface, points):
    """Directed crossing word of a chart polyline."""
    word = []
    for (t1, p1), (t2, p2) in zip(points, points[1:]):
        if t1 == t2:
            continue
        # a pair of triangles may share several edges; take the crossing
        # whose unfolded straight step is shortest
        best = None
        for e in range(3):
            if surface.gluings[(t1, e)][0] != t2:
                continue
            iso = surface.gluing_isometry(*surface.gluings[(t1, e)])  # t2 -> t1
            q2 = iso.apply(p2)
            a, b = surface.triangles[t1].edge(e)
            seg = sub(q2, p1)
            edge = sub(b, a)
            av = sub(a, p1)
            denom = seg[0] * edge[1] - seg[1] * edge[0]
            if denom == 0.0:
                continue
            u = (av[0] * seg[1] - av[1] * seg[0]) / denom
            s = (av[0] * edge[1] - av[1] * edge[0]) / denom
            if not (-1e-9 <= u <= 1.0 + 1e-9 and -1e-9 <= s <= 1.0 + 1e-9):
                continue
            step = dist(p1, q2)
            hit = (a[0] + u * edge[0], a[1] + u * edge[1])
            endpoint = (
                dist(hit, a) <= surface.eps_len or dist(hit, b) <= surface.eps_len
            )
            if best is None or step < best[0]:
                best = (step, (t1, e), endpoint)
        if best is None:
            raise FormatError(
                f"polyline step from triangle {t1} to {t2} crosses no shared edge"
            )
        if best[2]:
            raise PathThroughVertex("polyline crosses at an edge endpoint")
        word.append(best[1])
    return word


def vertex_loop_polyline(surface, key, radius_factor=0.05):
    """A closed chart polyline encircling a vertex once, counterclockwise.

    Waypoints sit on a small circle around the vertex, three per corner,
    so every step between consecutive waypoints is a short chord that
    unambiguously crosses one star edge.  Integrating a cochain along it
    recovers the residue.
    """
    from .surface import normalize, rotate

    vc = surface.vertex(key)
    r = radius_factor * min(
        surface.triangles[t].edge_lengths[s] for (t, s) in vc.corners
    )
    pts = []
    for (t, s) in vc.corners:
        tri = surface.triangles[t]
        v = tri.points[s]
        first = normalize(sub(tri.points[(s + 1) % 3], v))
        gamma = tri.angles[s]
        for frac in (0.25, 0.5, 0.75):
            phi = frac * gamma
            d = rotate(first, math.cos(phi), math.sin(phi))
            pts.append((t, (v[0] + r * d[0], v[1] + r * d[1])))
    pts.append(pts[0])
    return pts


# -- loop-ratio certification -----------------------------------------------------


@dataclass
class LoopRatioReport:
    """Sampled lower bound for the supremum of |period| / length.

    The bound is certified only up to the stated cutoff length and the
    sampled base points; ``proven`` is set when the cochain vanishes
    identically, which settles every loop at once.
    """

    worst_ratio: float
    witness: object  # GeodesicLoop or None
    witness_integral: float
    verified_up_to: float
    n_bases: int
    n_loops: int
    n_dropped: int
    proven: bool

    @property
    def holds(self) -> bool:
        return self.worst_ratio < 1.0 - 1e-9


def _point_clearance_bound(surface, dmaps, tri, point, cone_idx):
    """Lower bound for d(point, cone) from vertex distances."""
    pts = surface.triangles[tri].points
    best = 0.0
    dmap = dmaps[cone_idx]
    for s in range(3):
        cls = surface.corner_class(tri, s)
        via = dmap.get(cls)
        if via is not None:
            best = max(best, via - dist(point, pts[s]))
    return best


def _segment_clear(surface, dmaps, tri, a, b, cone_idx, radius, depth=14):
    """Certify min distance from chart segment [a, b] to a cone > radius."""
    la = _point_clearance_bound(surface, dmaps, tri, a, cone_idx)
    lb = _point_clearance_bound(surface, dmaps, tri, b, cone_idx)
    length = dist(a, b)
    if (la + lb - length) / 2.0 > radius:
        return True
    if depth == 0 or length <= 10 * surface.eps_len:
        return False
    mid = ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)
    return _segment_clear(
        surface, dmaps, tri, a, mid, cone_idx, radius, depth - 1
    ) and _segment_clear(surface, dmaps, tri, mid, b, cone_idx, radius, depth - 1)


def loop_avoids_disks(surface, loop_geodesic, excluded, dmaps) -> bool:
    """Whether a traced loop stays strictly outside every excluded disk."""
    for cone_idx, radius in excluded.items():
        if radius <= 0:
            continue
        for seg in loop_geodesic.segments:
            if not _segment_clear(
                surface, dmaps, seg.tri, seg.entry, seg.exit, cone_idx, radius
            ):
                return False
    return True


def loop_ratio_report(
    surface: ConeSurface,
    omega: EdgeCochain,
    excluded_disks: dict,
    max_length: float,
    budget=None,
) -> LoopRatioReport:
    """Worst |loop period| / length over sampled loops avoiding the disks.

    Geodesic loops are enumerated from a deterministic net of base
    points (triangle barycenters outside the disks); loops that cannot
    be certified to stay outside every excluded disk are dropped and
    counted.  The result is a lower bound on the true supremum,
    verified only up to ``max_length``.
    """
    excluded = {}
    for key, radius in excluded_disks.items():
        vc = surface.vertex(key)
        if radius < 0:
            raise DegenerateGeometry("excluded disk radius must be nonnegative")
        excluded[vc.index] = float(radius)
    positive = {i: r for i, r in excluded.items() if r > 0}
    for i, r in positive.items():
        if not surface.disk_embedded(i, r, budget=budget):
            raise DegenerateGeometry(
                f"excluded disk at {surface.vertex_classes[i].label} is not embedded"
            )
    for i, ri in positive.items():
        for j, rj in positive.items():
            if i < j and not ri + rj < surface.saddle_distance(i, j, budget=budget):
                raise DegenerateGeometry("excluded disks overlap")

    dmaps = {}
    if positive:
        cutoff = 2.0 * max_length + surface.longest_edge
        for i in positive:
            dmaps[i] = unfolding.distance_map_from_class(surface, i, cutoff, budget)

    if omega.is_zero():
        return LoopRatioReport(
            worst_ratio=0.0,
            witness=None,
            witness_integral=0.0,
            verified_up_to=max_length,
            n_bases=0,
            n_loops=0,
            n_dropped=0,
            proven=True,
        )

    worst = 0.0
    witness = None
    witness_int = 0.0
    n_loops = 0
    n_dropped = 0
    n_bases = 0
    for t in range(len(surface.triangles)):
        pts = surface.triangles[t].points
        bary = (
            (pts[0][0] + pts[1][0] + pts[2][0]) / 3.0,
            (pts[0][1] + pts[1][1] + pts[2][1]) / 3.0,
        )
        ok_base = all(
            _point_clearance_bound(surface, dmaps, t, bary, i) > r + surface.eps_len
            for i, r in positive.items()
        )
        if not ok_base:
            continue
        n_bases += 1
        for loop in loops_at(surface, (t, bary), max_length, budget=budget):
            if positive and not loop_avoids_disks(
                surface, loop.geodesic, positive, dmaps
            ):
                n_dropped += 1
                continue
            n_loops += 1
            period = omega.integrate_word(
                tuple(loop.geodesic.crossings)
            )
            ratio = abs(period) / loop.length
            if ratio > worst + 1e-15 or (
                witness is not None
                and abs(ratio - worst) <= 1e-15
                and str(loop.word) < str(witness.word)
            ):
                worst = ratio
                witness = loop
                witness_int = period
    return LoopRatioReport(
        worst_ratio=worst,
        witness=witness,
        witness_integral=witness_int,
        verified_up_to=max_length,
        n_bases=n_bases,
        n_loops=n_loops,
        n_dropped=n_dropped,
        proven=False,
    )

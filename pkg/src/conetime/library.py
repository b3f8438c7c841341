"""Ready-made cone surfaces: doubled polygons, flat tori, cone fans.

Doubling a planar polygon along its boundary produces a sphere whose
cone points sit at the polygon corners with twice the interior angle.
The doubled unit square is the classic "pillowcase" with four cone
points of angle pi.
"""

from __future__ import annotations

import math
import random

from .surface import ConeSurface, cross, sub


def double_polygon(points, labels=None) -> ConeSurface:
    """Double a convex polygon along its boundary.

    The front copy is fan-triangulated from vertex 0; the back copy is
    the mirror image, re-oriented so every chart stays counterclockwise.
    Corner i is labelled ``labels[i]`` (default ``p0, p1, ...``).
    """
    pts = [(float(x), float(y)) for (x, y) in points]
    n = len(pts)
    if n < 3:
        raise ValueError("polygon needs at least 3 vertices")
    for i in range(n):
        a, b, c = pts[i], pts[(i + 1) % n], pts[(i + 2) % n]
        if cross(sub(b, a), sub(c, b)) <= 0:
            raise ValueError("polygon must be strictly convex, CCW")
    labels = labels or [f"p{i}" for i in range(n)]

    tris = []
    glue = {}
    front = []
    for k in range(n - 2):
        front.append(len(tris))
        tris.append((pts[0], pts[k + 1], pts[k + 2]))
    back = []
    for k in range(n - 2):
        back.append(len(tris))
        m0, m1, m2 = pts[0], pts[k + 1], pts[k + 2]
        # mirror across the x-axis, listed to keep positive orientation
        tris.append(
            (
                (m0[0], -m0[1]),
                (m2[0], -m2[1]),
                (m1[0], -m1[1]),
            )
        )

    def pair(a, b):
        glue[a] = b
        glue[b] = a

    # interior fan diagonals: front triangle k edge 2 is (pts[k+2] -> pts[0])
    for k in range(n - 3):
        pair((front[k], 2), (front[k + 1], 0))
        # back triangle k: points (m0, m2', m1'): edge 0 is m0 -> m2'
        pair((back[k], 0), (back[k + 1], 2))
    # boundary edges: polygon edge (i, i+1)
    # front: edge 0 of tri 0 is (p0 -> p1); edge 1 of tri k is (p_{k+1} -> p_{k+2});
    # edge 2 of the last tri is (p_{n-1} -> p0)
    front_boundary = [(front[0], 0)]
    for k in range(n - 2):
        front_boundary.append((front[k], 1))
    front_boundary.append((front[n - 3], 2))
    # back: mirrored triangle k edges: 0: m0->m2', 1: m2'->m1', 2: m1'->m0
    back_boundary = [(back[0], 2)]
    for k in range(n - 2):
        back_boundary.append((back[k], 1))
    back_boundary.append((back[n - 3], 0))
    # front boundary edge j runs p_j -> p_{j+1}; the matching back edge runs
    # mirrored p_{j+1} -> p_j, which is exactly back_boundary[j]
    for j in range(n):
        pair(front_boundary[j], back_boundary[j])

    corner_of = {0: (front[0], 0), 1: (front[0], 1)}
    for k in range(n - 2):
        corner_of[k + 2] = (front[k], 2)
    label_map = {labels[i]: corner_of[i] for i in range(n)}
    return ConeSurface(tris, glue, label_map)


def pillowcase() -> ConeSurface:
    """Doubled unit square: sphere with four cone points of angle pi."""
    return double_polygon([(0, 0), (1, 0), (1, 1), (0, 1)])


def doubled_triangle(side=1.0) -> ConeSurface:
    """Doubled equilateral triangle: three cone points of angle 2*pi/3."""
    h = side * math.sqrt(3.0) / 2.0
    return double_polygon([(0, 0), (side, 0), (side / 2.0, h)])


def flat_torus(width=1.0, height=1.0) -> ConeSurface:
    """Rectangle with opposite sides glued: no cone points."""
    w, h = float(width), float(height)
    t0 = ((0, 0), (w, 0), (w, h))
    t1 = ((0, 0), (w, h), (0, h))
    glue = {}

    def pair(a, b):
        glue[a] = b
        glue[b] = a

    pair((0, 2), (1, 0))  # diagonal
    pair((0, 0), (1, 1))  # bottom <-> top
    pair((0, 1), (1, 2))  # right <-> left
    return ConeSurface([t0, t1], glue, {"o": (0, 0)})


def cone_fan_double(apex_angle, boundary_radius, sectors, apex_labels=("apex", "apex_back")) -> ConeSurface:
    """Double of an inscribed polygon around a cone point.

    The front sheet is a fan of ``sectors`` isosceles triangles with
    total apex angle ``apex_angle`` and circumradius ``boundary_radius``;
    the back sheet mirrors it.  The result is a sphere with two cone
    points of angle ``apex_angle`` (front and back apex) plus
    ``sectors`` mild cone points along the seam.
    """
    k = int(sectors)
    theta = float(apex_angle)
    r = float(boundary_radius)
    if k < 3 or theta <= 0 or r <= 0:
        raise ValueError("need sectors >= 3, positive angle and radius")
    beta = theta / k
    if beta >= math.pi:
        raise ValueError("sector angle must stay below pi")
    tris = []
    glue = {}

    def pair(a, b):
        glue[a] = b
        glue[b] = a

    apex = (0.0, 0.0)
    rim0 = (r, 0.0)
    rim1 = (r * math.cos(beta), r * math.sin(beta))
    rim1m = (rim1[0], -rim1[1])
    front = []
    back = []
    for _ in range(k):
        front.append(len(tris))
        tris.append((apex, rim0, rim1))
    for _ in range(k):
        back.append(len(tris))
        tris.append((apex, rim1m, rim0))
    for i in range(k):
        # front spokes: tri i edge 2 (rim1 -> apex) meets tri i+1 edge 0
        pair((front[i], 2), (front[(i + 1) % k], 0))
        # back spokes reverse the cyclic order
        pair((back[i], 2), (back[(i - 1) % k], 0))
        # seam: front base (rim0 -> rim1) against mirrored base (rim1m -> rim0)
        pair((front[i], 1), (back[i], 1))
    labels = {
        apex_labels[0]: (front[0], 0),
        apex_labels[1]: (back[0], 0),
    }
    for i in range(k):
        labels[f"rim{i}"] = (front[i], 1)
    return ConeSurface(tris, glue, labels)


def random_refinement(surface, steps, seed=0) -> ConeSurface:
    """Apply a random sequence of barycentric and edge-midpoint splits."""
    rng = random.Random(seed)
    for _ in range(steps):
        if rng.random() < 0.5:
            surface = surface.refine_barycentric(
                rng.randrange(len(surface.triangles))
            )
        else:
            slots = sorted(surface.gluings)
            surface = surface.refine_edge(slots[rng.randrange(len(slots))])
    return surface

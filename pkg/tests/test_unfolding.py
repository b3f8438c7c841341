"""Cross-checks of the unfolding engine against a Steiner-graph oracle.

The oracle subdivides every edge with evenly spaced Steiner points and
connects all boundary nodes of each triangle by straight chart chords;
Dijkstra on that graph overestimates the true metric distance by at
most a constant times the subdivision step, independently of the
corridor machinery under test.
"""

import heapq
import math
import random

import pytest

from conetime.errors import SearchBudgetExceeded
from conetime.library import double_polygon, pillowcase, random_refinement
from conetime.surface import dist
from conetime import unfolding


def steiner_distance(surface, class_a, class_b, per_edge=10):
    """Upper-bound oracle: Dijkstra over a dense chord graph."""
    node_of = {}

    def vertex_node(cls):
        return ("v", cls)

    def edge_node(slot, k):
        canon = min(slot, surface.gluings[slot])
        if slot == canon:
            return ("e", canon, k)
        return ("e", canon, per_edge - 1 - k)  # reversed parametrisation

    adj = {}

    def link(a, b, w):
        adj.setdefault(a, []).append((b, w))
        adj.setdefault(b, []).append((a, w))

    for t, tri in enumerate(surface.triangles):
        nodes = []
        for s in range(3):
            nodes.append((vertex_node(surface.corner_class(t, s)), tri.points[s]))
        for e in range(3):
            a, b = tri.edge(e)
            for k in range(per_edge):
                f = (k + 1) / (per_edge + 1)
                p = (a[0] + f * (b[0] - a[0]), a[1] + f * (b[1] - a[1]))
                nodes.append((edge_node((t, e), k), p))
        for i in range(len(nodes)):
            for j in range(i + 1, len(nodes)):
                link(nodes[i][0], nodes[j][0], dist(nodes[i][1], nodes[j][1]))

    src, dst = vertex_node(class_a), vertex_node(class_b)
    best = {src: 0.0}
    heap = [(0.0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if u == dst:
            return d
        if d > best.get(u, math.inf):
            continue
        for w, length in adj[u]:
            nd = d + length
            if nd < best.get(w, math.inf):
                best[w] = nd
                heapq.heappush(heap, (nd, w))
    raise AssertionError("steiner graph disconnected")


def random_sphere(rng):
    """A doubled random convex polygon, possibly refined."""
    n = rng.randint(3, 6)
    angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n))
    if min(b - a for a, b in zip(angles, angles[1:])) < 0.3:
        return None
    pts = [
        (math.cos(a) * rng.uniform(0.8, 1.4), math.sin(a) * rng.uniform(0.8, 1.4))
        for a in angles
    ]
    try:
        surface = double_polygon(pts)
    except ValueError:
        return None
    if rng.random() < 0.5:
        surface = random_refinement(surface, rng.randint(1, 3), seed=rng.randrange(999))
    return surface


@pytest.mark.parametrize("seed", range(8))
def test_distances_against_steiner_oracle(seed):
    rng = random.Random(1000 + seed)
    surface = None
    while surface is None:
        surface = random_sphere(rng)
    cones = [vc.index for vc in surface.cone_points]
    step = surface.longest_edge / 11.0
    pairs = 0
    for i in range(len(cones)):
        for j in range(i + 1, len(cones)):
            d_engine = surface.saddle_distance(cones[i], cones[j])
            d_oracle = steiner_distance(surface, cones[i], cones[j])
            # the oracle is an upper bound and converges linearly in step
            assert d_engine <= d_oracle + 1e-9
            assert d_oracle - d_engine <= 4.0 * step
            pairs += 1
    assert pairs >= 3


def test_point_distances_consistent_with_vertex_distances(pillow):
    # a point converging to a cone point sees distances converge too
    for eps in (0.2, 0.05, 0.01):
        dists = unfolding.distances_to_cones_from_point(pillow, 0, (eps, eps * 0.5))
        p0 = pillow.vertex("p0").index
        p1 = pillow.vertex("p1").index
        assert dists[p0] == pytest.approx(math.hypot(eps, eps * 0.5), abs=1e-9)
        assert abs(dists[p1] - 1.0) <= 1.2 * eps


def test_budget_exceeded_raised():
    surface = pillowcase()  # fresh: no cached connection graph
    with pytest.raises(SearchBudgetExceeded):
        surface.saddle_distance("p0", "p2", budget=1)
    with pytest.raises(SearchBudgetExceeded):
        unfolding.loop_candidates_at_point(surface, 0, (0.6, 0.3), 4.0, budget=2)


def test_env_budget_override(pillow, monkeypatch):
    monkeypatch.setenv("CONETIME_BUDGET", "1")
    surface = pillowcase()  # fresh surface: no cached graphs
    with pytest.raises(SearchBudgetExceeded):
        surface.saddle_distance("p0", "p2")


def test_direct_connections_include_skeleton_edges(dtri):
    hits = unfolding.direct_connections(dtri, 0, 1.5)
    edge_hits = [h for h in hits if h.kind == "edge"]
    assert edge_hits
    for h in edge_hits:
        assert h.length == pytest.approx(1.0, abs=1e-12)


def test_concurrent_queries_agree():
    # surfaces are immutable and queries allocate only search-local
    # state, so parallel callers must see identical results
    from concurrent.futures import ThreadPoolExecutor

    surface = pillowcase()
    pairs = [("p0", "p1"), ("p0", "p2"), ("p1", "p3"), ("p2", "p3")] * 4

    def work(pair):
        return (
            surface.saddle_distance(*pair),
            surface.injectivity_radius_at_cone(pair[0]),
        )

    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(work, pairs))
    serial = [work(p) for p in pairs]
    assert results == serial

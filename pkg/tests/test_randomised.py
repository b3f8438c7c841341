"""Randomised cross-checks on irregular surfaces.

The fan's winding loops are checked against the closed-form chord
lengths of the single-cone plane, and the paradox-exclusion theorem is
exercised on random doubled polygons with random admissible spins,
where no symmetry could mask a bookkeeping error.
"""

import math
import random

import pytest

from conetime.geodesics import DirectionState, loops_at, single_cone_connection, trace
from conetime.library import double_polygon, flat_torus, pillowcase
from conetime.one_form import build_cochain
from conetime.spacetime import StationarySpacetime, gh_check, paradox_guard
from conetime.surface import dist


@pytest.mark.parametrize("radius", [1.2, 1.9, 2.8])
def test_fan_winding_loops_match_chord_formula(fan, radius):
    theta = math.pi / 3
    apex = fan.vertex("apex").index
    rng = random.Random(int(radius * 100))
    for _ in range(3):
        phi = rng.uniform(0.01, theta / 7 - 0.01)
        base = (0, (radius * math.cos(phi), radius * math.sin(phi)))
        loops = loops_at(fan, base, 2.2 * radius)
        seen = {}
        for lp in loops:
            k = lp.winding.get(apex)
            if k is None:
                continue
            want = single_cone_connection(
                theta, (radius, 0.0), (radius, 0.0), abs(k)
            )
            assert want.exists
            seen[abs(k)] = lp.length
            assert lp.length == pytest.approx(want.length, abs=1e-9)
        assert 1 in seen  # the primary winding loop is always found


def _random_polygon_sphere(rng):
    n = rng.randint(3, 6)
    angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n))
    if min(b - a for a, b in zip(angles, angles[1:])) < 0.35:
        return None
    pts = [
        (math.cos(a) * rng.uniform(0.7, 1.3), math.sin(a) * rng.uniform(0.7, 1.3))
        for a in angles
    ]
    try:
        return double_polygon(pts)
    except ValueError:
        return None


@pytest.mark.parametrize("seed", range(6))
def test_paradox_exclusion_on_random_spacetimes(seed):
    rng = random.Random(9000 + seed)
    surface = None
    while surface is None:
        surface = _random_polygon_sphere(rng)
    cones = list(surface.cone_points)
    # small admissible spins: radii well under the pairwise separations
    min_sep = min(
        surface.saddle_distance(a.index, b.index)
        for i, a in enumerate(cones)
        for b in cones[i + 1 :]
    )
    amplitudes = [rng.uniform(-1.0, 1.0) for _ in cones]
    amplitudes[-1] -= sum(amplitudes)
    scale = 0.3 * min_sep / max(
        abs(a) * math.pi / vc.angle for a, vc in zip(amplitudes, cones)
    )
    residues = {
        vc.label: a * scale for vc, a in zip(cones, amplitudes)
    }
    omega = build_cochain(surface, residues)
    st = StationarySpacetime(surface, omega)
    report = gh_check(st, loop_cutoff=2.0 * min_sep)
    assert report.verdict in ("holds", "holds-up-to-cutoff")
    cutoff = max(2.5 * min_sep, 2.0 * surface.longest_edge)
    checked = 0
    for t in range(len(surface.triangles)):
        tri = surface.triangles[t]
        bary = (
            sum(p[0] for p in tri.points) / 3.0,
            sum(p[1] for p in tri.points) / 3.0,
        )
        if not paradox_guard(st, [(t, bary)]):
            continue
        for lp in loops_at(surface, (t, bary), cutoff):
            period = omega.integrate_word(tuple(lp.geodesic.crossings))
            assert lp.length - period > 0.0
            checked += 1
    assert checked > 0


def test_random_rays_through_a_regular_vertex_continue_straight():
    # aim sixty random rays exactly at the vertex created by an edge
    # split; each must continue as if traced on the unrefined surface
    torus = flat_torus()
    refined = torus.refine_edge((0, 0))
    rng = random.Random(5)
    for _ in range(60):
        p = (rng.uniform(0.05, 0.4), rng.uniform(0.55, 0.9))
        d = (0.5 - p[0], -p[1])
        n = math.hypot(*d)
        direction = (d[0] / n, d[1] / n)
        length = n + rng.uniform(0.3, 1.2)
        unref = trace(torus, DirectionState(1, p, direction), length, detect_closure=False)
        tri = next(
            i for i, t in enumerate(refined.triangles) if t.contains(p, -1e-12)
        )
        g = trace(refined, DirectionState(tri, p, direction), length, detect_closure=False)
        assert g.through_vertices
        assert abs(g.length - unref.length) < 1e-9
        assert dist(g.end.point, unref.end.point) < 1e-7


def test_loops_based_at_a_regular_vertex():
    # the split vertex at the bottom-edge midpoint carries exactly one
    # loop of length two (the vertical waist) below the 2 + eps cutoff
    surface = pillowcase().refine_edge((0, 0))
    midpoint = next(vc for vc in surface.vertex_classes if not vc.is_cone)
    loops = loops_at(surface, midpoint.label, 2.0 + 1e-9)
    assert [round(lp.length, 9) for lp in loops] == [2.0]


@pytest.mark.parametrize("seed", range(4))
def test_loop_reconstruction_closes_on_random_spheres(seed):
    rng = random.Random(400 + seed)
    surface = None
    while surface is None:
        surface = _random_polygon_sphere(rng)
    for t in range(min(3, len(surface.triangles))):
        tri = surface.triangles[t]
        bary = (
            sum(p[0] for p in tri.points) / 3.0,
            sum(p[1] for p in tri.points) / 3.0,
        )
        for lp in loops_at(surface, (t, bary), 4.0):
            end = lp.geodesic.end
            assert end.tri == t
            assert dist(end.point, bary) < 1e-7

import math
import random

import pytest

from conetime.errors import (
    IncompleteResidues,
    InconsistentPeriods,
    PathThroughVertex,
    ResidueSumNonzero,
)
from conetime.geodesics import loops_at, trace, DirectionState
from conetime.library import pillowcase, random_refinement
from conetime.one_form import (
    EdgeCochain,
    GaugeFunction,
    add_coboundary,
    build_cochain,
    integrate,
    loop_ratio_report,
    vertex_loop_polyline,
)
from conetime.particle import SingleConePlane

PILLOW_RESIDUES = {"p0": 0.5, "p1": -0.5, "p2": 0.0, "p3": 0.0}


@pytest.fixture()
def omega(pillow):
    return build_cochain(pillow, PILLOW_RESIDUES)


def test_residue_loops_recover_residues(pillow, omega):
    for vc in pillow.cone_points:
        loop = vertex_loop_polyline(pillow, vc.label)
        assert integrate(omega, loop) == pytest.approx(
            PILLOW_RESIDUES[vc.label], abs=1e-12
        )


def test_vertex_sums(pillow, omega):
    for vc in pillow.vertex_classes:
        want = PILLOW_RESIDUES.get(vc.label, 0.0)
        assert omega.vertex_sum(vc.index) == pytest.approx(want, abs=1e-12)


def test_zero_residues_give_zero_cochain(pillow):
    om = build_cochain(pillow, {vc.label: 0.0 for vc in pillow.cone_points})
    assert om.is_zero()
    loop = vertex_loop_polyline(pillow, "p0")
    assert integrate(om, loop) == 0.0


def test_residue_sum_nonzero_rejected(dtri):
    with pytest.raises(ResidueSumNonzero):
        build_cochain(dtri, {"p0": 1.0, "p1": 1.0, "p2": -1.0})


def test_missing_residue_rejected(dtri):
    with pytest.raises(IncompleteResidues):
        build_cochain(dtri, {"p0": 1.0, "p1": -1.0})


def test_contractible_loops_integrate_to_zero(pillow, omega):
    rng = random.Random(5)
    tri = pillow.triangles[0]
    for _ in range(10):
        # a random closed polyline inside one chart crosses nothing
        pts = [(0, _random_interior(tri, rng)) for _ in range(4)]
        pts.append(pts[0])
        assert integrate(omega, pts) == 0.0
    # crossing an edge and coming straight back also cancels
    out_and_back = [(0, (0.6, 0.3)), (2, (0.6, -0.3)), (0, (0.6, 0.3))]
    assert integrate(omega, out_and_back) == pytest.approx(0.0, abs=0)


def _random_interior(tri, rng):
    a = rng.uniform(0.05, 0.9)
    b = rng.uniform(0.05, 0.9 - a + 0.05)
    u, v, w = tri.points
    return (
        u[0] + a * (v[0] - u[0]) + b * (w[0] - u[0]),
        u[1] + a * (v[1] - u[1]) + b * (w[1] - u[1]),
    )


def test_constructed_crossing_arithmetic(pillow):
    # jumps 0.4 and 0.1 on two chosen edges; a path crossing the first
    # positively and the second negatively integrates to 0.3
    e1 = (0, 0)
    e2 = (1, 1)
    om = EdgeCochain(
        pillow,
        {e1: 0.4, e2: 0.1},
        {vc.label: 0.0 for vc in pillow.cone_points},
    )
    word = [e1, pillow.gluings[e2]]
    assert om.integrate_word(word) == pytest.approx(0.3, abs=1e-15)


def test_additivity_and_reversal(pillow, omega):
    start = DirectionState(0, (0.37, 0.19), (math.cos(0.9), math.sin(0.9)))
    g = trace(pillow, start, 3.0, detect_closure=False)
    h = trace(pillow, g.end, 2.0, detect_closure=False)
    total = trace(pillow, start, 5.0, detect_closure=False)
    assert integrate(omega, total) == pytest.approx(
        integrate(omega, g) + integrate(omega, h), abs=1e-12
    )
    back = trace(pillow, g.end.reversed(), g.length, detect_closure=False)
    assert integrate(omega, back) == pytest.approx(-integrate(omega, g), abs=1e-12)


def test_gauge_constant_is_identity(pillow, omega):
    om2 = add_coboundary(omega, GaugeFunction([3.25] * len(pillow.triangles)))
    for slot in pillow.gluings:
        assert om2.jump(slot) == pytest.approx(omega.jump(slot), abs=1e-12)


def test_gauge_invariance_of_loops(pillow, omega):
    rng = random.Random(11)
    f = GaugeFunction([rng.uniform(-3, 3) for _ in pillow.triangles])
    om2 = add_coboundary(omega, f)
    for vc in pillow.cone_points:
        loop = vertex_loop_polyline(pillow, vc.label)
        assert integrate(om2, loop) == pytest.approx(
            integrate(omega, loop), abs=1e-12
        )
    for lp in loops_at(pillow, (0, (0.61, 0.29)), 3.0):
        w = tuple(lp.geodesic.crossings)
        assert om2.integrate_word(w) == pytest.approx(
            omega.integrate_word(w), abs=1e-12
        )
    for vc in pillow.vertex_classes:
        assert om2.vertex_sum(vc.index) == pytest.approx(
            omega.vertex_sum(vc.index), abs=1e-12
        )


def test_gauge_on_one_triangle_changes_its_three_edges(pillow, omega):
    f = GaugeFunction([1.0 if t == 2 else 0.0 for t in range(len(pillow.triangles))])
    om2 = add_coboundary(omega, f)
    changed = {
        slot
        for slot in set(omega.values) | set(om2.values)
        if abs(om2.values.get(slot, 0.0) - omega.values.get(slot, 0.0)) > 1e-15
    }
    assert len(changed) == 3
    for slot in changed:
        (t, e) = slot
        (t2, e2) = pillow.gluings[slot]
        assert t == 2 or t2 == 2
        delta = om2.values.get(slot, 0.0) - omega.values.get(slot, 0.0)
        assert abs(abs(delta) - 1.0) < 1e-15


def test_sphere_cochains_with_equal_residues_differ_by_coboundary(pillow, omega):
    rng = random.Random(23)
    f = GaugeFunction([rng.uniform(-2, 2) for _ in pillow.triangles])
    other = add_coboundary(omega, f)
    # the difference kills every sampled closed-loop period
    for base in [(0, (0.55, 0.25)), (1, (0.2, 0.65))]:
        for lp in loops_at(pillow, base, 4.0):
            w = tuple(lp.geodesic.crossings)
            assert other.integrate_word(w) - omega.integrate_word(w) == pytest.approx(
                0.0, abs=1e-12
            )


def test_refined_surface_residues(pillow):
    refined = random_refinement(pillow, 5, seed=3)
    om = build_cochain(refined, PILLOW_RESIDUES)
    for vc in refined.cone_points:
        loop = vertex_loop_polyline(refined, vc.label)
        assert integrate(om, loop) == pytest.approx(
            PILLOW_RESIDUES[vc.label], abs=1e-12
        )


def test_torus_periods(torus):
    gx = trace(torus, DirectionState(0, (0.5, 0.25), (1.0, 0.0)), 1.0)
    gy = trace(torus, DirectionState(0, (0.5, 0.25), (0.0, 1.0)), 1.0)
    om = build_cochain(torus, {}, periods=[(gx, 0.25), (gy, -0.75)])
    assert integrate(om, gx) == pytest.approx(0.25, abs=1e-12)
    assert integrate(om, gy) == pytest.approx(-0.75, abs=1e-12)


def test_inconsistent_periods_rejected(torus):
    gx = trace(torus, DirectionState(0, (0.5, 0.25), (1.0, 0.0)), 1.0)
    with pytest.raises(InconsistentPeriods):
        build_cochain(torus, {}, periods=[(gx, 0.25), (gx, 0.5)])


def test_integrate_rejects_vertex_passing_traces(torus):
    refined = torus.refine_edge((0, 0))
    om = build_cochain(refined, {})
    start = (0.2, 0.6)
    d = (0.5 - start[0], -start[1])
    n = math.hypot(*d)
    tri = next(
        i for i, t in enumerate(refined.triangles) if t.contains(start, -1e-12)
    )
    g = trace(refined, DirectionState(tri, start, (d[0] / n, d[1] / n)), 2 * n)
    assert g.through_vertices
    with pytest.raises(PathThroughVertex):
        integrate(om, g)


# -- loop-ratio reports ----------------------------------------------------------


def test_zero_cochain_ratio_is_proven_zero(pillow):
    om = build_cochain(pillow, {vc.label: 0.0 for vc in pillow.cone_points})
    rep = loop_ratio_report(pillow, om, {vc.label: 0.0 for vc in pillow.cone_points}, 4.0)
    assert rep.worst_ratio == 0.0
    assert rep.proven


def test_pillowcase_ratio_pinned(pillow, omega):
    # worst sampled loop: the length-2 waist separating {p0, p3}; ratio s/2
    rep = loop_ratio_report(
        pillow, omega, {vc.label: 0.0 for vc in pillow.cone_points}, 4.0
    )
    assert rep.worst_ratio == pytest.approx(0.25, abs=1e-12)
    assert rep.worst_ratio < 1.0
    assert rep.witness is not None
    assert rep.witness.length == pytest.approx(2.0, abs=1e-9)
    assert rep.verified_up_to == 4.0


def test_pillowcase_ratio_with_disks(pillow, omega):
    radii = {"p0": 0.5 / math.pi, "p1": 0.5 / math.pi, "p2": 0.0, "p3": 0.0}
    rep = loop_ratio_report(pillow, omega, radii, 4.0)
    assert rep.worst_ratio == pytest.approx(0.25, abs=1e-12)


def test_single_cone_kgon_ratio_tends_to_one():
    # loops strictly outside the CTC radius keep ratio < 1; letting both
    # k grow and the radius shrink to r0 drives it to the boundary
    # equality |period| = length
    theta, sigma = math.pi / 3, 1.0
    plane = SingleConePlane(theta)
    r0 = sigma / theta
    prev = 0.0
    for k, excess in [(4, 0.2), (16, 0.05), (64, 0.01), (256, 1e-3), (4096, 1e-5)]:
        ratio = plane.kgon_loop_ratio(sigma, r0 * (1 + excess), k)
        assert prev < ratio < 1.0
        prev = ratio
    assert prev == pytest.approx(1.0, abs=1e-4)
    # at radius exactly r0 the chords undercut the circle, so the ratio
    # approaches 1 from above: the k-gon there is already paradoxical
    assert plane.kgon_loop_ratio(sigma, r0, 64) > 1.0

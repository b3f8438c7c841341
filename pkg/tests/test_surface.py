import math

import pytest

from conetime.errors import (
    DegenerateTriangle,
    DisconnectedSurface,
    MismatchedEdgeLength,
    UnknownVertex,
    UnpairedEdge,
)
from conetime.library import (
    double_polygon,
    doubled_triangle,
    pillowcase,
    random_refinement,
)
from conetime.particle import SingleConePlane
from conetime.surface import ConeSurface

from conftest import (
    dtri_distance,
    dtri_injectivity_oracle,
    pillow_distance,
    pillow_loop_lengths,
)

TWO_PI = 2.0 * math.pi


def test_doubled_triangle_is_a_sphere_with_three_cones(dtri):
    assert dtri.euler_characteristic == 2
    assert len(dtri.cone_points) == 3
    for vc in dtri.cone_points:
        assert vc.angle == pytest.approx(TWO_PI / 3, abs=1e-12)
    defect = sum(TWO_PI - vc.angle for vc in dtri.cone_points)
    assert defect == pytest.approx(4 * math.pi, abs=1e-9)


def test_pillowcase_structure(pillow):
    assert pillow.euler_characteristic == 2
    assert sorted(vc.label for vc in pillow.cone_points) == ["p0", "p1", "p2", "p3"]
    for vc in pillow.cone_points:
        assert vc.angle == pytest.approx(math.pi, abs=1e-12)
    assert sum(TWO_PI - vc.angle for vc in pillow.cone_points) == pytest.approx(
        4 * math.pi
    )


def test_torus_has_no_cone_points(torus):
    assert torus.euler_characteristic == 0
    assert torus.cone_points == ()
    assert torus.cone_angle("o") == pytest.approx(TWO_PI)


def test_fan_cone_angles(fan):
    assert fan.cone_angle("apex") == pytest.approx(math.pi / 3)
    assert fan.cone_angle("apex_back") == pytest.approx(math.pi / 3)
    beta = (math.pi / 3) / 7
    assert fan.cone_angle("rim0") == pytest.approx(2 * (math.pi - beta))


def test_mismatched_edge_length_rejected():
    # two triangles with unequal glued edges
    t0 = ((0, 0), (1, 0), (0, 1))
    t1 = ((0, 0), (2, 0), (0, 2))
    glue = {}
    for (a, b) in [((0, 0), (1, 0)), ((0, 1), (1, 1)), ((0, 2), (1, 2))]:
        glue[a] = b
        glue[b] = a
    with pytest.raises(MismatchedEdgeLength):
        ConeSurface([t0, t1], glue)


def test_unpaired_edge_rejected():
    t0 = ((0, 0), (1, 0), (0, 1))
    glue = {(0, 0): (0, 1), (0, 1): (0, 0)}  # edge (0,2) missing
    with pytest.raises(UnpairedEdge):
        ConeSurface([t0], glue)


def test_self_glued_edge_rejected():
    t0 = ((0, 0), (1, 0), (0, 1))
    glue = {(0, 0): (0, 0), (0, 1): (0, 2), (0, 2): (0, 1)}
    with pytest.raises(UnpairedEdge):
        ConeSurface([t0], glue)


@pytest.mark.parametrize(
    "points",
    [
        ((0, 0), (1, 0), (2, 0)),  # collinear
        ((0, 0), (0, 1), (1, 0)),  # negatively oriented
    ],
)
def test_degenerate_triangle_rejected(points):
    with pytest.raises(DegenerateTriangle):
        ConeSurface([points], {})


def test_disconnected_surface_rejected(dtri):
    tris = [t.points for t in dtri.triangles] * 2
    glue = dict(dtri.gluings)
    n = len(dtri.triangles)
    for (t, e), (t2, e2) in dtri.gluings.items():
        glue[(t + n, e)] = (t2 + n, e2)
    with pytest.raises(DisconnectedSurface):
        ConeSurface(tris, glue)


def test_cone_angle_unknown_vertex(pillow):
    with pytest.raises(UnknownVertex):
        pillow.cone_angle("nope")
    with pytest.raises(UnknownVertex):
        pillow.cone_angle(99)


def test_interior_vertex_of_refined_torus_is_regular(torus):
    refined = torus.refine_barycentric(0)
    regular = [vc for vc in refined.vertex_classes if not vc.is_cone]
    # original class plus the new barycenter
    assert len(regular) == len(refined.vertex_classes) == 2
    for vc in regular:
        assert vc.angle == pytest.approx(TWO_PI, abs=1e-9)


@pytest.mark.parametrize("seed", range(5))
def test_gauss_bonnet_over_random_refinements(seed):
    surfaces = [
        pillowcase(),
        doubled_triangle(),
        double_polygon([(0, 0), (2, 0), (3, 1), (1.5, 2.5), (-0.5, 1)]),
    ]
    for base in surfaces:
        refined = random_refinement(base, 4, seed=seed)
        defect = sum(TWO_PI - vc.angle for vc in refined.vertex_classes)
        assert abs(TWO_PI * refined.euler_characteristic - defect) < 1e-6
        assert refined.gauss_bonnet_residual < 1e-6
        # refinement does not create or destroy cone points
        assert len(refined.cone_points) == len(base.cone_points)
        assert refined.total_area == pytest.approx(base.total_area, rel=1e-12)


# -- distances ------------------------------------------------------------------

# expected values frozen from the reflection-orbifold oracles in conftest
PILLOW_ADJACENT = 1.0
PILLOW_DIAGONAL = math.sqrt(2.0)
DTRI_PAIR = 1.0


def test_oracles_agree_with_frozen_values():
    assert pillow_distance((0, 0), (1, 0)) == PILLOW_ADJACENT
    assert pillow_distance((0, 0), (1, 1)) == pytest.approx(PILLOW_DIAGONAL, abs=0)
    assert dtri_distance(0, 1) == pytest.approx(DTRI_PAIR, abs=1e-15)
    assert pillow_loop_lengths() == []  # every corner loop hits a cone point


def test_pillowcase_saddle_distances(pillow):
    assert pillow.saddle_distance("p0", "p1") == pytest.approx(PILLOW_ADJACENT, abs=1e-12)
    assert pillow.saddle_distance("p0", "p3") == pytest.approx(PILLOW_ADJACENT, abs=1e-12)
    assert pillow.saddle_distance("p0", "p2") == pytest.approx(PILLOW_DIAGONAL, abs=1e-12)


def test_saddle_distance_symmetric_exactly(pillow, dtri):
    for s, pairs in [
        (pillow, [("p0", "p1"), ("p0", "p2"), ("p1", "p3")]),
        (dtri, [("p0", "p1"), ("p1", "p2")]),
    ]:
        for a, b in pairs:
            assert s.saddle_distance(a, b) == s.saddle_distance(b, a)


def test_saddle_distance_needs_distinct_points(pillow):
    with pytest.raises(UnknownVertex):
        pillow.saddle_distance("p0", "p0")


def test_doubled_triangle_distances(dtri):
    for a, b in [("p0", "p1"), ("p1", "p2"), ("p0", "p2")]:
        assert dtri.saddle_distance(a, b) == pytest.approx(DTRI_PAIR, abs=1e-12)


@pytest.mark.parametrize("seed", range(4))
def test_refinement_invariance_of_distances(seed):
    base = pillowcase()
    refined = random_refinement(base, 4, seed=seed)
    for a, b, want in [
        ("p0", "p1", PILLOW_ADJACENT),
        ("p0", "p2", PILLOW_DIAGONAL),
    ]:
        assert refined.saddle_distance(a, b) == pytest.approx(want, abs=1e-9)


# -- injectivity radii -------------------------------------------------------------


def test_injectivity_radius_doubled_triangle(dtri):
    want = dtri_injectivity_oracle()
    assert want == pytest.approx(math.sqrt(3) / 2, abs=1e-15)
    assert dtri.injectivity_radius_at_cone("p0") == pytest.approx(want, abs=1e-12)


def test_injectivity_radius_pillowcase(pillow):
    # no loops survive (oracle), so the nearest cone rules
    assert pillow.injectivity_radius_at_cone("p0") == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("seed", range(4))
def test_refinement_invariance_of_injectivity(seed):
    refined = random_refinement(doubled_triangle(), 4, seed=seed)
    assert refined.injectivity_radius_at_cone("p0") == pytest.approx(
        math.sqrt(3) / 2, abs=1e-9
    )


def test_edge_split_on_shortest_loop_keeps_injectivity(dtri):
    # the midpoint of front edge 1 lies exactly on the shortest loop at p0
    refined = dtri.refine_edge((0, 1))
    assert refined.injectivity_radius_at_cone("p0") == pytest.approx(
        math.sqrt(3) / 2, abs=1e-9
    )


def test_single_cone_plane_unbounded():
    assert SingleConePlane(math.pi / 2).injectivity_radius_at_cone() == math.inf


# -- embedded disks ------------------------------------------------------------------


def test_disk_embedded_zero_radius(pillow):
    assert pillow.disk_embedded("p0", 0.0) is True


def test_disk_embedded_radius_exceeding_diameter(pillow):
    assert pillow.disk_embedded("p0", 10.0) is False


def test_disk_embedded_near_injectivity(dtri):
    inj = math.sqrt(3) / 2
    assert dtri.disk_embedded("p0", inj * 0.999) is True
    assert dtri.disk_embedded("p0", inj * 1.001) is False
    assert dtri.disk_embedded("p0", inj) is False  # ties are conservative


def test_cone_angles_strictly_positive(pillow, dtri, fan):
    for s in (pillow, dtri, fan):
        for vc in s.vertex_classes:
            assert vc.angle > 0

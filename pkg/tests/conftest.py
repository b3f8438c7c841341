"""Shared fixtures and independent brute-force oracles.

The distance/loop oracles develop the doubled-polygon surfaces into
their planar reflection orbifolds and minimise over explicit group
orbits, entirely bypassing the unfolding engine they are used to check.
"""

import math

import pytest

from conetime.library import (
    cone_fan_double,
    doubled_triangle,
    flat_torus,
    pillowcase,
)


@pytest.fixture(scope="session")
def pillow():
    return pillowcase()


@pytest.fixture(scope="session")
def dtri():
    return doubled_triangle()


@pytest.fixture(scope="session")
def torus():
    return flat_torus()


@pytest.fixture(scope="session")
def fan():
    # cone angle pi/3, boundary radius 4, seven sectors
    return cone_fan_double(math.pi / 3, 4.0, 7)


# -- pillowcase oracle ---------------------------------------------------------
# The doubled unit square develops onto the plane with cone-point copies at
# the integer lattice; the four corner classes are the parity classes of
# (i, j).  Geodesics between cone points are segments between lattice points
# of the right parity with no lattice point in the interior.


def pillow_distance(parity_a, parity_b, span=6):
    best = math.inf
    for i in range(-span, span + 1):
        for j in range(-span, span + 1):
            if (i % 2, j % 2) != (
                (parity_b[0] - parity_a[0]) % 2,
                (parity_b[1] - parity_a[1]) % 2,
            ):
                continue
            if (i, j) == (0, 0):
                continue
            best = min(best, math.hypot(i, j))
    return best


def _interior_lattice_point(vec):
    g = math.gcd(abs(vec[0]), abs(vec[1]))
    return g > 1


def pillow_loop_lengths(span=6):
    """Lengths of geodesic loops at a corner avoiding cone points."""
    out = []
    for i in range(-span, span + 1):
        for j in range(-span, span + 1):
            if (i % 2, j % 2) != (0, 0) or (i, j) == (0, 0):
                continue
            if not _interior_lattice_point((i, j)):
                out.append(math.hypot(i, j))
    return sorted(out)


# -- doubled equilateral triangle oracle -----------------------------------------
# Development: the (3,3,3) reflection orbifold.  Lattice points
# p(i,j) = (i + j/2, j*sqrt(3)/2) carry colour (i + 2 j) mod 3; corner k of
# the triangle sits on colour k.


def tri_lattice_point(i, j):
    return (i + j / 2.0, j * math.sqrt(3.0) / 2.0)


def dtri_distance(color_a, color_b, span=6):
    best = math.inf
    for i in range(-span, span + 1):
        for j in range(-span, span + 1):
            if (i + 2 * j) % 3 != (color_b - color_a) % 3 or (i, j) == (0, 0):
                continue
            best = min(best, math.hypot(*tri_lattice_point(i, j)))
    return best


def dtri_loop_vectors(span=6):
    """Same-colour lattice vectors with no lattice point strictly inside."""
    out = []
    for i in range(-span, span + 1):
        for j in range(-span, span + 1):
            if (i + 2 * j) % 3 != 0 or (i, j) == (0, 0):
                continue
            if math.gcd(abs(i), abs(j)) > 1:
                continue  # passes through an intermediate lattice point
            out.append((i, j, math.hypot(*tri_lattice_point(i, j))))
    return sorted(out, key=lambda t: t[2])


def dtri_injectivity_oracle():
    d_other = min(dtri_distance(0, 1), dtri_distance(0, 2))
    loops = [length for (_, _, length) in dtri_loop_vectors()]
    return min(d_other, min(loops) / 2.0)

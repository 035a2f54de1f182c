import math

import numpy as np
import pytest

from jensentype.errors import GenerationFailed
from jensentype.insphere import chebyshev_center
from jensentype.measures import boundary_centroid, measures
from jensentype.shapes import Ball, Cone, Parallelotope, Polytope
from jensentype.zoo import (PHI, PLATONIC, ZOO_NAMES, make_platonic, make_regular_polygon, platonic_vertices,
                            random_cone, random_parallelotope, random_tangent_polytope, triangle_t, zoo_shape)

# (vertices, facets)
PLATONIC_COUNTS = {
    "tetrahedron": (4, 4),
    "cube": (8, 6),
    "octahedron": (6, 8),
    "dodecahedron": (20, 12),
    "icosahedron": (12, 20),
}


@pytest.mark.parametrize("name", PLATONIC)
def test_platonic_counts_and_uniform_edges(name):
    poly = make_platonic(name)
    nv, nf = PLATONIC_COUNTS[name]
    assert len(poly.vertices) == nv and len(poly.facets) == nf
    V = platonic_vertices(name)
    D = np.linalg.norm(V[:, None] - V[None], axis=-1)
    edge = D[D > 1e-9].min()
    # Every vertex sees the same number of nearest neighbours.
    degrees = (np.abs(D - edge) < 1e-9).sum(axis=1)
    assert len(set(degrees)) == 1
    # All vertices on one sphere.
    r = np.linalg.norm(V, axis=1)
    assert np.ptp(r) < 1e-12


def test_icosahedron_uses_golden_ratio():
    V = platonic_vertices("icosahedron")
    assert np.isclose(np.abs(V).max(), PHI)


def test_unknown_platonic():
    with pytest.raises(ValueError):
        platonic_vertices("rhombicuboctahedron")


@pytest.mark.parametrize("k", range(3, 13))
def test_regular_polygon(k):
    poly = make_regular_polygon(k)
    vol, per = measures(poly)
    assert vol == pytest.approx(0.5 * k * math.sin(2 * math.pi / k), abs=1e-12)
    assert per == pytest.approx(2 * k * math.sin(math.pi / k), abs=1e-12)
    ins = chebyshev_center(poly)
    assert ins.tangent_to_all
    assert ins.radius == pytest.approx(math.cos(math.pi / k), abs=1e-12)
    assert np.linalg.norm(boundary_centroid(poly)) < 1e-12


def test_triangle_t():
    T = triangle_t()
    assert sorted(map(tuple, T.vertices.round(12))) == [(0.0, -1.0), (0.0, 1.0), (1.0, 0.0)]


@pytest.mark.parametrize("seed", range(10))
def test_random_tangent_polytope(seed):
    n = 2 + seed % 2
    poly = random_tangent_polytope(n, n + 3 + seed % 4, seed)
    ins = chebyshev_center(poly)
    assert ins.tangent_to_all and ins.radius == pytest.approx(1.0, abs=1e-9)
    np.testing.assert_allclose(ins.center, 0.0, atol=1e-9)
    assert np.allclose(poly.b, 1.0)


def test_random_tangent_polytope_is_seeded():
    a, b = random_tangent_polytope(3, 8, 4), random_tangent_polytope(3, 8, 4)
    np.testing.assert_array_equal(a.vertices, b.vertices)


def test_tangent_polytope_impossible():
    # Two halfspaces never bound a region in the plane.
    with pytest.raises(GenerationFailed):
        random_tangent_polytope(2, 2, retries=3)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_random_parallelotope(n):
    p = random_parallelotope(n, seed=n)
    assert abs(np.linalg.det(p.edges)) >= 0.1
    q = random_parallelotope(n, seed=n)
    np.testing.assert_array_equal(p.edges, q.edges)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_random_cone(n):
    c = random_cone(n, seed=7)
    assert np.all(c.base_vertices[:, -1] == 0.0)
    assert c.height == pytest.approx(abs(c.apex[-1]))
    assert c.height >= 0.3


@pytest.mark.parametrize("name", ZOO_NAMES)
def test_every_zoo_name_builds(name):
    shape = zoo_shape(name)
    assert isinstance(shape, (Polytope, Parallelotope, Ball, Cone))


def test_unknown_zoo_name():
    with pytest.raises(ValueError):
        zoo_shape("klein-bottle")

import itertools
import math

import numpy as np
import pytest
from scipy.optimize import linprog as scipy_linprog

from jensentype import lp
from jensentype.insphere import chebyshev_center, tangency_report
from jensentype.shapes import polytope_from_vertices
from jensentype.zoo import PHI, PLATONIC, make_platonic, make_regular_polygon, random_tangent_polytope

from conftest import SQRT2


@pytest.mark.parametrize("n", [2, 3, 4])
def test_cube(n):
    cube = polytope_from_vertices(list(itertools.product((-1.0, 1.0), repeat=n)))
    res = chebyshev_center(cube)
    np.testing.assert_allclose(res.center, 0.0, atol=1e-12)
    assert res.radius == pytest.approx(1.0)
    assert res.tangent_to_all
    assert tangency_report(cube) == (True, pytest.approx(0.0, abs=1e-12))


def test_triangle_incircle(tri):
    res = chebyshev_center(tri)
    np.testing.assert_allclose(res.center, [SQRT2 - 1, 0.0], atol=1e-12)
    # Area over semiperimeter.
    assert res.radius == pytest.approx(1.0 / (1.0 + SQRT2), abs=1e-12)


def test_regular_tetrahedron_inradius():
    tet = make_platonic("tetrahedron")
    edge = 2 * SQRT2
    assert chebyshev_center(tet).radius == pytest.approx(edge / (2 * math.sqrt(6)), rel=1e-12)
    np.testing.assert_allclose(chebyshev_center(tet).center, tet.vertices.mean(axis=0), atol=1e-12)


def test_icosahedron_inradius_ratio():
    ico = make_platonic("icosahedron")
    r = chebyshev_center(ico).radius
    R = math.sqrt(1 + PHI ** 2)
    assert r / R == pytest.approx((PHI ** 2 / math.sqrt(3)) / R, abs=1e-9)


def test_rectangle_is_not_tangent():
    rect = polytope_from_vertices([[0, 0], [2, 0], [2, 1], [0, 1]])
    ok, gap = tangency_report(rect)
    assert not ok
    assert gap == pytest.approx(0.5, abs=1e-9)
    assert not chebyshev_center(rect).unique


@pytest.mark.parametrize("name", PLATONIC)
def test_platonic_tangent(name):
    ok, gap = tangency_report(make_platonic(name))
    assert ok and gap < 1e-9


@pytest.mark.parametrize("seed", range(8))
def test_against_scipy_and_containment_and_maximality(seed):
    rng = np.random.default_rng(seed)
    n = 2 + seed % 3
    poly = polytope_from_vertices(rng.uniform(-1, 1, (n + 6, n)))
    res = chebyshev_center(poly)
    A, b = poly.A, poly.b
    ref = scipy_linprog(np.r_[np.zeros(n), -1.0], A_ub=np.hstack([A, np.ones((len(A), 1))]), b_ub=b,
                        bounds=[(None, None)] * (n + 1), method="highs")
    assert res.radius == pytest.approx(-ref.fun, abs=1e-9)
    assert res.facet_gaps.min() >= -1e-9
    # Sampled ball points stay inside.
    g = rng.standard_normal((10_000, n))
    pts = res.center + res.radius * rng.uniform(size=(10_000, 1)) ** (1 / n) * g / np.linalg.norm(g, axis=1)[:, None]
    assert np.all(pts @ A.T <= b + 1e-9)
    # radius + 1e-6 is infeasible: the Phase-one LP finds no center.
    bigger = lp.linprog(np.zeros(n), A, b - res.radius - 1e-6)
    assert bigger.status == "infeasible"


def test_regular_polygon_centered():
    for k in range(3, 13):
        res = chebyshev_center(make_regular_polygon(k))
        np.testing.assert_allclose(res.center, 0.0, atol=1e-9)
        assert res.tangent_to_all
        assert res.radius == pytest.approx(math.cos(math.pi / k), rel=1e-12)


def test_random_tangent_polytope_certified():
    poly = random_tangent_polytope(3, 6, 7)
    res = chebyshev_center(poly)
    assert res.tangent_to_all and res.worst_facet_gap < 1e-9
    assert res.radius == pytest.approx(1.0, abs=1e-9)

import math

import numpy as np
import pytest

from jensentype.checker import (HOLDS, INCONCLUSIVE, VIOLATED, cone_bound_check, identity_residuals,
                                insphere_bound_check, jensen_gap, jensen_verdict)
from jensentype.errors import HypothesisViolated
from jensentype.functions import Affine, CoordProj, MaxAffine, PNorm, QuadForm, standard_suite
from jensentype.insphere import chebyshev_center
from jensentype.measures import body_centroid, boundary_centroid
from jensentype.quadrature import QuadratureRequest
from jensentype.shapes import polytope_from_vertices
from jensentype.zoo import (make_ball, make_cone, make_cube, make_platonic, make_regular_polygon, random_cone,
                            random_tangent_polytope)

from conftest import SQRT2


def test_triangle_coordinate_violates(tri):
    g = jensen_gap(tri, CoordProj(0))
    assert g.body_mean.value == pytest.approx(1 / 3, abs=1e-12)
    assert g.boundary_mean.value == pytest.approx(1 - SQRT2 / 2, abs=1e-12)
    assert g.gap == pytest.approx(-0.0404401145, abs=1e-9)
    assert g.verdict == VIOLATED
    assert jensen_gap(tri, CoordProj(0, sign=-1)).verdict == HOLDS


def test_exact_gaps_carry_only_rounding_slack(tri):
    g = jensen_gap(tri, CoordProj(1))
    assert 0 < g.gap_error_bound < 1e-10


def test_budget_exhaustion_is_inconclusive():
    tiny = QuadratureRequest(target_error=1e-14, max_subdivisions=1, mc_target_error=1e-12, max_evaluations=10_000)
    g = jensen_gap(make_platonic("icosahedron"), PNorm(3, [0.1, 0.2, 0.3]), tiny)
    assert g.verdict == INCONCLUSIVE
    assert math.isinf(g.gap_error_bound) and g.diagnostics


def test_verdict_triangle_names_violator(tri):
    report = jensen_verdict(tri, name="T")
    assert report.verdict == "counterexample found"
    assert any(d.startswith("CoordProj(0") for d, _ in report.violations)
    assert report.centroid_gap == pytest.approx(0.0404401145, abs=1e-9)
    d = report.to_dict()
    assert d["shape"] == "T" and d["insphere"]["tangentToAll"]


def test_verdict_square_is_consistent_but_hedged():
    report = jensen_verdict(make_regular_polygon(4))
    assert report.verdict == "consistent with Jensen-type"
    assert "not a proof" in report.note
    assert len(report.results) == len(standard_suite(2))


def test_verdict_rejects_empty_suite(tri):
    with pytest.raises(ValueError):
        jensen_verdict(tri, [])


def test_identity_residuals():
    assert identity_residuals(make_ball(4))[0][1] < 1e-12
    cone = random_cone(3, 2)
    (name, res), = identity_residuals(cone)
    assert res < 1e-9
    poly = random_tangent_polytope(3, 7, seed=1)
    names = dict(identity_residuals(poly, chebyshev_center(poly)))
    assert max(names.values()) < 1e-9


def test_cone_hand_case():
    cone = make_cone([[-1.0, 0.0], [1.0, 0.0]], [0.0, 1.0])
    c = cone_bound_check(cone, QuadForm(np.array([[1.0, 0.0]]), [0.0, 0.0], 0.0))
    assert c.lhs.value == pytest.approx(1 / 6, abs=1e-9)
    assert c.rhs == pytest.approx(2 / 9, abs=1e-12)
    assert c.holds


@pytest.mark.parametrize("seed", range(6))
def test_cone_bound_random(seed):
    cone = random_cone(2 + seed % 2, seed)
    for f in standard_suite(cone.dim, body_centroid(cone), n_random=4):
        c = cone_bound_check(cone, f)
        assert c.holds
        if isinstance(f, CoordProj):
            assert abs(c.lhs.value - c.rhs) <= 1e-9


def test_insphere_bound_on_square():
    # Square [-1,1]^2, f = x^2: body mean 1/3, boundary mean 2/3, f(s) = 0.
    sq = make_cube(2).polytope
    b = insphere_bound_check(sq, QuadForm(np.array([[1.0, 0.0]]), [0.0, 0.0], 0.0))
    assert b.lhs.value == pytest.approx(1 / 3, abs=1e-12)
    assert b.rhs_theorem == pytest.approx(4 / 9, abs=1e-12)
    assert b.rhs_corollary == pytest.approx(2 / 3, abs=1e-12)
    assert b.holds_theorem and b.holds_corollary


def test_insphere_bound_affine_is_tight():
    poly = random_tangent_polytope(2, 6, seed=3)
    for i in range(2):
        b = insphere_bound_check(poly, CoordProj(i))
        assert b.lhs.value == pytest.approx(b.rhs_theorem, abs=1e-9)


def test_insphere_bound_requires_tangency():
    rect = polytope_from_vertices([[0, 0], [2, 0], [2, 1], [0, 1]])
    with pytest.raises(HypothesisViolated):
        insphere_bound_check(rect, CoordProj(0))


@pytest.mark.parametrize("seed", range(4))
def test_insphere_bound_random_suite(seed):
    poly = random_tangent_polytope(2 + seed % 2, 6 + seed, seed=seed)
    ins = chebyshev_center(poly)
    for f in standard_suite(poly.dim, body_centroid(poly), n_random=4):
        b = insphere_bound_check(poly, f, insphere=ins)
        assert b.holds_theorem and b.holds_corollary


def test_triangle_bound_holds_even_though_jensen_fails(tri):
    # T is tangential, so the weaker bound still applies to x_1.
    b = insphere_bound_check(tri, CoordProj(0))
    assert b.holds_theorem
    assert b.lhs.value > b.boundary_mean.value


def test_maxaffine_and_norm_gaps_nonnegative_on_platonic():
    poly = make_platonic("dodecahedron")
    m = boundary_centroid(poly)
    for f in (PNorm(2, m), MaxAffine([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [0, 0, 0]), Affine([1, 2, 3], 0)):
        assert jensen_gap(poly, f).verdict == HOLDS

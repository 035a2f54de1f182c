import numpy as np
import pytest

from jensentype.checker import HOLDS, VIOLATED
from jensentype.functions import MaxAffine
from jensentype.measures import centroid_gap
from jensentype.search import affine_worst_case, maxaffine_search
from jensentype.zoo import make_ball, make_platonic, make_regular_polygon, random_parallelotope


def test_affine_worst_case_triangle(tri):
    direction, violation = affine_worst_case(tri)
    assert violation == pytest.approx(centroid_gap(tri), abs=1e-12)
    # The boundary centroid of T sits left of the body centroid.
    np.testing.assert_allclose(direction, [1.0, 0.0], atol=1e-12)


@pytest.mark.parametrize("shape", [make_regular_polygon(6), make_platonic("cube"), make_ball(3),
                                   random_parallelotope(3, 1)], ids=repr)
def test_affine_worst_case_zero(shape):
    direction, violation = affine_worst_case(shape)
    assert violation < 1e-8


def test_search_finds_triangle_violation(tri):
    res = maxaffine_search(tri, pieces=1, restarts=2, budget=400, seed=0)
    assert res.certificate.verdict == VIOLATED
    assert res.certified_violation >= 0.95 * centroid_gap(tri)
    assert res.best_violation <= centroid_gap(tri) + 1e-9
    assert sum(t.evaluations for t in res.trace) <= 400


def test_search_is_seeded(tri):
    a = maxaffine_search(tri, pieces=2, restarts=2, budget=100, seed=3)
    b = maxaffine_search(tri, pieces=2, restarts=2, budget=100, seed=3)
    np.testing.assert_array_equal(a.best_function.A, b.best_function.A)
    assert a.best_violation == b.best_violation


def test_search_respects_box(tri):
    res = maxaffine_search(tri, pieces=3, restarts=2, budget=200, seed=1)
    assert np.all(np.abs(res.best_function.A) <= 1.0)
    assert np.all(np.abs(res.best_function.b) <= tri.diameter)


def test_search_on_square_finds_nothing():
    sq = make_regular_polygon(4)
    res = maxaffine_search(sq, pieces=2, restarts=2, budget=200, seed=0)
    assert res.certificate.verdict == HOLDS
    assert res.certified_violation <= 3 * res.certificate.gap_error_bound


def test_warm_start_padding(tri):
    warm = MaxAffine([[1.0, 0.0]], [0.0])
    res = maxaffine_search(tri, pieces=3, restarts=1, budget=50, seed=0, warm_start=warm)
    # Already violated at the start; the search never gets worse.
    assert res.best_violation >= centroid_gap(tri) - 1e-12


def test_search_rejects_bad_arguments(tri):
    with pytest.raises(ValueError):
        maxaffine_search(tri, pieces=0)


def test_result_serializes(tri):
    d = maxaffine_search(tri, pieces=1, restarts=1, budget=20).to_dict()
    assert set(d) >= {"bestFunction", "bestViolation", "certifiedViolation", "certificate", "trace"}

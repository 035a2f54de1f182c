import numpy as np
import pytest

from jensentype.errors import DimensionMismatch
from jensentype.functions import (Affine, CoordProj, ExpAffine, MaxAffine, PNorm, QuadForm, convexity_probe,
                                  evaluate, from_dict, random_maxaffine, standard_suite)


def test_evaluate_examples():
    assert evaluate(CoordProj(0, 1), [0.3, 0.7]) == pytest.approx(0.3)
    assert evaluate(MaxAffine([[1, 0], [-1, 0]], [0, 0]), [-2, 5]) == pytest.approx(2.0)
    assert evaluate(QuadForm(np.eye(2)), [1, 2]) == pytest.approx(5.0)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        Affine([1.0, 2.0])(np.zeros(3))
    with pytest.raises(DimensionMismatch):
        CoordProj(4)(np.zeros(2))


def test_maxaffine_is_max_of_pieces(rng):
    f = random_maxaffine(3, 5, rng)
    X = rng.uniform(-2, 2, (100, 3))
    expected = np.max([p(X) for p in f.pieces], axis=0)
    np.testing.assert_allclose(f(X), expected, rtol=0, atol=1e-14)


@pytest.mark.parametrize("p", [1.0, np.inf])
def test_pnorm_maxaffine_forms(rng, p):
    c = rng.uniform(-1, 1, 3)
    X = rng.uniform(-2, 2, (200, 3))
    np.testing.assert_allclose(PNorm(p, c).as_maxaffine()(X), PNorm(p, c)(X), atol=1e-14)
    assert PNorm(2.0, c).as_maxaffine() is None


def test_invalid_families():
    with pytest.raises(ValueError):
        PNorm(0.5, [0.0, 0.0])
    with pytest.raises(ValueError):
        MaxAffine(np.empty((0, 2)), [])
    with pytest.raises(ValueError):
        CoordProj(0, 2)


def test_exp_coefficients_clamped():
    assert ExpAffine([5.0, -3.0]).a.tolist() == [2.0, -2.0]


@pytest.mark.parametrize("f", [Affine([1.0, -2.0], 0.5), MaxAffine([[1, 0], [0, 1]], [0, 1]),
                               QuadForm([[1.0, 2.0]], [0.5, 0.0], 1.0), PNorm(3, [0.1, 0.2]),
                               PNorm(np.inf, [0.0, 1.0]), ExpAffine([0.5, 0.0], -1.0), CoordProj(1, -1)])
def test_dict_round_trip(f):
    g = from_dict(f.to_dict())
    X = np.random.default_rng(0).uniform(-1, 1, (20, 2))
    np.testing.assert_array_equal(f(X), g(X))


def test_standard_suite_composition():
    for n in (2, 3, 4):
        suite = standard_suite(n, np.zeros(n))
        assert len(suite) == 4 * n + 24
        assert sum(isinstance(f, CoordProj) for f in suite) == 2 * n
        assert sum(isinstance(f, ExpAffine) for f in suite) == 2 * n
        assert all(isinstance(f, MaxAffine) and len(f.b) == 4 for f in suite[-20:])
    # Seeded: identical across calls.
    a, b = standard_suite(3, seed=5), standard_suite(3, seed=5)
    np.testing.assert_array_equal(a[-1].A, b[-1].A)


def test_probe_affine_passes():
    for seed in range(3):
        assert convexity_probe(Affine([1.0, -1.0], 2.0), ([-1, -1], [1, 1]), 1000, seed) is None


def test_probe_norm_passes():
    assert convexity_probe(PNorm(2, [0.0, 0.0]), ([-1, -1], [1, 1]), 10_000, 0) is None


def test_probe_catches_concave_function():
    w = convexity_probe(lambda X: -(np.atleast_2d(X) ** 2).sum(axis=1), ([-1, -1], [1, 1]), 100, 0)
    assert w is not None and w.excess > 0

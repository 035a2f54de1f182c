import numpy as np
import pytest
from scipy.optimize import linprog as scipy_linprog

from jensentype import lp


@pytest.mark.parametrize("seed", range(20))
def test_matches_scipy_on_random_bounded_programs(seed):
    rng = np.random.default_rng(seed)
    n, m = rng.integers(2, 5), rng.integers(6, 15)
    A = rng.standard_normal((m, n))
    A = np.vstack([A, np.eye(n), -np.eye(n)])
    b = np.concatenate([rng.uniform(0.1, 2, m), 3 * np.ones(2 * n)])
    c = rng.standard_normal(n)
    ours = lp.linprog(c, A, b)
    ref = scipy_linprog(c, A_ub=A, b_ub=b, bounds=[(None, None)] * n, method="highs")
    assert ours.status == "optimal"
    assert ours.fun == pytest.approx(ref.fun, abs=1e-9)
    # Dual certificate: y >= 0, A^T y = -c, complementary slackness.
    y = ours.dual
    assert y.min() >= -1e-10
    np.testing.assert_allclose(A.T @ y, -c, atol=1e-9)
    assert np.abs(y * (b - A @ ours.x)).max() < 1e-9


def test_infeasible():
    res = lp.linprog([1.0], [[1.0], [-1.0]], [-1.0, -1.0])
    assert res.status == "infeasible"


def test_unbounded():
    res = lp.linprog([-1.0, 0.0], [[0.0, 1.0], [0.0, -1.0]], [1.0, 1.0])
    assert res.status == "unbounded"


def test_nonnegative_variables():
    # min -x - y, x + y <= 1, x, y >= 0 restricted by free mask
    res = lp.linprog([-1.0, -2.0], [[1.0, 1.0]], [1.0], free=[False, False])
    assert res.status == "optimal"
    np.testing.assert_allclose(res.x, [0.0, 1.0], atol=1e-12)


def test_degenerate_program_terminates():
    # Many constraints tight at the optimum (apex of a pyramid).
    A = np.array([[1, 1, 1], [-1, 1, 1], [1, -1, 1], [-1, -1, 1], [0, 0, -1]], dtype=float)
    b = np.array([1, 1, 1, 1, 0], dtype=float)
    res = lp.linprog([0, 0, -1], A, b)
    assert res.status == "optimal"
    assert res.fun == pytest.approx(-1.0)

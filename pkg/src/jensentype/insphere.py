"""Chebyshev center of a polytope and tangency of the inscribed ball."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp
from .errors import NumericalFailure
from .shapes import Polytope

TANGENCY_TOL = 1e-7
_OPT_TOL = 1e-9


@dataclass
class InsphereResult:
    center: np.ndarray
    radius: float
    facet_gaps: np.ndarray
    tangent_to_all: bool
    unique: bool
    dual: np.ndarray

    @property
    def worst_facet_gap(self) -> float:
        return float(self.facet_gaps.max())

    def to_dict(self) -> dict:
        return {
            "center": self.center.tolist(),
            "radius": self.radius,
            "facetGaps": self.facet_gaps.tolist(),
            "tangentToAll": self.tangent_to_all,
            "unique": self.unique,
        }


def _verify(A, b, x, r, y, tol):
    """Primal feasibility, dual feasibility and complementary slackness."""
    slack = b - A @ x - r
    scale = max(1.0, float(np.abs(b).max()))
    checks = [
        slack.min() >= -tol * scale,
        y.min() >= -tol,
        np.abs(A.T @ y).max() <= tol * scale,
        abs(y.sum() - 1.0) <= tol,
        np.abs(y * slack).max() <= tol * scale,
    ]
    if not all(checks):
        raise NumericalFailure("Chebyshev LP solution failed optimality verification")


def chebyshev_center(poly: Polytope, tol: float = TANGENCY_TOL) -> InsphereResult:
    """Largest ball inside ``poly``: maximize r s.t. a_i.x + r <= b_i.

    When the optimal center is not unique (a rectangle, say) the center is
    pushed to the middle of the optimal set by a second LP that maximizes
    the smallest gap on facets the ball does not need to touch.
    """
    A, b = poly.A, poly.b
    m, n = A.shape
    G = np.hstack([A, np.ones((m, 1))])
    res = lp.linprog(np.r_[np.zeros(n), -1.0], G, b)
    if res.status != "optimal":
        raise NumericalFailure(f"Chebyshev LP ended with status {res.status}")
    x, r = res.x[:n], float(res.x[n])
    _verify(A, b, x, r, res.dual, _OPT_TOL)

    # Facets that can be left untouched by some optimal ball.
    loose = []
    for i in range(m):
        # max slack b_i - a_i.x  <=>  min a_i.x
        sub = lp.linprog(A[i], A, b - r)
        if sub.status == "optimal" and b[i] - r - sub.fun > 1e-7:
            loose.append(i)
    unique = not loose
    if loose:
        t_col = np.zeros((m, 1))
        t_col[loose] = 1.0
        stage2 = lp.linprog(np.r_[np.zeros(n), -1.0], np.hstack([A, t_col]), b - r)
        if stage2.status == "optimal":
            x = stage2.x[:n]

    gaps = b - A @ x - r
    return InsphereResult(x, r, gaps, bool(gaps.max() < tol), unique, res.dual)


def tangency_report(poly: Polytope, tol: float = TANGENCY_TOL) -> tuple[bool, float]:
    res = chebyshev_center(poly, tol)
    return res.tangent_to_all, res.worst_facet_gap

"""Search for convex functions that break the mean-value inequality.

The objective is ``J(f) = body mean - boundary mean`` over max-affine f;
a positive value is a violation.  Affine f are solved in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .checker import GapResult, jensen_gap
from .errors import BudgetExceeded
from .functions import MaxAffine
from .measures import body_centroid, boundary_centroid
from .quadrature import QuadratureRequest, mean_over_body, mean_over_boundary

SEARCH_TOL = 1e-5
CERTIFICATE_TOL = 1e-7
INITIAL_STEP = 0.25
SHRINK = 0.5
MIN_STEP = 1e-7


def affine_worst_case(shape) -> tuple[np.ndarray, float]:
    """Best unit-norm affine direction and its violation.

    For ``f(x) = a.x + b`` the violation is ``a . (c_body - c_boundary)``,
    maximized over ``|a| <= 1`` by the normalized centroid difference.
    """
    d = body_centroid(shape) - boundary_centroid(shape)
    norm = float(np.linalg.norm(d))
    if norm == 0.0:
        return np.zeros_like(d), 0.0
    return d / norm, norm


@dataclass
class RestartTrace:
    restart: int
    best_value: float
    evaluations: int
    note: str = ""


@dataclass
class SearchResult:
    best_function: MaxAffine
    best_violation: float
    certificate: GapResult
    trace: list[RestartTrace] = field(default_factory=list)

    @property
    def certified_violation(self) -> float:
        return -self.certificate.gap

    def to_dict(self) -> dict:
        return {
            "bestFunction": self.best_function.to_dict(),
            "bestViolation": self.best_violation,
            "certifiedViolation": self.certified_violation,
            "certificate": self.certificate.to_dict(),
            "trace": [t.__dict__ for t in self.trace],
        }


class _Objective:
    def __init__(self, shape, k: int, req: QuadratureRequest):
        self.shape, self.k, self.n, self.req = shape, k, shape.dim, req
        self.cache: dict[bytes, float] = {}
        self.evaluations = 0

    def unpack(self, theta: np.ndarray) -> MaxAffine:
        M = theta.reshape(self.k, self.n + 1)
        return MaxAffine(M[:, :-1], M[:, -1])

    def __call__(self, theta: np.ndarray) -> float:
        key = theta.tobytes()
        if key not in self.cache:
            f = self.unpack(theta)
            self.evaluations += 1
            self.cache[key] = (mean_over_body(self.shape, f, self.req).value
                               - mean_over_boundary(self.shape, f, self.req).value)
        return self.cache[key]


def _pattern_search(J: _Objective, x: np.ndarray, lo, hi, scale, budget: int):
    fx = J(x)
    step = INITIAL_STEP
    start = J.evaluations
    while step >= MIN_STEP and J.evaluations - start < budget:
        improved = False
        for i in range(x.size):
            for sign in (1.0, -1.0):
                y = x.copy()
                y[i] = np.clip(x[i] + sign * step * scale[i], lo[i], hi[i])
                if y[i] == x[i]:
                    continue
                fy = J(y)
                if fy > fx:
                    x, fx, improved = y, fy, True
                    break
            if J.evaluations - start >= budget:
                break
        if not improved:
            step *= SHRINK
    return x, fx


def maxaffine_search(shape, pieces: int = 4, restarts: int = 8, budget: int = 10_000, seed: int = 0,
                     warm_start: MaxAffine | None = None) -> SearchResult:
    """Multistart pattern search over max-affine functions with ``pieces`` pieces.

    Slopes are boxed to ``|a| <= 1`` componentwise and intercepts to
    ``|b| <= diameter``.  ``budget`` caps objective evaluations over all
    restarts.  A ``warm_start`` function (e.g. the best result with fewer
    pieces) seeds the first restart, padded with copies of its first piece.
    """
    if pieces < 1 or restarts < 1:
        raise ValueError("need pieces >= 1 and restarts >= 1")
    n = shape.dim
    diam = float(shape.diameter)
    J = _Objective(shape, pieces, QuadratureRequest(target_error=SEARCH_TOL, seed=seed))
    lo = np.tile(np.r_[-np.ones(n), -diam], pieces)
    hi = -lo
    scale = np.tile(np.r_[np.ones(n), diam], pieces)
    per_restart = max(1, budget // restarts)

    best = None
    trace: list[RestartTrace] = []
    for r in range(restarts):
        rng = np.random.default_rng(np.random.SeedSequence([seed, r]))
        if r == 0 and warm_start is not None:
            A = np.clip(warm_start.A[:pieces], -1, 1)
            b = np.clip(warm_start.b[:pieces], -diam, diam)
            pad = pieces - len(A)
            x0 = np.hstack([np.vstack([A, np.repeat(A[:1], pad, axis=0)]),
                            np.r_[b, np.repeat(b[:1], pad)][:, None]]).ravel()
        else:
            x0 = rng.uniform(lo, hi)
        used = J.evaluations
        note = ""
        try:
            x, fx = _pattern_search(J, x0, lo, hi, scale, per_restart)
        except BudgetExceeded as exc:
            x, fx, note = x0, -np.inf, f"quadrature budget exceeded: {exc}"
        trace.append(RestartTrace(r, float(fx), J.evaluations - used, note))
        if best is None or fx > best[1]:
            best = (x, fx)

    f_best = J.unpack(best[0])
    cert = jensen_gap(shape, f_best, QuadratureRequest(target_error=CERTIFICATE_TOL, seed=seed))
    return SearchResult(f_best, float(best[1]), cert, trace)

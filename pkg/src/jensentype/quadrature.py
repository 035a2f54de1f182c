"""Means of convex functions over bodies, boundaries, facets and segments.

Every routine returns an :class:`Estimate`.  The method ladder is

* exact: affine functions (via centroids), quadratic forms (degree-2
  simplex rule, closed forms on balls and parallelotopes), max-affine
  functions on polytopes (integration over the linearity cells) and
  exponentials of affine functions on polytopes (divided differences);
* quadrature: adaptive degree-5 simplex rule with edgewise subdivision,
  adaptive Gauss-Legendre on segments and on ball radii/latitudes, exact
  arc integration or periodic trapezoid on circles;
* monte-carlo: stratified sampling, reported with a 3-sigma error bound.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm
from scipy.spatial import ConvexHull

from .errors import BudgetExceeded, DimensionMismatch
from .functions import Affine, ConvexFunc, CoordProj, ExpAffine, MaxAffine, PNorm, QuadForm
from .measures import body_centroid, boundary_centroid, measures
from .shapes import (GEOM_TOL, Ball, Cone, Parallelotope, Polytope, affine_rank, dedupe_points,
                     enumerate_vertices, polytope_from_vertices, simplex_measures)

MC_SIGMAS = 3.0


@dataclass(frozen=True)
class Estimate:
    value: float
    error_bound: float
    method: str  # "exact" | "quadrature" | "monte-carlo"
    evaluations: int = 0

    def to_dict(self) -> dict:
        return {"value": self.value, "errorBound": self.error_bound,
                "method": self.method, "evaluations": self.evaluations}


@dataclass(frozen=True)
class QuadratureRequest:
    target_error: float = 1e-6
    max_subdivisions: int = 12
    seed: int = 0
    mc_target_error: float = 1e-4
    max_evaluations: int = 4_000_000

    def __post_init__(self):
        if not self.target_error > 0:
            raise ValueError("target_error must be positive")


DEFAULT_REQUEST = QuadratureRequest()


def _exact(value: float, evaluations: int = 0) -> Estimate:
    return Estimate(float(value), 0.0, "exact", evaluations)


def _normalize(f: ConvexFunc, n: int) -> ConvexFunc:
    """Rewrite f in the most specific family that has an exact path."""
    if isinstance(f, CoordProj):
        return f.as_affine(n)
    if f.dim is not None and f.dim != n:
        raise DimensionMismatch(f"function lives in R^{f.dim}, shape in R^{n}")
    if isinstance(f, PNorm):
        return f.as_maxaffine() or f
    if isinstance(f, MaxAffine):
        # Exact duplicates would double count linearity cells.
        M = np.unique(np.hstack([f.A, f.b[:, None]]), axis=0)
        if len(M) == 1:
            return Affine(M[0, :-1], M[0, -1])
        return MaxAffine(M[:, :-1], M[:, -1])
    return f


# ---------------------------------------------------------------------------
# One-dimensional rules
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _gauss_legendre(order: int = 16):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


def _gl_panels(g, lo, hi):
    x, w = _gauss_legendre()
    h = hi - lo
    nodes = lo[:, None] + h[:, None] * x
    vals = np.asarray(g(nodes.ravel())).reshape(nodes.shape)
    return h * (vals @ w)


def adaptive_gauss_legendre(g, a: float, b: float, tol: float, max_depth: int = 30):
    """Integral of a vectorized ``g`` over [a, b] by 16-point panels.

    A panel is accepted when its two halves agree with it to within its
    share of ``tol``.  Returns ``(value, error, evaluations, converged)``.
    """
    lo, hi = np.array([a]), np.array([b])
    coarse = _gl_panels(g, lo, hi)
    evals = 16
    total_len = b - a
    value = err = 0.0
    converged = True
    for depth in range(max_depth + 1):
        mid = 0.5 * (lo + hi)
        left = _gl_panels(g, lo, mid)
        right = _gl_panels(g, mid, hi)
        evals += 32 * lo.size
        fine = left + right
        e = np.abs(fine - coarse)
        ok = e <= tol * (hi - lo) / total_len
        if depth == max_depth:
            ok[:] = True
            converged = bool(e.sum() <= tol) and converged
        value += fine[ok].sum()
        err += e[ok].sum()
        lo, hi, mid = lo[~ok], hi[~ok], mid[~ok]
        if lo.size == 0:
            break
        coarse = np.concatenate([left[~ok], right[~ok]])
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
    return value, err, evals, converged and err <= tol


def mean_over_segment(f: ConvexFunc, a, b, req: QuadratureRequest = DEFAULT_REQUEST) -> Estimate:
    """Mean of f along the segment from a to b."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if np.allclose(a, b, rtol=0, atol=0):
        raise ValueError("degenerate segment")
    f = _normalize(f, a.size)
    if isinstance(f, Affine):
        return _exact(f(0.5 * (a + b)), 1)
    d = b - a
    value, err, evals, ok = adaptive_gauss_legendre(
        lambda t: f(a + t[:, None] * d), 0.0, 1.0, req.target_error, req.max_subdivisions)
    est = Estimate(value, err, "quadrature", evals)
    if not ok:
        raise BudgetExceeded("segment quadrature did not converge", est)
    return est


# ---------------------------------------------------------------------------
# Simplices
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _degree2_rule(k: int) -> np.ndarray:
    """Barycentric points of the equal-weight degree-2 rule on a k-simplex."""
    beta = (k + 2 - math.sqrt(k + 2)) / ((k + 1) * (k + 2))
    alpha = 1.0 - k * beta
    return np.full((k + 1, k + 1), beta) + np.eye(k + 1) * (alpha - beta)


@lru_cache(maxsize=None)
def _children(k: int) -> np.ndarray:
    """Barycentric vertex matrices of the 2^k edgewise children of a k-simplex."""
    kids = []
    for corner in itertools.product((0, 1), repeat=k):
        for perm in itertools.permutations(range(k)):
            y = np.array(corner, dtype=float)
            path = [y]
            for p in perm:
                y = y.copy()
                y[p] += 1
                path.append(y)
            path = np.array(path)
            if path[:, 0].max() <= 2 and path[:, -1].min() >= 0 and np.all(np.diff(path, axis=1) <= 0):
                kids.append(path / 2)
    Y = np.array(kids)
    return np.concatenate([1 - Y[..., :1], Y[..., :-1] - Y[..., 1:], Y[..., -1:]], axis=-1)


@lru_cache(maxsize=None)
def _grundmann_moeller(k: int, s: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """Barycentric points and weights (summing to one) of the degree 2s+1
    Grundmann-Moeller rule on a k-simplex."""
    d = 2 * s + 1
    points, weights = [], []
    for i in range(s + 1):
        w = (-1) ** i * (d + k - 2 * i) ** d / (math.factorial(i) * math.factorial(d + k - i))
        for beta in itertools.product(range(s - i + 1), repeat=k + 1):
            if sum(beta) == s - i:
                points.append((2 * np.array(beta) + 1) / (d + k - 2 * i))
                weights.append(w)
    weights = np.array(weights)
    return np.array(points), weights / weights.sum()


def _rule_means(f, simplices: np.ndarray, rule=None) -> np.ndarray:
    k = simplices.shape[1] - 1
    if rule is None:
        bary = _degree2_rule(k)
        weights = np.full(k + 1, 1.0 / (k + 1))
    else:
        bary, weights = rule
    pts = np.einsum("qv,svn->sqn", bary, simplices)
    vals = f(pts.reshape(-1, simplices.shape[2])).reshape(len(simplices), len(weights))
    return vals @ weights


def _subdivide(simplices: np.ndarray) -> np.ndarray:
    k = simplices.shape[1] - 1
    kids = np.einsum("cuv,svn->scun", _children(k), simplices)
    return kids.reshape(-1, k + 1, simplices.shape[2])


def _adaptive_simplices(f, simplices, weights, req: QuadratureRequest):
    """Weighted mean of f over simplices by refinement until levels agree.

    ``weights`` are normalized measures (signed weights are allowed).  Each
    level compares the degree-5 rule on a simplex with the sum over its 2^k
    children.  The smallest
    local errors are frozen while they fit in half of the remaining error
    budget; the rest are refined.  Returns ``(value, error, evals,
    converged)``.
    """
    k = simplices.shape[1] - 1
    nkids = 2 ** k
    n = simplices.shape[2]
    rule = _grundmann_moeller(k)
    per = len(rule[1])
    coarse = _rule_means(f, simplices, rule)
    evals = coarse.size * per
    value = spent = 0.0
    S, W = simplices, weights
    for depth in range(req.max_subdivisions + 1):
        kids = _subdivide(S)
        kid_means = _rule_means(f, kids, rule).reshape(len(S), nkids)
        evals += kid_means.size * per
        fine = kid_means.mean(axis=1)
        e = np.abs(W * (fine - coarse))
        remaining = req.target_error - spent
        if e.sum() <= remaining:
            return value + (W * fine).sum(), spent + e.sum(), evals, True
        order = np.argsort(e)
        frozen = np.zeros(len(S), dtype=bool)
        frozen[order[np.cumsum(e[order]) <= 0.5 * remaining]] = True
        refine = ~frozen
        next_evals = evals + refine.sum() * nkids * nkids * per
        if depth == req.max_subdivisions or next_evals > req.max_evaluations:
            err = spent + e.sum()
            return value + (W * fine).sum(), err, evals, err <= req.target_error
        value += (W[frozen] * fine[frozen]).sum()
        spent += e[frozen].sum()
        S = kids.reshape(len(S), nkids, k + 1, n)[refine].reshape(-1, k + 1, n)
        W = np.repeat(W[refine] / nkids, nkids)
        coarse = kid_means[refine].ravel()
    raise AssertionError("unreachable")


def _sample_simplices(rng, simplices, counts):
    k = simplices.shape[1] - 1
    owner = np.repeat(np.arange(len(simplices)), counts)
    lam = rng.dirichlet(np.ones(k + 1), size=owner.size)
    return np.einsum("sv,svn->sn", lam, simplices[owner]), owner


def _mc_simplices(f, simplices, weights, req: QuadratureRequest, stream: int = 0):
    """Stratified Monte Carlo, allocation proportional to simplex measure."""
    ss = np.random.SeedSequence([req.seed, stream])
    total = max(4 * len(simplices), 20_000)
    for round_, child in enumerate(ss.spawn(6)):
        rng = np.random.default_rng(child)
        counts = np.maximum(2, np.round(total * weights).astype(int))
        pts, owner = _sample_simplices(rng, simplices, counts)
        vals = f(pts)
        sums = np.bincount(owner, vals, len(simplices))
        sq = np.bincount(owner, vals * vals, len(simplices))
        means = sums / counts
        var = np.maximum(sq / counts - means ** 2, 0.0) * counts / (counts - 1)
        value = float((weights * means).sum())
        bound = MC_SIGMAS * math.sqrt(float((weights ** 2 * var / counts).sum()))
        est = Estimate(value, bound, "monte-carlo", int(counts.sum()))
        if bound <= req.mc_target_error or counts.sum() * 4 > req.max_evaluations:
            return est
        total *= 4
    return est


def _exp_simplex_means(f: ExpAffine, simplices: np.ndarray) -> np.ndarray:
    """Exact means of exp(a.x + b) over simplices.

    The mean is k! times the divided difference of exp at the vertex values
    z_i, read off the corner of expm of the bidiagonal matrix with the z_i on
    the diagonal.  This stays accurate when vertex values coincide.
    """
    k = simplices.shape[1] - 1
    z = simplices @ f.a + f.b
    top = z.max(axis=1)
    M = np.zeros((len(z), k + 1, k + 1))
    idx = np.arange(k + 1)
    M[:, idx, idx] = z - top[:, None]
    M[:, idx[:-1], idx[1:]] = 1.0
    return math.factorial(k) * expm(M)[:, 0, k] * np.exp(top)


def _simplex_mean(f, simplices, measures_, req, stream=0, exact=False) -> Estimate:
    weights = measures_ / measures_.sum()
    if isinstance(f, ExpAffine):
        return _exact((weights * _exp_simplex_means(f, simplices)).sum(), simplices.shape[0] * simplices.shape[1])
    if exact:
        vals = _rule_means(f, simplices)
        return _exact((weights * vals).sum(), vals.size * simplices.shape[1])
    value, err, evals, ok = _adaptive_simplices(f, simplices, weights, req)
    if ok:
        return Estimate(float(value), float(err), "quadrature", int(evals))
    est = _mc_simplices(f, simplices, weights, req, stream)
    if est.error_bound > req.mc_target_error:
        raise BudgetExceeded("deterministic and Monte Carlo paths both missed the target", est)
    return est


# ---------------------------------------------------------------------------
# Max-affine functions on polytopes: integrate over linearity cells
# ---------------------------------------------------------------------------

def _cell_moments(verts: np.ndarray) -> tuple[float, np.ndarray]:
    """Volume and centroid of the convex hull of full-dimensional ``verts``."""
    d = verts.shape[1]
    c = verts.mean(axis=0)
    if d == 1:
        lo, hi = verts.min(), verts.max()
        return float(hi - lo), np.array([0.5 * (lo + hi)])
    if d == 2:
        rel = verts - c
        order = np.argsort(np.arctan2(rel[:, 1], rel[:, 0]))
        p = rel[order]
        q = np.roll(p, -1, axis=0)
        cross = p[:, 0] * q[:, 1] - p[:, 1] * q[:, 0]
        area = 0.5 * cross.sum()
        cen = ((p + q) * cross[:, None]).sum(axis=0) / (6.0 * area)
        return float(area), c + cen
    hull = ConvexHull(verts)
    tets = np.concatenate([np.broadcast_to(c, (len(hull.simplices), 1, d)), verts[hull.simplices]], axis=1)
    vol = np.abs(np.linalg.det(tets[:, 1:] - tets[:, :1])) / math.factorial(d)
    return float(vol.sum()), (vol[:, None] * tets.mean(axis=1)).sum(axis=0) / vol.sum()


def _maxaffine_integral(A, b, P, q) -> float:
    """Integral of ``max_j(P[j].y + q[j])`` over the polytope ``A y <= b``."""
    d = A.shape[1]
    if d == 1:
        lo = max(-bi / -ai for ai, bi in zip(A[:, 0], b) if ai < 0)
        hi = min(bi / ai for ai, bi in zip(A[:, 0], b) if ai > 0)
        p, s = P[:, 0], q
        dp = p[:, None] - p[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (s[None, :] - s[:, None]) / dp
        t = t[np.isfinite(t) & (t > lo) & (t < hi)]
        knots = np.unique(np.concatenate([[lo, hi], t]))
        mids = 0.5 * (knots[:-1] + knots[1:])
        vals = (np.outer(mids, p) + s).max(axis=1)
        return float((np.diff(knots) * vals).sum())
    total = 0.0
    scale = max(1.0, float(np.abs(b).max()))
    for j in range(len(P)):
        dP = P - P[j]
        dq = q[j] - q
        zero = np.all(np.abs(dP) < 1e-15, axis=1)
        if np.any(zero & (dq < 0)):
            continue
        rows = ~zero
        Aj = np.vstack([A, dP[rows]])
        bj = np.concatenate([b, dq[rows]])
        verts = enumerate_vertices(Aj, bj, 1e-10 * scale)
        if len(verts) < d + 1 or affine_rank(verts, 1e-9 * scale) < d:
            continue
        vol, cen = _cell_moments(verts)
        total += vol * (P[j] @ cen + q[j])
    return total


def _facet_frames(poly: Polytope):
    """Per facet: (origin, orthonormal basis, local A, local b)."""
    cache = poly.__dict__.get("_facet_frames")
    if cache is not None:
        return cache
    frames = []
    n = poly.dim
    for facet in poly.facets:
        V = poly.vertices[list(facet.vertex_ids)]
        o = V.mean(axis=0)
        Q = np.linalg.svd(V - o)[2][:n - 1].T
        Y = (V - o) @ Q
        if n - 1 == 1:
            A_loc = np.array([[1.0], [-1.0]])
            b_loc = np.array([Y.max(), -Y.min()])
        else:
            local = polytope_from_vertices(Y)
            A_loc, b_loc = local.A, local.b
        frames.append((o, Q, A_loc, b_loc))
    poly.__dict__["_facet_frames"] = frames
    return frames


def _maxaffine_facet_integral(poly: Polytope, fid: int, f: MaxAffine) -> float:
    o, Q, A_loc, b_loc = _facet_frames(poly)[fid]
    return _maxaffine_integral(A_loc, b_loc, f.A @ Q, f.A @ o + f.b)


# ---------------------------------------------------------------------------
# Balls
# ---------------------------------------------------------------------------

def _circle_means_maxaffine(f: MaxAffine, C, U, V):
    """Exact means of f over circles ``C + U cos t + V sin t`` (rows)."""
    p, qv, s = U @ f.A.T, V @ f.A.T, C @ f.A.T + f.b
    k = p.shape[1]
    ii, jj = np.triu_indices(k, 1)
    dp, dq, ds = p[:, ii] - p[:, jj], qv[:, ii] - qv[:, jj], s[:, ii] - s[:, jj]
    amp = np.hypot(dp, dq)
    alpha = np.arctan2(dq, dp)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = -ds / amp
    valid = np.abs(ratio) <= 1.0
    delta = np.arccos(np.clip(ratio, -1.0, 1.0))
    knots = np.concatenate([np.where(valid, alpha + delta, 0.0), np.where(valid, alpha - delta, 0.0)], axis=1)
    knots = np.mod(knots, 2 * np.pi)
    knots = np.sort(np.concatenate([knots, np.zeros((len(C), 1)), np.full((len(C), 1), 2 * np.pi)], axis=1), axis=1)
    a, b = knots[:, :-1], knots[:, 1:]
    mid = 0.5 * (a + b)
    vals = (p[:, None, :] * np.cos(mid)[..., None] + qv[:, None, :] * np.sin(mid)[..., None] + s[:, None, :])
    j = vals.argmax(axis=2)
    pj = np.take_along_axis(p, j, axis=1)
    qj = np.take_along_axis(qv, j, axis=1)
    sj = np.take_along_axis(s, j, axis=1)
    integral = pj * (np.sin(b) - np.sin(a)) - qj * (np.cos(b) - np.cos(a)) + sj * (b - a)
    return integral.sum(axis=1) / (2 * np.pi)


def _circle_means_trapezoid(f, C, U, V, tol, max_nodes=1 << 14):
    n_nodes = 32
    prev = None
    while True:
        t = 2 * np.pi * np.arange(n_nodes) / n_nodes
        pts = C[:, None, :] + U[:, None, :] * np.cos(t)[:, None] + V[:, None, :] * np.sin(t)[:, None]
        means = f(pts.reshape(-1, C.shape[1])).reshape(len(C), n_nodes).mean(axis=1)
        if prev is not None and (np.abs(means - prev).max() <= tol or n_nodes >= max_nodes):
            return means
        prev = means
        n_nodes *= 2


def _circle_means(f, C, U, V, tol):
    if isinstance(f, MaxAffine):
        return _circle_means_maxaffine(f, C, U, V)
    return _circle_means_trapezoid(f, C, U, V, tol)


def _ball_circle_args(ball: Ball, rho, z=None):
    """Circle parameters for radius fractions ``rho`` (and heights ``z`` in 3-D)."""
    rho = np.asarray(rho, dtype=float)
    n, R = ball.dim, ball.radius
    e = np.eye(n)
    if n == 2:
        C = np.broadcast_to(ball.center, (rho.size, n))
        return C, R * rho[:, None] * e[0], R * rho[:, None] * e[1]
    z = np.asarray(z, dtype=float)
    w = R * rho * np.sqrt(np.clip(1 - z * z, 0, None))
    C = ball.center + (R * rho * z)[:, None] * e[2]
    return C, w[:, None] * e[0], w[:, None] * e[1]


def _sphere_mean_3d(f, ball: Ball, rho: float, tol: float, max_depth: int):
    def g(z):
        C, U, V = _ball_circle_args(ball, np.full(z.size, rho), z)
        return 0.5 * _circle_means(f, C, U, V, tol / 4)
    return adaptive_gauss_legendre(g, -1.0, 1.0, tol / 2, max_depth)


def _ball_boundary_mean(f, ball: Ball, req: QuadratureRequest) -> Estimate:
    n, tol = ball.dim, req.target_error
    if n == 2:
        C, U, V = _ball_circle_args(ball, np.ones(1))
        exact = isinstance(f, MaxAffine)
        val = float(_circle_means(f, C, U, V, tol / 2)[0])
        return Estimate(val, 0.0 if exact else tol / 2, "quadrature", 0)
    if n == 3:
        value, err, evals, ok = _sphere_mean_3d(f, ball, 1.0, tol, 30)
        est = Estimate(value, err + tol / 4, "quadrature", evals)
        if not ok:
            raise BudgetExceeded("sphere quadrature did not converge", est)
        return est
    return _ball_mc(f, ball, req, surface=True)


def _ball_body_mean(f, ball: Ball, req: QuadratureRequest) -> Estimate:
    n, tol = ball.dim, req.target_error
    if n == 2:
        def g(rho):
            C, U, V = _ball_circle_args(ball, rho)
            return 2 * rho * _circle_means(f, C, U, V, tol / 4)
        value, err, evals, ok = adaptive_gauss_legendre(g, 0.0, 1.0, tol / 2, 30)
        extra = 0.0 if isinstance(f, MaxAffine) else tol / 4
        est = Estimate(value, err + extra, "quadrature", evals)
    elif n == 3:
        inner_err = [0.0]

        def g(rho):
            out = np.empty(rho.size)
            for i, r in enumerate(rho):
                v, e, _, _ = _sphere_mean_3d(f, ball, float(r), tol / 2, 30)
                out[i] = 3 * r * r * v
                inner_err[0] = max(inner_err[0], e)
            return out
        value, err, evals, ok = adaptive_gauss_legendre(g, 0.0, 1.0, tol / 2, 30)
        est = Estimate(value, err + inner_err[0] + tol / 8, "quadrature", evals)
    else:
        return _ball_mc(f, ball, req, surface=False)
    if not ok:
        raise BudgetExceeded("ball quadrature did not converge", est)
    return est


def _ball_mc(f, ball: Ball, req: QuadratureRequest, surface: bool) -> Estimate:
    """Antithetic Monte Carlo on the ball or its sphere (normalized Gaussians)."""
    n = ball.dim
    pairs = 50_000
    ss = np.random.SeedSequence([req.seed, 1 if surface else 2])
    for child in ss.spawn(6):
        rng = np.random.default_rng(child)
        g = rng.standard_normal((pairs, n))
        u = g / np.linalg.norm(g, axis=1, keepdims=True)
        r = 1.0 if surface else rng.uniform(size=(pairs, 1)) ** (1.0 / n)
        off = ball.radius * r * u
        vals = 0.5 * (f(ball.center + off) + f(ball.center - off))
        bound = MC_SIGMAS * vals.std(ddof=1) / math.sqrt(pairs)
        est = Estimate(float(vals.mean()), float(bound), "monte-carlo", 2 * pairs)
        if bound <= req.mc_target_error or 8 * pairs > req.max_evaluations:
            return est
        pairs *= 4
    return est


def _ball_quadform(f: QuadForm, ball: Ball, surface: bool) -> float:
    n, R, c = ball.dim, ball.radius, ball.center
    second = R * R / (n if surface else n + 2)
    H = f.hessian_half
    return float(second * np.trace(H) + c @ H @ c + f.a @ c + f.b)


# ---------------------------------------------------------------------------
# Parallelotopes beyond the polytope dimension cap
# ---------------------------------------------------------------------------

def _parallelotope_quadform(f: QuadForm, par: Parallelotope, surface: bool) -> float:
    H = f.hessian_half
    E = par.edges
    if not surface:
        mean = par.origin + 0.5 * E.sum(axis=0)
        cov = E.T @ E / 12.0
        return float(np.trace(H @ cov) + mean @ H @ mean + f.a @ mean + f.b)
    total = 0.0
    weight = 0.0
    for i, (origin, F, shift) in enumerate(par.facet_pairs()):
        area = float(np.sqrt(np.linalg.det(F @ F.T)))
        mean = origin + 0.5 * E.sum(axis=0)
        cov = F.T @ F / 12.0 + np.outer(shift, shift) / 4.0
        total += area * (np.trace(H @ cov) + mean @ H @ mean + f.a @ mean + f.b)
        weight += area
    return float(total / weight)


def _parallelotope_mc(f, par: Parallelotope, req: QuadratureRequest, surface: bool) -> Estimate:
    n = par.dim
    areas = np.array([np.sqrt(np.linalg.det(F @ F.T)) for _, F, _ in par.facet_pairs()])
    count = 200_000
    for child in np.random.SeedSequence([req.seed, 3 if surface else 4]).spawn(6):
        rng = np.random.default_rng(child)
        U = rng.uniform(size=(count, n))
        if surface:
            which = rng.choice(n, size=count, p=areas / areas.sum())
            U[np.arange(count), which] = rng.integers(0, 2, size=count)
        vals = f(par.origin + U @ par.edges)
        bound = MC_SIGMAS * vals.std(ddof=1) / math.sqrt(count)
        est = Estimate(float(vals.mean()), float(bound), "monte-carlo", count)
        if bound <= req.mc_target_error or 4 * count > req.max_evaluations:
            return est
        count *= 4
    return est


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------

def _polytope_of(shape):
    if isinstance(shape, Polytope):
        return shape
    if isinstance(shape, Cone):
        return shape.polytope
    if isinstance(shape, Parallelotope) and shape.dim <= 4:
        return shape.polytope
    return None


def _norm_body_mean(poly: Polytope, f: PNorm, req: QuadratureRequest):
    """Body mean of a norm centred at c, reduced to boundary means.

    ||x - c|| is homogeneous of degree one about c, so over the cone from c
    to a boundary simplex its mean is n/(n+1) times the mean over the base.
    Cones from an exterior c enter with negative signed height.  The base
    integrands are smooth unless c lies on the facet plane, where the cone
    is flat and dropped.  Returns None if the refinement does not converge.
    """
    n = poly.dim
    ids = poly.boundary_facet_ids
    heights = poly.b[ids] - poly.A[ids] @ f.center
    keep = np.abs(heights) > GEOM_TOL * max(1.0, poly.diameter)
    vol = float(poly.body_measures.sum())
    weights = heights[keep] * poly.boundary_measures[keep] / ((n + 1) * vol)
    value, err, evals, ok = _adaptive_simplices(f, poly.boundary_simplices[keep], weights, req)
    if not ok:
        return None
    return Estimate(float(value), float(err), "quadrature", int(evals))


def mean_over_body(shape, f: ConvexFunc, req: QuadratureRequest = DEFAULT_REQUEST) -> Estimate:
    """Average of f over the body of ``shape``."""
    f = _normalize(f, shape.dim)
    if isinstance(f, Affine):
        return _exact(f.a @ body_centroid(shape) + f.b)
    if isinstance(shape, Ball):
        if isinstance(f, QuadForm):
            return _exact(_ball_quadform(f, shape, surface=False))
        return _ball_body_mean(f, shape, req)
    if isinstance(shape, Parallelotope) and isinstance(f, QuadForm):
        return _exact(_parallelotope_quadform(f, shape, surface=False))
    poly = _polytope_of(shape)
    if poly is None:
        return _parallelotope_mc(f, shape, req, surface=False)
    if isinstance(f, MaxAffine):
        vol = float(poly.body_measures.sum())
        return _exact(_maxaffine_integral(poly.A, poly.b, f.A, f.b) / vol)
    if isinstance(f, PNorm):
        est = _norm_body_mean(poly, f, req)
        if est is not None:
            return est
    return _simplex_mean(f, poly.body_simplices, poly.body_measures, req, stream=10,
                         exact=isinstance(f, QuadForm))


def mean_over_boundary(shape, f: ConvexFunc, req: QuadratureRequest = DEFAULT_REQUEST) -> Estimate:
    """Average of f over the boundary of ``shape`` w.r.t. surface measure."""
    f = _normalize(f, shape.dim)
    if isinstance(f, Affine):
        return _exact(f.a @ boundary_centroid(shape) + f.b)
    if isinstance(shape, Ball):
        if isinstance(f, QuadForm):
            return _exact(_ball_quadform(f, shape, surface=True))
        return _ball_boundary_mean(f, shape, req)
    if isinstance(shape, Parallelotope) and isinstance(f, QuadForm):
        return _exact(_parallelotope_quadform(f, shape, surface=True))
    poly = _polytope_of(shape)
    if poly is None:
        return _parallelotope_mc(f, shape, req, surface=True)
    if isinstance(f, MaxAffine):
        total = sum(_maxaffine_facet_integral(poly, i, f) for i in range(len(poly.facets)))
        return _exact(total / float(poly.boundary_measures.sum()))
    return _simplex_mean(f, poly.boundary_simplices, poly.boundary_measures, req, stream=11,
                         exact=isinstance(f, QuadForm))


def mean_over_facet(poly: Polytope, facet_id: int, f: ConvexFunc,
                    req: QuadratureRequest = DEFAULT_REQUEST) -> Estimate:
    """Average of f over one facet of a polytope."""
    f = _normalize(f, poly.dim)
    mask = poly.boundary_facet_ids == facet_id
    simplices, meas = poly.boundary_simplices[mask], poly.boundary_measures[mask]
    if isinstance(f, Affine):
        cen = (meas[:, None] * simplices.mean(axis=1)).sum(axis=0) / meas.sum()
        return _exact(f.a @ cen + f.b)
    if isinstance(f, MaxAffine):
        return _exact(_maxaffine_facet_integral(poly, facet_id, f) / meas.sum())
    return _simplex_mean(f, simplices, meas, req, stream=100 + facet_id, exact=isinstance(f, QuadForm))


def mean_over_cone_base(cone: Cone, f: ConvexFunc, req: QuadratureRequest = DEFAULT_REQUEST) -> Estimate:
    return mean_over_facet(cone.polytope, cone.base_facet, f, req)


def shape_measures(shape):
    return measures(shape)

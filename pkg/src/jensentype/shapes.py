"""Convex bodies: polytopes, parallelotopes, balls and cones.

Polytopes keep both representations (vertices and facet halfspaces) and
carry fan triangulations of the body and of the boundary.  Everything is
immutable after construction.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from . import lp
from .errors import DegenerateInput, EmptyRegion, UnboundedRegion, UnsupportedDimension

GEOM_TOL = 1e-9
SUPPORTED_POLYTOPE_DIMS = (2, 3, 4)


def _tol(points) -> float:
    scale = float(np.abs(points).max(initial=0.0))
    return GEOM_TOL * max(1.0, scale)


def affine_rank(points: np.ndarray, tol: float = GEOM_TOL) -> int:
    points = np.asarray(points, dtype=float)
    if len(points) <= 1:
        return 0
    s = np.linalg.svd(points[1:] - points[0], compute_uv=False)
    return int((s > tol).sum())


def dedupe_points(points: np.ndarray, tol: float = GEOM_TOL) -> np.ndarray:
    """Drop points closer than ``tol`` to an earlier point."""
    points = np.asarray(points, dtype=float)
    if len(points) < 2:
        return points
    dist = np.sqrt(((points[:, None, :] - points[None, :, :]) ** 2).sum(-1))
    dup = np.triu(dist <= tol, 1).any(axis=0)
    return points[~dup]


@lru_cache(maxsize=None)
def _subsets(m: int, n: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(m), n)), dtype=int).reshape(-1, n)


@dataclass(frozen=True)
class HalfSpace:
    """The set ``{x : normal . x <= offset}`` with a unit normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        normal = np.asarray(self.normal, dtype=float)
        if abs(np.linalg.norm(normal) - 1.0) > 1e-12:
            raise ValueError("halfspace normal must have unit length")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def from_raw(cls, normal, offset) -> "HalfSpace":
        normal = np.asarray(normal, dtype=float)
        norm = np.linalg.norm(normal)
        if norm == 0.0:
            raise DegenerateInput("halfspace normal is zero")
        return cls(normal / norm, float(offset) / norm)

    def residual(self, x) -> np.ndarray:
        return np.asarray(x) @ self.normal - self.offset


def simplex_measures(simplices: np.ndarray) -> np.ndarray:
    """k-dimensional measures of a stack of simplices, shape (S, k+1, n)."""
    simplices = np.asarray(simplices, dtype=float)
    k = simplices.shape[1] - 1
    if k == 0:
        return np.ones(len(simplices))
    E = simplices[:, 1:] - simplices[:, :1]
    gram = E @ np.swapaxes(E, 1, 2)
    det = np.clip(np.linalg.det(gram), 0.0, None)
    return np.sqrt(det) / math.factorial(k)


@dataclass(frozen=True)
class Simplex:
    vertices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vertices", np.asarray(self.vertices, dtype=float))

    @property
    def kdim(self) -> int:
        return len(self.vertices) - 1

    @property
    def measure(self) -> float:
        return float(simplex_measures(self.vertices[None])[0])

    @property
    def centroid(self) -> np.ndarray:
        return self.vertices.mean(axis=0)


@dataclass(frozen=True)
class Facet:
    halfspace: HalfSpace
    vertex_ids: tuple[int, ...]


class Polytope:
    """Full-dimensional convex polytope in R^n, n in {2, 3, 4}.

    Build with :func:`polytope_from_vertices` or
    :func:`polytope_from_halfspaces` rather than directly.
    """

    def __init__(self, vertices: np.ndarray, facets: list[Facet]):
        self.vertices = np.asarray(vertices, dtype=float)
        self.vertices.setflags(write=False)
        self.facets = list(facets)
        self.dim = self.vertices.shape[1]

    def __repr__(self):
        return f"Polytope(dim={self.dim}, vertices={len(self.vertices)}, facets={len(self.facets)})"

    @property
    def tol(self) -> float:
        return _tol(self.vertices)

    @property
    def A(self) -> np.ndarray:
        return np.array([f.halfspace.normal for f in self.facets])

    @property
    def b(self) -> np.ndarray:
        return np.array([f.halfspace.offset for f in self.facets])

    @property
    def halfspaces(self) -> list[HalfSpace]:
        return [f.halfspace for f in self.facets]

    def contains(self, x, tol: float = GEOM_TOL) -> np.ndarray:
        x = np.atleast_2d(x)
        return np.all(x @ self.A.T <= self.b + tol, axis=1)

    @cached_property
    def diameter(self) -> float:
        d = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((d ** 2).sum(-1)).max())

    @cached_property
    def _triangulation(self):
        return _fan_triangulation(self)

    @property
    def body_simplices(self) -> np.ndarray:
        """Body simplices as an array of shape (S, n+1, n)."""
        return self._triangulation[0]

    @property
    def boundary_simplices(self) -> np.ndarray:
        """Boundary simplices as an array of shape (S, n, n)."""
        return self._triangulation[1]

    @property
    def boundary_facet_ids(self) -> np.ndarray:
        return self._triangulation[2]

    @cached_property
    def body_measures(self) -> np.ndarray:
        return simplex_measures(self.body_simplices)

    @cached_property
    def boundary_measures(self) -> np.ndarray:
        return simplex_measures(self.boundary_simplices)

    @cached_property
    def facet_measures(self) -> np.ndarray:
        return np.bincount(self.boundary_facet_ids, weights=self.boundary_measures,
                           minlength=len(self.facets))

    def transformed(self, matrix, shift) -> "Polytope":
        """Image under ``x -> matrix @ x + shift``."""
        matrix = np.asarray(matrix, dtype=float)
        return polytope_from_vertices(self.vertices @ matrix.T + np.asarray(shift, dtype=float))


def _check_dim(n: int) -> None:
    if n not in SUPPORTED_POLYTOPE_DIMS:
        raise UnsupportedDimension(f"polytopes are supported for n in {SUPPORTED_POLYTOPE_DIMS}, got {n}")


def polytope_from_vertices(points) -> Polytope:
    """Convex hull of ``points`` by exhaustive n-subset hyperplane testing."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise DegenerateInput("points must be a 2-d array")
    n = pts.shape[1]
    _check_dim(n)
    if not np.all(np.isfinite(pts)):
        raise DegenerateInput("non-finite coordinates")
    tol = _tol(pts)
    pts = dedupe_points(pts, tol)
    if len(pts) < n + 1 or affine_rank(pts, tol) < n:
        raise DegenerateInput("affine hull is not full-dimensional")

    combos = _subsets(len(pts), n)
    P = pts[combos]
    _, s, vt = np.linalg.svd(P[:, 1:] - P[:, :1])
    ok = s[:, -1] > tol
    normals = vt[ok, -1, :]
    offsets = np.einsum("ij,ij->i", normals, P[ok, 0])
    R = pts @ normals.T - offsets
    below = np.all(R <= tol, axis=0)
    above = np.all(R >= -tol, axis=0)
    normals = np.vstack([normals[below], -normals[above]])
    offsets = np.concatenate([offsets[below], -offsets[above]])

    planes: list[tuple[np.ndarray, float]] = []
    for a, c in zip(normals, offsets):
        if not any(np.abs(a - a2).max() < 1e-9 and abs(c - c2) <= tol for a2, c2 in planes):
            planes.append((a, c))
    on = [np.flatnonzero(np.abs(pts @ a - c) <= tol) for a, c in planes]

    # Extreme points: the normals of facets through them span R^n.
    incident: list[list[int]] = [[] for _ in range(len(pts))]
    for j, ids in enumerate(on):
        for i in ids:
            incident[i].append(j)
    keep = [i for i in range(len(pts))
            if incident[i] and np.linalg.matrix_rank(np.array([planes[j][0] for j in incident[i]]), tol=1e-9) == n]
    remap = {old: new for new, old in enumerate(keep)}
    facets = [Facet(HalfSpace.from_raw(a, c), tuple(remap[i] for i in ids if i in remap))
              for (a, c), ids in zip(planes, on)]
    return Polytope(pts[keep], facets)


def enumerate_vertices(A, b, tol: float = GEOM_TOL) -> np.ndarray:
    """Vertices of ``{x : A x <= b}`` from all n-subsets of constraints."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    m, n = A.shape
    norms = np.linalg.norm(A, axis=1)
    A = A / norms[:, None]
    b = b / norms
    if m < n:
        return np.empty((0, n))
    combos = _subsets(m, n)
    M = A[combos]
    det = np.linalg.det(M)
    good = np.abs(det) > 1e-12
    if not good.any():
        return np.empty((0, n))
    X = np.linalg.solve(M[good], b[combos[good]][..., None])[..., 0]
    feasible = np.all(X @ A.T <= b + tol, axis=1)
    return dedupe_points(X[feasible], tol)


def _unbounded(A: np.ndarray) -> bool:
    n = A.shape[1]
    box = np.vstack([A, np.eye(n), -np.eye(n)])
    rhs = np.concatenate([np.zeros(len(A)), np.ones(2 * n)])
    for i in range(n):
        for sign in (1.0, -1.0):
            c = np.zeros(n)
            c[i] = -sign
            res = lp.linprog(c, box, rhs)
            if res.status == "optimal" and -res.fun > 1e-9:
                return True
    return False


def polytope_from_halfspaces(halfspaces) -> Polytope:
    """Bounded intersection of halfspaces; redundant halfspaces are dropped."""
    hs = list(halfspaces)
    if not hs:
        raise UnboundedRegion("no halfspaces")
    A = np.array([h.normal for h in hs])
    b = np.array([h.offset for h in hs])
    n = A.shape[1]
    _check_dim(n)
    if _unbounded(A):
        raise UnboundedRegion("intersection has a recession direction")
    # Chebyshev radius with a free sign tells empty / flat / full-dimensional.
    res = lp.linprog(np.r_[np.zeros(n), -1.0], np.hstack([A, np.ones((len(A), 1))]), b)
    if res.status != "optimal":
        raise EmptyRegion("halfspace system is infeasible")
    radius = -res.fun
    tol = _tol(np.r_[b, res.x])
    if radius < -tol:
        raise EmptyRegion("halfspace intersection is empty")
    if radius <= tol:
        raise DegenerateInput("halfspace intersection is not full-dimensional")

    verts = enumerate_vertices(A, b, tol)
    tol = _tol(verts)
    facets: list[Facet] = []
    seen: set[tuple[int, ...]] = set()
    for h in hs:
        ids = tuple(np.flatnonzero(np.abs(verts @ h.normal - h.offset) <= tol).tolist())
        if len(ids) >= n and ids not in seen and affine_rank(verts[list(ids)], tol) == n - 1:
            seen.add(ids)
            facets.append(Facet(h, ids))
    return Polytope(verts, facets)


def _face_fans(V: np.ndarray, facet_sets: list[frozenset], face: frozenset, d: int, tol: float):
    """Simplices (as vertex arrays) of a fan triangulation of a d-face."""
    ids = sorted(face)
    if d == 1:
        pts = V[ids]
        if len(pts) > 2:
            dist = np.linalg.norm(pts[:, None] - pts[None], axis=-1)
            i, j = np.unravel_index(np.argmax(dist), dist.shape)
            pts = pts[[i, j]]
        return [pts]
    subfaces = set()
    for F in facet_sets:
        sub = face & F
        if len(sub) >= d and sub != face and affine_rank(V[sorted(sub)], tol) == d - 1:
            subfaces.add(frozenset(sub))
    center = V[ids].mean(axis=0)
    out = []
    for sub in sorted(subfaces, key=sorted):
        for s in _face_fans(V, facet_sets, sub, d - 1, tol):
            out.append(np.vstack([center, s]))
    return out


def _fan_triangulation(poly: Polytope):
    V, n, tol = poly.vertices, poly.dim, poly.tol
    facet_sets = [frozenset(f.vertex_ids) for f in poly.facets]
    boundary, ids = [], []
    for fid, F in enumerate(facet_sets):
        for s in _face_fans(V, facet_sets, F, n - 1, tol):
            boundary.append(s)
            ids.append(fid)
    boundary = np.array(boundary)
    center = V.mean(axis=0)
    body = np.concatenate([np.broadcast_to(center, (len(boundary), 1, n)), boundary], axis=1)
    # Orient every body simplex positively.
    det = np.linalg.det(body[:, 1:] - body[:, :1])
    flip = det < 0
    body[flip, 1], body[flip, 2] = body[flip, 2].copy(), body[flip, 1].copy()
    return body, boundary, np.array(ids, dtype=int)


def triangulate(shape: Polytope) -> tuple[list[Simplex], list[tuple[int, Simplex]]]:
    body = [Simplex(s) for s in shape.body_simplices]
    boundary = [(int(f), Simplex(s)) for f, s in zip(shape.boundary_facet_ids, shape.boundary_simplices)]
    return body, boundary


@dataclass(frozen=True)
class Parallelotope:
    """``origin + sum_i t_i * edges[i]`` for t in [0, 1]^n; n <= 10 supported."""

    origin: np.ndarray
    edges: np.ndarray

    def __post_init__(self):
        origin = np.asarray(self.origin, dtype=float)
        edges = np.atleast_2d(np.asarray(self.edges, dtype=float))
        if edges.shape != (origin.size, origin.size):
            raise DegenerateInput("need n edge vectors in R^n")
        if abs(np.linalg.det(edges)) < 1e-12:
            raise DegenerateInput("edge vectors are linearly dependent")
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "edges", edges)

    @property
    def dim(self) -> int:
        return self.origin.size

    @cached_property
    def vertices(self) -> np.ndarray:
        corners = np.array(list(itertools.product((0.0, 1.0), repeat=self.dim)))
        return self.origin + corners @ self.edges

    @cached_property
    def diameter(self) -> float:
        return max(float(np.linalg.norm(np.asarray(s) @ self.edges))
                   for s in itertools.product((-1.0, 1.0), repeat=self.dim))

    def facet_pairs(self):
        """Yield ``(facet_origin, facet_edges, shift)`` for each opposite pair.

        The facet ``S_i`` spans all edges but the i-th from the origin; its
        opposite facet is ``S_i`` translated by ``shift = edges[i]``.
        """
        for i in range(self.dim):
            yield self.origin, np.delete(self.edges, i, axis=0), self.edges[i]

    @cached_property
    def polytope(self) -> Polytope:
        return polytope_from_vertices(self.vertices)


@dataclass(frozen=True)
class Ball:
    dim: int
    center: np.ndarray
    radius: float

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float)
        if self.dim < 2 or center.shape != (self.dim,):
            raise DegenerateInput("ball needs n >= 2 and a center in R^n")
        if not self.radius > 0:
            raise DegenerateInput("ball radius must be positive")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius


@dataclass(frozen=True, eq=False)
class Cone:
    """``conv(base, apex)`` for an (n-1)-dimensional polytopal base."""

    base_vertices: np.ndarray
    apex: np.ndarray
    polytope: Polytope = field(init=False, repr=False)
    base_facet: int = field(init=False)
    height: float = field(init=False)

    def __post_init__(self):
        base = np.atleast_2d(np.asarray(self.base_vertices, dtype=float))
        apex = np.asarray(self.apex, dtype=float)
        n = apex.size
        if base.shape[1] != n:
            raise DegenerateInput("base and apex dimensions differ")
        tol = _tol(np.vstack([base, apex]))
        if affine_rank(base, tol) != n - 1:
            raise DegenerateInput("base vertices must span a hyperplane")
        center = base.mean(axis=0)
        normal = np.linalg.svd(base - center)[2][-1]
        height = abs(float((apex - center) @ normal))
        if height <= tol:
            raise DegenerateInput("apex lies on the base hyperplane")
        poly = polytope_from_vertices(np.vstack([base, apex]))
        apex_id = int(np.argmin(np.linalg.norm(poly.vertices - apex, axis=1)))
        base_facet = next(j for j, f in enumerate(poly.facets)
                          if apex_id not in f.vertex_ids
                          and abs(abs(f.halfspace.normal @ normal) - 1.0) < 1e-9)
        object.__setattr__(self, "base_vertices", base)
        object.__setattr__(self, "apex", apex)
        object.__setattr__(self, "polytope", poly)
        object.__setattr__(self, "base_facet", base_facet)
        object.__setattr__(self, "height", height)

    @property
    def dim(self) -> int:
        return self.apex.size

    @property
    def diameter(self) -> float:
        return self.polytope.diameter

    @property
    def base_measure(self) -> float:
        return float(self.polytope.facet_measures[self.base_facet])


Shape = Polytope | Parallelotope | Ball | Cone

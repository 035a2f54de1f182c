"""Named shapes and seeded random generators."""

from __future__ import annotations

import itertools
import math

import numpy as np

from .errors import DegenerateInput, EmptyRegion, GenerationFailed, NumericalFailure, UnboundedRegion
from .insphere import chebyshev_center
from .measures import boundary_centroid
from .shapes import Ball, Cone, HalfSpace, Parallelotope, Polytope, polytope_from_halfspaces, polytope_from_vertices

PHI = (1 + math.sqrt(5)) / 2
PLATONIC = ("tetrahedron", "cube", "octahedron", "dodecahedron", "icosahedron")
_MIN_NORMAL_ANGLE = math.radians(5.0)


def make_parallelotope(origin, edges) -> Parallelotope:
    return Parallelotope(origin, edges)


def make_cube(n: int, half_width: float = 1.0) -> Parallelotope:
    return Parallelotope(-half_width * np.ones(n), 2 * half_width * np.eye(n))


def make_ball(n: int, center=None, r: float = 1.0) -> Ball:
    return Ball(n, np.zeros(n) if center is None else center, r)


def triangle_t() -> Polytope:
    """The 45-45-90 triangle with vertices (0,-1), (0,1), (1,0)."""
    return polytope_from_vertices([[0.0, -1.0], [0.0, 1.0], [1.0, 0.0]])


def make_regular_polygon(k: int, circumradius: float = 1.0) -> Polytope:
    if k < 3:
        raise DegenerateInput("a polygon needs at least 3 sides")
    t = 2 * np.pi * np.arange(k) / k
    return polytope_from_vertices(circumradius * np.column_stack([np.cos(t), np.sin(t)]))


def _cyclic(triples):
    out = []
    for p in triples:
        for s in range(3):
            out.append(np.roll(p, s))
    return out


def platonic_vertices(name: str) -> np.ndarray:
    signs = list(itertools.product((-1.0, 1.0), repeat=3))
    if name == "cube":
        return np.array(signs)
    if name == "tetrahedron":
        return np.array([s for s in signs if s[0] * s[1] * s[2] > 0])
    if name == "octahedron":
        return np.vstack([np.eye(3), -np.eye(3)])
    if name == "icosahedron":
        return np.array(_cyclic([(0.0, a, b * PHI) for a in (-1, 1) for b in (-1, 1)]))
    if name == "dodecahedron":
        extra = _cyclic([(0.0, a / PHI, b * PHI) for a in (-1, 1) for b in (-1, 1)])
        return np.vstack([np.array(signs), np.array(extra)])
    raise ValueError(f"unknown Platonic solid {name!r}; expected one of {PLATONIC}")


def make_platonic(name: str, scale: float = 1.0) -> Polytope:
    poly = polytope_from_vertices(scale * platonic_vertices(name))
    ins = chebyshev_center(poly)
    if not ins.tangent_to_all or np.linalg.norm(ins.center - boundary_centroid(poly)) >= 1e-8:
        raise NumericalFailure(f"{name} failed insphere validation")
    return poly


def make_cone(base_vertices, apex) -> Cone:
    return Cone(base_vertices, apex)


def _unit_normals(rng, n: int, k: int, max_draws: int = 10_000) -> np.ndarray:
    normals: list[np.ndarray] = []
    cos_min = math.cos(_MIN_NORMAL_ANGLE)
    for _ in range(max_draws):
        if len(normals) == k:
            break
        u = rng.standard_normal(n)
        u /= np.linalg.norm(u)
        if all(u @ v < cos_min for v in normals):
            normals.append(u)
    return np.array(normals)


def random_tangent_polytope(n: int, k: int, seed: int = 0, retries: int = 100) -> Polytope:
    """Random polytope circumscribed about the unit sphere at the origin.

    Each of the k halfspaces is ``u . x <= 1`` for a random unit normal u,
    so every facet that survives redundancy removal touches the sphere.
    """
    for attempt in range(retries):
        rng = np.random.default_rng(np.random.SeedSequence([seed, attempt]))
        U = _unit_normals(rng, n, k)
        if len(U) < k:
            continue
        try:
            poly = polytope_from_halfspaces([HalfSpace(u, 1.0) for u in U])
        except (UnboundedRegion, EmptyRegion, DegenerateInput):
            continue
        ins = chebyshev_center(poly)
        if ins.tangent_to_all:
            return poly
    raise GenerationFailed(f"no bounded tangent polytope with n={n}, k={k} after {retries} attempts")


def random_parallelotope(n: int, seed: int = 0, min_det: float = 0.1) -> Parallelotope:
    rng = np.random.default_rng(np.random.SeedSequence([seed, n, 17]))
    while True:
        E = rng.uniform(-1, 1, (n, n))
        if abs(np.linalg.det(E)) >= min_det:
            return Parallelotope(rng.uniform(-1, 1, n), E)


def random_cone(n: int, seed: int = 0) -> Cone:
    """Cone over a random convex base in the hyperplane x_n = 0."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, n, 29]))
    if n == 2:
        a, b = sorted(rng.uniform(-1, 1, 2))
        base = np.array([[a - 0.1, 0.0], [b + 0.1, 0.0]])
    else:
        m = int(rng.integers(n, n + 5))
        while True:
            pts = rng.uniform(-1, 1, (m, n - 1))
            try:
                polytope_from_vertices(pts) if n - 1 >= 2 else None
                break
            except DegenerateInput:
                continue
        base = np.hstack([pts, np.zeros((m, 1))])
    apex = np.r_[rng.uniform(-1, 1, n - 1), rng.uniform(0.3, 2.0) * rng.choice([-1, 1])]
    return Cone(base, apex)


ZOO_NAMES = (
    ["triangle-T"]
    + [f"regular-polygon:{k}" for k in range(3, 13)]
    + [f"platonic:{p}" for p in PLATONIC]
    + [f"ball:{n}" for n in range(2, 6)]
    + [f"cube:{n}" for n in range(2, 5)]
)


def zoo_shape(name: str):
    kind, _, arg = name.partition(":")
    if kind == "triangle-T":
        return triangle_t()
    if kind == "regular-polygon":
        return make_regular_polygon(int(arg))
    if kind == "platonic":
        return make_platonic(arg)
    if kind == "ball":
        return make_ball(int(arg))
    if kind == "cube":
        return make_cube(int(arg))
    raise ValueError(f"unknown zoo shape {name!r}")

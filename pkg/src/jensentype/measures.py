"""Volumes, boundary measures and centers of mass of bodies and boundaries."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import singledispatch

import numpy as np

from .shapes import Ball, Cone, Parallelotope, Polytope, Shape, simplex_measures

CENTROID_TOL = 1e-8


def ball_volume(n: int, r: float = 1.0) -> float:
    return math.pi ** (n / 2) * r ** n / math.gamma(n / 2 + 1)


def sphere_area(n: int, r: float = 1.0) -> float:
    """(n-1)-measure of the sphere bounding the n-ball of radius r."""
    return 2.0 * math.pi ** (n / 2) * r ** (n - 1) / math.gamma(n / 2)


@singledispatch
def measures(shape) -> tuple[float, float]:
    """Return ``(volume, boundary measure)``."""
    raise TypeError(f"not a shape: {type(shape).__name__}")


@measures.register
def _(shape: Polytope):
    return float(shape.body_measures.sum()), float(shape.boundary_measures.sum())


@measures.register
def _(shape: Parallelotope):
    area = sum(float(np.sqrt(np.linalg.det(E @ E.T))) for _, E, _ in shape.facet_pairs())
    return abs(float(np.linalg.det(shape.edges))), 2.0 * area


@measures.register
def _(shape: Ball):
    return ball_volume(shape.dim, shape.radius), sphere_area(shape.dim, shape.radius)


@measures.register
def _(shape: Cone):
    return measures(shape.polytope)


def _weighted_centroid(simplices: np.ndarray, weights: np.ndarray) -> np.ndarray:
    return (weights[:, None] * simplices.mean(axis=1)).sum(axis=0) / weights.sum()


@singledispatch
def body_centroid(shape) -> np.ndarray:
    raise TypeError(f"not a shape: {type(shape).__name__}")


@body_centroid.register
def _(shape: Polytope):
    return _weighted_centroid(shape.body_simplices, shape.body_measures)


@body_centroid.register
def _(shape: Parallelotope):
    return shape.origin + 0.5 * shape.edges.sum(axis=0)


@body_centroid.register
def _(shape: Ball):
    return shape.center.copy()


@body_centroid.register
def _(shape: Cone):
    return body_centroid(shape.polytope)


@singledispatch
def boundary_centroid(shape) -> np.ndarray:
    raise TypeError(f"not a shape: {type(shape).__name__}")


@boundary_centroid.register
def _(shape: Polytope):
    return _weighted_centroid(shape.boundary_simplices, shape.boundary_measures)


@boundary_centroid.register
def _(shape: Parallelotope):
    total = 0.0
    moment = np.zeros(shape.dim)
    for origin, E, shift in shape.facet_pairs():
        area = float(np.sqrt(np.linalg.det(E @ E.T)))
        c = origin + 0.5 * E.sum(axis=0)
        moment += area * (2.0 * c + shift)
        total += 2.0 * area
    return moment / total


@boundary_centroid.register
def _(shape: Ball):
    return shape.center.copy()


@boundary_centroid.register
def _(shape: Cone):
    return boundary_centroid(shape.polytope)


def centroid_gap(shape: Shape) -> float:
    """Distance between the centers of mass of the body and of its boundary.

    A value above :data:`CENTROID_TOL` rules the shape out as Jensen-type:
    the coordinate projections and their negatives are all convex.
    """
    return float(np.linalg.norm(body_centroid(shape) - boundary_centroid(shape)))


@dataclass
class CentroidReport:
    body_centroid: np.ndarray
    boundary_centroid: np.ndarray
    volume: float
    surface_measure: float
    centroid_gap: float

    def to_dict(self) -> dict:
        return {
            "bodyCentroid": self.body_centroid.tolist(),
            "boundaryCentroid": self.boundary_centroid.tolist(),
            "volume": self.volume,
            "surfaceMeasure": self.surface_measure,
            "centroidGap": self.centroid_gap,
        }


def centroid_report(shape: Shape) -> CentroidReport:
    vol, area = measures(shape)
    bc, mc = body_centroid(shape), boundary_centroid(shape)
    return CentroidReport(bc, mc, vol, area, float(np.linalg.norm(bc - mc)))


def cone_volume_identity(cone: Cone) -> float:
    """Relative residual of ``|G| = H |base| / n``."""
    vol, _ = measures(cone)
    expected = cone.height * cone.base_measure / cone.dim
    return abs(vol - expected) / expected


def facet_simplex_measure(simplices) -> float:
    return float(simplex_measures(simplices).sum())

"""Pass/fail checks for the mean-value inequalities.

``gap = boundary mean - body mean``; a shape is Jensen-type when the gap
is nonnegative for every convex function.  Verdicts are one-sided: a gap
counts as *violated* only once it clears its error bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, HypothesisViolated
from .functions import ConvexFunc, standard_suite
from .insphere import InsphereResult, chebyshev_center
from .measures import ball_volume, body_centroid, boundary_centroid, centroid_gap, measures, sphere_area
from .quadrature import (DEFAULT_REQUEST, Estimate, QuadratureRequest, mean_over_body, mean_over_boundary,
                         mean_over_cone_base)
from .shapes import Ball, Cone, Parallelotope, Polytope

HOLDS, VIOLATED, INCONCLUSIVE = "holds", "violated", "inconclusive"


def _rounding_slack(*values: float) -> float:
    return 1e-12 * (1.0 + sum(abs(v) for v in values))


@dataclass
class GapResult:
    body_mean: Estimate | None
    boundary_mean: Estimate | None
    gap: float
    gap_error_bound: float
    verdict: str
    diagnostics: str = ""

    def to_dict(self) -> dict:
        return {
            "bodyMean": self.body_mean.to_dict() if self.body_mean else None,
            "boundaryMean": self.boundary_mean.to_dict() if self.boundary_mean else None,
            "gap": self.gap,
            "gapErrorBound": self.gap_error_bound,
            "verdict": self.verdict,
            "diagnostics": self.diagnostics,
        }


def jensen_gap(shape, f: ConvexFunc, req: QuadratureRequest = DEFAULT_REQUEST) -> GapResult:
    try:
        body = mean_over_body(shape, f, req)
        bdry = mean_over_boundary(shape, f, req)
    except BudgetExceeded as exc:
        return GapResult(None, None, float("nan"), float("inf"), INCONCLUSIVE, str(exc))
    gap = bdry.value - body.value
    bound = body.error_bound + bdry.error_bound + _rounding_slack(body.value, bdry.value)
    verdict = VIOLATED if gap < -bound else HOLDS
    return GapResult(body, bdry, gap, bound, verdict)


def describe_shape(shape) -> str:
    if isinstance(shape, Ball):
        return f"ball(n={shape.dim}, r={shape.radius:g})"
    if isinstance(shape, Parallelotope):
        return f"parallelotope(n={shape.dim})"
    if isinstance(shape, Cone):
        return f"cone(n={shape.dim}, base vertices={len(shape.base_vertices)})"
    return f"polytope(n={shape.dim}, vertices={len(shape.vertices)}, facets={len(shape.facets)})"


def identity_residuals(shape, insphere: InsphereResult | None = None) -> list[tuple[str, float]]:
    """Relative residuals of the volume identities that apply to ``shape``."""
    out = []
    vol, area = measures(shape)
    n = shape.dim
    if isinstance(shape, Ball):
        unit = n * ball_volume(n)
        out.append(("n|B_n| = |S_{n-1}|", abs(unit - sphere_area(n)) / sphere_area(n)))
    if isinstance(shape, Cone):
        expected = shape.height * shape.base_measure / n
        out.append(("|G| = H|base|/n", abs(vol - expected) / expected))
    if insphere is not None and insphere.tangent_to_all:
        expected = insphere.radius * area / n
        out.append(("|W| = (r/n)|dW|", abs(vol - expected) / expected))
    return out


@dataclass
class JensenReport:
    shape: str
    results: list[tuple[str, GapResult]]
    centroid_gap: float
    insphere: InsphereResult | None = None
    identities: list[tuple[str, float]] = field(default_factory=list)

    @property
    def violations(self) -> list[tuple[str, GapResult]]:
        return [(d, g) for d, g in self.results if g.verdict == VIOLATED]

    @property
    def verdict(self) -> str:
        if self.violations:
            return "counterexample found"
        return "consistent with Jensen-type"

    @property
    def note(self) -> str:
        if self.violations:
            return "a violated convex function disproves the Jensen-type property"
        return "passing a finite suite is evidence, not a proof"

    def to_dict(self) -> dict:
        return {
            "shape": self.shape,
            "verdict": self.verdict,
            "note": self.note,
            "centroidGap": self.centroid_gap,
            "insphere": self.insphere.to_dict() if self.insphere else None,
            "identities": [{"name": k, "residual": v} for k, v in self.identities],
            "results": [{"function": d, **g.to_dict()} for d, g in self.results],
        }


def jensen_verdict(shape, suite: list[ConvexFunc] | None = None,
                   req: QuadratureRequest = DEFAULT_REQUEST, name: str | None = None) -> JensenReport:
    if suite is None:
        suite = standard_suite(shape.dim, body_centroid(shape), seed=req.seed)
    if not suite:
        raise ValueError("empty function suite")
    results = [(f.describe(), jensen_gap(shape, f, req)) for f in suite]
    poly = shape if isinstance(shape, Polytope) else None
    ins = chebyshev_center(poly) if poly is not None else None
    return JensenReport(name or describe_shape(shape), results, centroid_gap(shape), ins,
                        identity_residuals(shape, ins))


@dataclass
class ConeCheck:
    lhs: Estimate
    rhs: float
    rhs_error_bound: float
    holds: bool

    @property
    def error_bound(self) -> float:
        return self.lhs.error_bound + self.rhs_error_bound


def cone_bound_check(cone: Cone, f: ConvexFunc, req: QuadratureRequest = DEFAULT_REQUEST) -> ConeCheck:
    """Mean over the cone vs. ``n/(n+1) * base mean + f(apex)/(n+1)``."""
    n = cone.dim
    lhs = mean_over_body(cone, f, req)
    base = mean_over_cone_base(cone, f, req)
    rhs = n / (n + 1) * base.value + f(cone.apex) / (n + 1)
    err = lhs.error_bound + n / (n + 1) * base.error_bound
    holds = lhs.value <= rhs + err + _rounding_slack(lhs.value, rhs)
    return ConeCheck(lhs, float(rhs), n / (n + 1) * base.error_bound, bool(holds))


@dataclass
class InsphereBound:
    lhs: Estimate
    boundary_mean: Estimate
    rhs_theorem: float
    rhs_corollary: float
    holds_theorem: bool
    holds_corollary: bool
    center: np.ndarray
    boundary_centroid: np.ndarray

    @property
    def error_bound(self) -> float:
        return self.lhs.error_bound + self.boundary_mean.error_bound

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs.to_dict(),
            "boundaryMean": self.boundary_mean.to_dict(),
            "rhsTheorem": self.rhs_theorem,
            "rhsCorollary": self.rhs_corollary,
            "holdsTheorem": self.holds_theorem,
            "holdsCorollary": self.holds_corollary,
        }


def insphere_bound_check(poly: Polytope, f: ConvexFunc, req: QuadratureRequest = DEFAULT_REQUEST,
                         insphere: InsphereResult | None = None) -> InsphereBound:
    """Body mean against the inscribed-sphere bound in two forms.

    ``rhs_theorem`` is ``n/(n+1) * boundary mean + f(s)/(n+1)``;
    ``rhs_corollary`` is ``boundary mean + (f(s) - f(m))/(n+1)``, with s the
    insphere center and m the boundary centroid.
    """
    ins = insphere or chebyshev_center(poly)
    if not ins.tangent_to_all:
        raise HypothesisViolated(
            f"no inscribed sphere tangent to all facets (worst facet gap {ins.worst_facet_gap:.3g})")
    n = poly.dim
    s, m = ins.center, boundary_centroid(poly)
    lhs = mean_over_body(poly, f, req)
    bdry = mean_over_boundary(poly, f, req)
    fs, fm = f(s), f(m)
    rhs_thm = n / (n + 1) * bdry.value + fs / (n + 1)
    rhs_cor = bdry.value + (fs - fm) / (n + 1)
    err = lhs.error_bound + bdry.error_bound
    slack = _rounding_slack(lhs.value, bdry.value, fs, fm)
    return InsphereBound(lhs, bdry, float(rhs_thm), float(rhs_cor),
                         bool(lhs.value <= rhs_thm + err + slack),
                         bool(lhs.value <= rhs_cor + err + slack), s, m)

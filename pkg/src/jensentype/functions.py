"""Convex test functions and the standard suite used by the checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch

EXP_COEFF_LIMIT = 2.0


def _as_batch(x, dim):
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = np.atleast_2d(x)
    if dim is not None and X.shape[-1] != dim:
        raise DimensionMismatch(f"expected points in R^{dim}, got R^{X.shape[-1]}")
    return X, single


class ConvexFunc:
    """Base class; subclasses are convex by construction."""

    dim: int | None = None

    def _eval(self, X: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, x):
        X, single = _as_batch(x, self.dim)
        values = self._eval(X)
        return float(values[0]) if single else values

    def to_dict(self) -> dict:
        raise NotImplementedError

    def describe(self) -> str:
        return type(self).__name__


@dataclass(eq=False)
class Affine(ConvexFunc):
    a: np.ndarray
    b: float = 0.0

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float)
        self.b = float(self.b)
        self.dim = self.a.size

    def _eval(self, X):
        return X @ self.a + self.b

    def to_dict(self):
        return {"kind": "affine", "a": self.a.tolist(), "b": self.b}

    def describe(self):
        return f"Affine(a={np.round(self.a, 6).tolist()}, b={self.b:.6g})"


@dataclass(eq=False)
class MaxAffine(ConvexFunc):
    """``max_j (A[j] . x + b[j])``."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        if len(self.A) < 1 or len(self.A) != len(self.b):
            raise ValueError("MaxAffine needs at least one (a, b) piece")
        self.dim = self.A.shape[1]

    @classmethod
    def from_pieces(cls, pieces) -> "MaxAffine":
        return cls(np.array([p[0] for p in pieces], dtype=float), np.array([p[1] for p in pieces], dtype=float))

    @property
    def pieces(self):
        return [Affine(a, b) for a, b in zip(self.A, self.b)]

    def _eval(self, X):
        return (X @ self.A.T + self.b).max(axis=1)

    def to_dict(self):
        return {"kind": "maxaffine",
                "pieces": [{"a": a.tolist(), "b": float(b)} for a, b in zip(self.A, self.b)]}

    def describe(self):
        return f"MaxAffine({len(self.b)} pieces)"


@dataclass(eq=False)
class QuadForm(ConvexFunc):
    """``||G x||^2 + a . x + b``; the factor G makes the form PSD."""

    G: np.ndarray
    a: np.ndarray | None = None
    b: float = 0.0

    def __post_init__(self):
        self.G = np.atleast_2d(np.asarray(self.G, dtype=float))
        n = self.G.shape[1]
        self.a = np.zeros(n) if self.a is None else np.asarray(self.a, dtype=float)
        self.b = float(self.b)
        self.dim = n

    @property
    def hessian_half(self) -> np.ndarray:
        """``G^T G``, the matrix of the quadratic part."""
        return self.G.T @ self.G

    def _eval(self, X):
        GX = X @ self.G.T
        return (GX ** 2).sum(axis=1) + X @ self.a + self.b

    def to_dict(self):
        return {"kind": "quadform", "factor": self.G.tolist(), "a": self.a.tolist(), "b": self.b}

    def describe(self):
        return "QuadForm"


@dataclass(eq=False)
class PNorm(ConvexFunc):
    p: float
    center: np.ndarray

    def __post_init__(self):
        self.p = float(self.p)
        if not self.p >= 1.0:
            raise ValueError("p-norms are convex only for p >= 1")
        self.center = np.asarray(self.center, dtype=float)
        self.dim = self.center.size

    def _eval(self, X):
        return np.linalg.norm(X - self.center, ord=self.p, axis=1)

    def as_maxaffine(self) -> MaxAffine | None:
        """Exact max-affine form for p = 1 and p = inf, else None."""
        n = self.dim
        if self.p == 1.0:
            A = np.array(list(itertools.product((-1.0, 1.0), repeat=n)))
        elif np.isinf(self.p):
            A = np.vstack([np.eye(n), -np.eye(n)])
        else:
            return None
        return MaxAffine(A, -A @ self.center)

    def to_dict(self):
        p = "inf" if np.isinf(self.p) else self.p
        return {"kind": "pnorm", "p": p, "center": self.center.tolist()}

    def describe(self):
        return f"PNorm(p={self.p:g})"


@dataclass(eq=False)
class ExpAffine(ConvexFunc):
    """``exp(a . x + b)``; coefficients are clipped to ``|a_i| <= 2``."""

    a: np.ndarray
    b: float = 0.0

    def __post_init__(self):
        self.a = np.clip(np.asarray(self.a, dtype=float), -EXP_COEFF_LIMIT, EXP_COEFF_LIMIT)
        self.b = float(self.b)
        self.dim = self.a.size

    def _eval(self, X):
        return np.exp(X @ self.a + self.b)

    def to_dict(self):
        return {"kind": "expaffine", "a": self.a.tolist(), "b": self.b}

    def describe(self):
        return f"ExpAffine(a={np.round(self.a, 6).tolist()})"


@dataclass(eq=False)
class CoordProj(ConvexFunc):
    """``sign * x[i]`` (``i`` is zero-based)."""

    i: int
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.i < 0:
            raise ValueError("coordinate index must be nonnegative")

    def _eval(self, X):
        if self.i >= X.shape[1]:
            raise DimensionMismatch(f"coordinate {self.i} out of range for R^{X.shape[1]}")
        return self.sign * X[:, self.i]

    def as_affine(self, n: int) -> Affine:
        if self.i >= n:
            raise DimensionMismatch(f"coordinate {self.i} out of range for R^{n}")
        a = np.zeros(n)
        a[self.i] = self.sign
        return Affine(a, 0.0)

    def to_dict(self):
        return {"kind": "coordproj", "i": self.i, "sign": self.sign}

    def describe(self):
        return f"CoordProj({self.i}, {'+' if self.sign > 0 else '-'})"


def evaluate(f: ConvexFunc, x):
    return f(x)


def from_dict(d: dict) -> ConvexFunc:
    kind = d.get("kind")
    if kind == "affine":
        return Affine(d["a"], d.get("b", 0.0))
    if kind == "maxaffine":
        return MaxAffine.from_pieces([(p["a"], p.get("b", 0.0)) for p in d["pieces"]])
    if kind == "quadform":
        return QuadForm(d["factor"], d.get("a"), d.get("b", 0.0))
    if kind == "pnorm":
        p = d["p"]
        return PNorm(float("inf") if p in ("inf", "Infinity") else p, d["center"])
    if kind == "expaffine":
        return ExpAffine(d["a"], d.get("b", 0.0))
    if kind == "coordproj":
        return CoordProj(int(d["i"]), int(d.get("sign", 1)))
    raise ValueError(f"unknown function kind: {kind!r}")


def random_maxaffine(n: int, pieces: int, rng: np.random.Generator) -> MaxAffine:
    return MaxAffine(rng.uniform(-1, 1, (pieces, n)), rng.uniform(-1, 1, pieces))


def standard_suite(n: int, center=None, seed: int = 0, n_random: int = 20) -> list[ConvexFunc]:
    """The default battery of convex test functions in R^n.

    Norms are centered at ``center`` (the body centroid, typically).
    """
    center = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    suite: list[ConvexFunc] = []
    for i in range(n):
        suite += [CoordProj(i, 1), CoordProj(i, -1)]
    suite.append(PNorm(2, center))
    suite.append(PNorm(1, center).as_maxaffine())
    suite.append(PNorm(np.inf, center).as_maxaffine())
    suite.append(QuadForm(np.eye(n)))
    for i in range(n):
        for s in (0.5, -0.5):
            a = np.zeros(n)
            a[i] = s
            suite.append(ExpAffine(a))
    rng = np.random.default_rng(np.random.SeedSequence([seed, n]))
    suite += [random_maxaffine(n, 4, rng) for _ in range(n_random)]
    return suite


@dataclass
class Witness:
    x: np.ndarray
    y: np.ndarray
    t: float
    kind: str  # "convexity" | "wright"
    excess: float = field(default=0.0)


def convexity_probe(f, box, samples: int = 10_000, seed: int = 0, tol: float = 1e-10) -> Witness | None:
    """Sample triples in ``box`` and look for a convexity or Wright violation.

    ``f`` may be any vectorized callable; returns None when all checks pass.
    """
    lo, hi = (np.asarray(v, dtype=float) for v in box)
    rng = np.random.default_rng(seed)
    X = rng.uniform(lo, hi, (samples, lo.size))
    Y = rng.uniform(lo, hi, (samples, lo.size))
    t = rng.uniform(0, 1, samples)
    fx, fy = f(X), f(Y)
    P = t[:, None] * X + (1 - t[:, None]) * Y
    Q = (1 - t[:, None]) * X + t[:, None] * Y
    fp, fq = f(P), f(Q)
    for kind, excess in (("convexity", fp - (t * fx + (1 - t) * fy)),
                         ("wright", fp + fq - (fx + fy))):
        bad = np.flatnonzero(excess > tol)
        if bad.size:
            j = bad[0]
            return Witness(X[j], Y[j], float(t[j]), kind, float(excess[j]))
    return None

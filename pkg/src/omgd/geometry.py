"""Feasible decision domains with exact Euclidean projection.

Three closed convex sets are supported: balls, boxes and the probability
simplex. Each provides exact projection, a membership test, the exact range
of affine functions (hence exact ``sup |w.x + b|``), deterministic linear
argmins, and uniform sampling for test oracles. Projection is routed
through the selected kernel backend.
"""

import itertools

import numpy as np

from omgd._backend import kernels
from omgd.errors import ConfigError

MEMBERSHIP_TOL = 1e-12

_BALL, _BOX, _SIMPLEX = 0, 1, 2


def _as_vector(x, dim: int, what: str = "point") -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.shape != (dim,):
        raise ValueError(
            f"{what} has shape {v.shape}, expected ({dim},)"
        )
    return v


class FeasibleSet:
    """Base class; concrete sets fill in the geometry-specific pieces."""

    dimension: int

    def kernel_args(self):
        """``(kind, a0, a1, scal)`` encoding understood by the kernels."""
        raise NotImplementedError

    def project(self, point) -> np.ndarray:
        """The unique Euclidean-nearest member of the set."""
        raise NotImplementedError

    def contains(self, point, tol: float = MEMBERSHIP_TOL) -> bool:
        """True iff every membership constraint is violated by at most tol."""
        raise NotImplementedError

    def affine_range(self, w) -> tuple[float, float]:
        """Exact ``(min, max)`` of ``w . x`` over the set."""
        raise NotImplementedError

    def sup_abs_affine(self, w, b: float) -> float:
        """Exact ``sup |w . x + b|`` over the set."""
        lo, hi = self.affine_range(w)
        return max(abs(lo + b), abs(hi + b))

    def argmin_affine(self, w) -> np.ndarray:
        """A minimizer of ``w . x`` with a deterministic tie-break."""
        raise NotImplementedError

    def argmin_affine_vertices(self, w, cap: int = 64):
        """All vertex minimizers of ``w . x``, or None when the argmin set
        is not a finite vertex list (or would exceed ``cap`` vertices)."""
        raise NotImplementedError

    def farthest_distance(self, point) -> float:
        """Exact ``max_y |y - point|`` over the set."""
        raise NotImplementedError

    def default_start(self) -> np.ndarray:
        """Deterministic default initial decision."""
        raise NotImplementedError

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """n uniform members, shape ``(n, dimension)``."""
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError


class Ball(FeasibleSet):
    def __init__(self, center, radius: float):
        self.center = np.asarray(center, dtype=np.float64).copy()
        if self.center.ndim != 1 or self.center.size == 0:
            raise ConfigError("ball center must be a nonempty vector")
        self.radius = float(radius)
        if not self.radius > 0.0:
            raise ConfigError(f"ball radius must be positive, got {radius}")
        self.dimension = self.center.size
        self._dummy = np.zeros(self.dimension)

    def __repr__(self):
        return f"Ball(center={self.center.tolist()}, radius={self.radius})"

    def kernel_args(self):
        return _BALL, self.center, self._dummy, self.radius

    def project(self, point):
        p = _as_vector(point, self.dimension)
        return kernels.project_ball(p, self.center, self.radius)

    def contains(self, point, tol=MEMBERSHIP_TOL):
        if tol < 0:
            raise ValueError("tol must be nonnegative")
        p = _as_vector(point, self.dimension)
        return float(np.linalg.norm(p - self.center)) <= self.radius + tol

    def affine_range(self, w):
        w = _as_vector(w, self.dimension, "weight")
        mid = float(w @ self.center)
        span = self.radius * float(np.linalg.norm(w))
        return mid - span, mid + span

    def argmin_affine(self, w):
        w = _as_vector(w, self.dimension, "weight")
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            return self.center.copy()
        return self.center - (self.radius / nw) * w

    def argmin_affine_vertices(self, w, cap=64):
        w = _as_vector(w, self.dimension, "weight")
        if float(np.linalg.norm(w)) == 0.0:
            return None  # every point minimizes
        return [self.argmin_affine(w)]

    def farthest_distance(self, point):
        p = _as_vector(point, self.dimension)
        return float(np.linalg.norm(p - self.center)) + self.radius

    def default_start(self):
        return self.center.copy()

    def sample(self, n, rng):
        dirs = rng.standard_normal((n, self.dimension))
        norms = np.linalg.norm(dirs, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        radii = self.radius * rng.uniform(size=(n, 1)) ** (1.0 / self.dimension)
        return self.center + dirs / norms * radii

    def to_config(self):
        return {
            "kind": "ball",
            "center": self.center.tolist(),
            "radius": self.radius,
        }


class Box(FeasibleSet):
    def __init__(self, lower, upper):
        self.lower = np.asarray(lower, dtype=np.float64).copy()
        self.upper = np.asarray(upper, dtype=np.float64).copy()
        if self.lower.ndim != 1 or self.lower.shape != self.upper.shape:
            raise ConfigError("box bounds must be vectors of equal length")
        if not np.all(self.lower <= self.upper):
            raise ConfigError("box lower bound exceeds upper bound")
        self.dimension = self.lower.size

    def __repr__(self):
        return f"Box(lower={self.lower.tolist()}, upper={self.upper.tolist()})"

    def kernel_args(self):
        return _BOX, self.lower, self.upper, 0.0

    def project(self, point):
        p = _as_vector(point, self.dimension)
        return kernels.project_box(p, self.lower, self.upper)

    def contains(self, point, tol=MEMBERSHIP_TOL):
        if tol < 0:
            raise ValueError("tol must be nonnegative")
        p = _as_vector(point, self.dimension)
        return bool(
            np.all(p >= self.lower - tol) and np.all(p <= self.upper + tol)
        )

    def affine_range(self, w):
        w = _as_vector(w, self.dimension, "weight")
        lo = float(np.sum(np.minimum(w * self.lower, w * self.upper)))
        hi = float(np.sum(np.maximum(w * self.lower, w * self.upper)))
        return lo, hi

    def argmin_affine(self, w):
        w = _as_vector(w, self.dimension, "weight")
        # ties (w_i == 0) resolve to the lower corner
        return np.where(w < 0.0, self.upper, self.lower)

    def argmin_affine_vertices(self, w, cap=64):
        w = _as_vector(w, self.dimension, "weight")
        free = np.nonzero((w == 0.0) & (self.lower < self.upper))[0]
        if 2 ** len(free) > cap:
            return None
        base = self.argmin_affine(w)
        out = []
        for choice in itertools.product((0, 1), repeat=len(free)):
            v = base.copy()
            for idx, pick in zip(free, choice):
                v[idx] = self.upper[idx] if pick else self.lower[idx]
            out.append(v)
        return out

    def farthest_distance(self, point):
        p = _as_vector(point, self.dimension)
        per_coord = np.maximum(np.abs(self.lower - p), np.abs(self.upper - p))
        return float(np.linalg.norm(per_coord))

    def default_start(self):
        return 0.5 * (self.lower + self.upper)

    def sample(self, n, rng):
        return rng.uniform(self.lower, self.upper, size=(n, self.dimension))

    def to_config(self):
        return {
            "kind": "box",
            "lower": self.lower.tolist(),
            "upper": self.upper.tolist(),
        }


class Simplex(FeasibleSet):
    def __init__(self, dimension: int):
        if int(dimension) != dimension or dimension < 2:
            raise ConfigError(
                f"simplex dimension must be an integer >= 2, got {dimension}"
            )
        self.dimension = int(dimension)
        self._dummy = np.zeros(self.dimension)

    def __repr__(self):
        return f"Simplex({self.dimension})"

    def kernel_args(self):
        return _SIMPLEX, self._dummy, self._dummy, 0.0

    def project(self, point):
        p = _as_vector(point, self.dimension)
        return kernels.project_simplex(p)

    def contains(self, point, tol=MEMBERSHIP_TOL):
        if tol < 0:
            raise ValueError("tol must be nonnegative")
        p = _as_vector(point, self.dimension)
        return bool(
            np.all(p >= -tol) and abs(float(np.sum(p)) - 1.0) <= tol
        )

    def affine_range(self, w):
        w = _as_vector(w, self.dimension, "weight")
        return float(np.min(w)), float(np.max(w))

    def argmin_affine(self, w):
        # smallest argmin index; this fixed order is what makes repeated
        # ties reproducible across runs
        w = _as_vector(w, self.dimension, "weight")
        v = np.zeros(self.dimension)
        v[int(np.argmin(w))] = 1.0
        return v

    def argmin_affine_vertices(self, w, cap=64):
        w = _as_vector(w, self.dimension, "weight")
        ties = np.nonzero(w == np.min(w))[0]
        if len(ties) > cap:
            return None
        out = []
        for i in ties:
            v = np.zeros(self.dimension)
            v[i] = 1.0
            out.append(v)
        return out

    def vertices(self):
        return [row.copy() for row in np.eye(self.dimension)]

    def farthest_distance(self, point):
        p = _as_vector(point, self.dimension)
        dists = np.linalg.norm(np.eye(self.dimension) - p, axis=1)
        return float(np.max(dists))

    def default_start(self):
        return np.full(self.dimension, 1.0 / self.dimension)

    def sample(self, n, rng):
        return rng.dirichlet(np.ones(self.dimension), size=n)

    def to_config(self):
        return {"kind": "simplex", "dim": self.dimension}


def set_from_config(cfg: dict) -> FeasibleSet:
    """Rebuild a feasible set from its config dictionary."""
    try:
        kind = cfg["kind"]
    except (TypeError, KeyError):
        raise ConfigError(f"feasible set config needs a 'kind': {cfg!r}")
    if kind == "ball":
        return Ball(cfg["center"], cfg["radius"])
    if kind == "box":
        return Box(cfg["lower"], cfg["upper"])
    if kind == "simplex":
        return Simplex(cfg["dim"])
    raise ConfigError(f"unknown feasible set kind {kind!r}")

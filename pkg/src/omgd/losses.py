"""Loss families with exact gradients, curvature certificates and minimizers.

Three families are supported, chosen so that everything the regret checks
need is available in closed form: constrained minimizers, the gradient
bound over a domain, and the exact sup of |f - g| whenever the difference
of two same-family losses is affine. Linear losses certify lambda = L = 0;
quadratics certify their diagonal curvature range.
"""

from dataclasses import dataclass

import numpy as np

from omgd._backend import kernels
from omgd.errors import ConfigError
from omgd.geometry import FeasibleSet, _as_vector

FIXED_POINT_TOL = 1e-12
MAX_FALLBACK_STEPS = 1_000_000

# fixed stream for the approximate sup estimator, see sup_abs_diff
_GRID_SAMPLES = 100_000
_GRID_SEED = 0x5EED5EED


@dataclass(frozen=True)
class CurvatureCertificate:
    """(strong convexity, smoothness, gradient bound) over a given set."""

    strong_convexity: float
    smoothness: float
    gradient_bound: float

    def __post_init__(self):
        if not 0.0 <= self.strong_convexity <= self.smoothness:
            raise ConfigError(
                "certificate needs 0 <= strong_convexity <= smoothness, got "
                f"({self.strong_convexity}, {self.smoothness})"
            )
        if self.gradient_bound < 0.0:
            raise ConfigError("gradient bound must be nonnegative")

    @staticmethod
    def aggregate(certs):
        """Conservative per-scenario certificate: (min lambda, max L, max G)."""
        certs = list(certs)
        return CurvatureCertificate(
            min(c.strong_convexity for c in certs),
            max(c.smoothness for c in certs),
            max(c.gradient_bound for c in certs),
        )

    def to_config(self):
        return {
            "strong_convexity": self.strong_convexity,
            "smoothness": self.smoothness,
            "gradient_bound": self.gradient_bound,
        }


class LossFunction:
    """One round's objective; immutable and safe to share."""

    dimension: int

    def value(self, x) -> float:
        raise NotImplementedError

    def value_batch(self, X) -> np.ndarray:
        """Values at each row of X; used by sampling-based oracles."""
        raise NotImplementedError

    def gradient(self, x) -> np.ndarray:
        raise NotImplementedError

    def gradient_affine(self) -> tuple[np.ndarray, np.ndarray]:
        """``(h, g)`` with ``grad f(x) = h * x + g`` componentwise."""
        raise NotImplementedError

    def curvature_range(self) -> tuple[float, float]:
        """(min, max) eigenvalue of the (diagonal) Hessian."""
        raise NotImplementedError

    def certify(self, domain: FeasibleSet) -> CurvatureCertificate:
        lam, smooth = self.curvature_range()
        return CurvatureCertificate(lam, smooth, self._gradient_bound(domain))

    def _gradient_bound(self, domain: FeasibleSet) -> float:
        raise NotImplementedError

    def minimizer(self, domain: FeasibleSet) -> np.ndarray:
        raise NotImplementedError

    def minimizer_vertices(self, domain: FeasibleSet, cap: int = 64):
        """Finite list of minimizers when available, else None."""
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError


class Linear(LossFunction):
    """f(x) = w . x"""

    def __init__(self, w):
        self.w = np.asarray(w, dtype=np.float64).copy()
        if self.w.ndim != 1 or self.w.size == 0:
            raise ConfigError("linear loss needs a nonempty weight vector")
        self.dimension = self.w.size

    def __repr__(self):
        return f"Linear(w={self.w.tolist()})"

    def value(self, x):
        return float(self.w @ _as_vector(x, self.dimension))

    def value_batch(self, X):
        return np.asarray(X, dtype=np.float64) @ self.w

    def gradient(self, x):
        _as_vector(x, self.dimension)
        return self.w.copy()

    def gradient_affine(self):
        return np.zeros(self.dimension), self.w

    def curvature_range(self):
        return 0.0, 0.0

    def _gradient_bound(self, domain):
        return float(np.linalg.norm(self.w))

    def minimizer(self, domain):
        return domain.argmin_affine(self.w)

    def minimizer_vertices(self, domain, cap=64):
        return domain.argmin_affine_vertices(self.w, cap=cap)

    def to_config(self):
        return {"kind": "linear", "w": self.w.tolist()}


class IsotropicQuadratic(LossFunction):
    """f(x) = (a/2) |x - center|^2, with a >= 0 (a = 0 is constant zero)."""

    def __init__(self, curvature: float, center):
        self.curvature = float(curvature)
        if self.curvature < 0.0:
            raise ConfigError("isotropic curvature must be nonnegative")
        self.center = np.asarray(center, dtype=np.float64).copy()
        if self.center.ndim != 1 or self.center.size == 0:
            raise ConfigError("quadratic center must be a nonempty vector")
        self.dimension = self.center.size

    def __repr__(self):
        return (
            f"IsotropicQuadratic(curvature={self.curvature}, "
            f"center={self.center.tolist()})"
        )

    def value(self, x):
        d = _as_vector(x, self.dimension) - self.center
        return 0.5 * self.curvature * float(d @ d)

    def value_batch(self, X):
        d = np.asarray(X, dtype=np.float64) - self.center
        return 0.5 * self.curvature * np.sum(d * d, axis=1)

    def gradient(self, x):
        return self.curvature * (_as_vector(x, self.dimension) - self.center)

    def gradient_affine(self):
        h = np.full(self.dimension, self.curvature)
        return h, -self.curvature * self.center

    def curvature_range(self):
        return self.curvature, self.curvature

    def _gradient_bound(self, domain):
        return self.curvature * domain.farthest_distance(self.center)

    def minimizer(self, domain):
        # level sets are spheres, so the projection of the center is the
        # constrained minimizer; for a = 0 it is a (deterministic) choice
        # among the trivial minimizers
        return domain.project(self.center)

    def minimizer_vertices(self, domain, cap=64):
        if self.curvature == 0.0:
            return None
        return [self.minimizer(domain)]

    def to_config(self):
        return {
            "kind": "isotropic_quadratic",
            "curvature": self.curvature,
            "center": self.center.tolist(),
        }


class DiagonalQuadratic(LossFunction):
    """f(x) = 1/2 sum_i diag_i (x_i - center_i)^2 + b . x, diag > 0."""

    def __init__(self, diag, center, b=None):
        self.diag = np.asarray(diag, dtype=np.float64).copy()
        self.center = np.asarray(center, dtype=np.float64).copy()
        if self.diag.ndim != 1 or self.diag.shape != self.center.shape:
            raise ConfigError("diag and center must be vectors of equal length")
        if not np.all(self.diag > 0.0):
            raise ConfigError("diagonal curvatures must all be positive")
        self.dimension = self.diag.size
        if b is None:
            self.b = np.zeros(self.dimension)
        else:
            self.b = np.asarray(b, dtype=np.float64).copy()
            if self.b.shape != (self.dimension,):
                raise ConfigError("linear term has the wrong dimension")

    def __repr__(self):
        return (
            f"DiagonalQuadratic(diag={self.diag.tolist()}, "
            f"center={self.center.tolist()}, b={self.b.tolist()})"
        )

    def value(self, x):
        x = _as_vector(x, self.dimension)
        d = x - self.center
        return 0.5 * float(self.diag @ (d * d)) + float(self.b @ x)

    def value_batch(self, X):
        X = np.asarray(X, dtype=np.float64)
        d = X - self.center
        return 0.5 * (d * d) @ self.diag + X @ self.b

    def gradient(self, x):
        x = _as_vector(x, self.dimension)
        return self.diag * (x - self.center) + self.b

    def gradient_affine(self):
        return self.diag, self.b - self.diag * self.center

    def curvature_range(self):
        return float(np.min(self.diag)), float(np.max(self.diag))

    def _gradient_bound(self, domain):
        from omgd import geometry

        if isinstance(domain, geometry.Box):
            # gradient is separable, so each coordinate peaks at a bound
            at_lo = self.diag * (domain.lower - self.center) + self.b
            at_hi = self.diag * (domain.upper - self.center) + self.b
            peak = np.maximum(np.abs(at_lo), np.abs(at_hi))
            return float(np.linalg.norm(peak))
        if isinstance(domain, geometry.Simplex):
            # |grad| is convex, so the max over the polytope is at a vertex
            verts = np.eye(self.dimension)
            grads = self.diag * (verts - self.center) + self.b
            return float(np.max(np.linalg.norm(grads, axis=1)))
        if isinstance(domain, geometry.Ball):
            # certified upper bound |grad(center)| + r * max diag; the exact
            # sup over a ball of a diagonally-scaled affine map has no
            # closed form
            at_center = self.diag * (domain.center - self.center) + self.b
            return float(
                np.linalg.norm(at_center) + domain.radius * np.max(self.diag)
            )
        raise TypeError(f"unsupported domain {type(domain).__name__}")

    def minimizer(self, domain):
        from omgd import geometry

        unconstrained = self.center - self.b / self.diag
        if domain.contains(unconstrained, 0.0):
            return unconstrained
        if isinstance(domain, geometry.Box):
            return np.clip(unconstrained, domain.lower, domain.upper)
        # fallback oracle: projected gradient with step 1/L until the
        # iterate moves less than FIXED_POINT_TOL
        h, g = self.gradient_affine()
        kind, a0, a1, scal = domain.kernel_args()
        start = domain.project(unconstrained)
        eta = 1.0 / float(np.max(self.diag))
        point, _ = kernels.inner_loop_to_tol(
            start, eta, h, g, kind, a0, a1, scal,
            FIXED_POINT_TOL, MAX_FALLBACK_STEPS,
        )
        return point

    def minimizer_vertices(self, domain, cap=64):
        return [self.minimizer(domain)]

    def to_config(self):
        return {
            "kind": "diagonal_quadratic",
            "diag": self.diag.tolist(),
            "center": self.center.tolist(),
            "linear": self.b.tolist(),
        }


def loss_from_config(cfg: dict) -> LossFunction:
    try:
        kind = cfg["kind"]
    except (TypeError, KeyError):
        raise ConfigError(f"loss config needs a 'kind': {cfg!r}")
    if kind == "linear":
        return Linear(cfg["w"])
    if kind == "isotropic_quadratic":
        return IsotropicQuadratic(cfg["curvature"], cfg["center"])
    if kind == "diagonal_quadratic":
        return DiagonalQuadratic(
            cfg["diag"], cfg["center"], cfg.get("linear")
        )
    raise ConfigError(f"unknown loss kind {kind!r}")


def _affine_difference(f: LossFunction, g: LossFunction):
    """``(w, c)`` with ``f(x) - g(x) = w . x + c`` when the pair admits an
    exact affine difference, else None."""
    if isinstance(f, Linear) and isinstance(g, Linear):
        return f.w - g.w, 0.0
    if isinstance(f, IsotropicQuadratic) and isinstance(g, IsotropicQuadratic):
        if f.curvature == g.curvature:
            a = f.curvature
            w = a * (g.center - f.center)
            c = 0.5 * a * (float(f.center @ f.center) - float(g.center @ g.center))
            return w, c
    if isinstance(f, DiagonalQuadratic) and isinstance(g, DiagonalQuadratic):
        if np.array_equal(f.diag, g.diag):
            w = f.diag * (g.center - f.center) + (f.b - g.b)
            c = 0.5 * float(f.diag @ (f.center**2 - g.center**2))
            return w, c
    return None


def sup_abs_diff(
    f: LossFunction, g: LossFunction, domain: FeasibleSet
) -> tuple[float, bool]:
    """``sup_x |f(x) - g(x)|`` over the domain.

    Exact (flag True) whenever f - g is affine: same-family linear pairs,
    isotropic pairs with equal curvature, diagonal pairs with equal diag.
    Any other pair falls back to the max over 10^5 fixed-seed uniform
    samples, which is a lower estimate and is flagged approximate.
    """
    if f.dimension != g.dimension or f.dimension != domain.dimension:
        raise ValueError(
            f"dimension mismatch: f {f.dimension}, g {g.dimension}, "
            f"domain {domain.dimension}"
        )
    affine = _affine_difference(f, g)
    if affine is not None:
        w, c = affine
        return domain.sup_abs_affine(w, c), True
    pts = domain.sample(_GRID_SAMPLES, np.random.default_rng(_GRID_SEED))
    val = float(np.max(np.abs(f.value_batch(pts) - g.value_batch(pts))))
    return val, False

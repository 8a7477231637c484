"""Online decision procedures and the trajectory runner.

Three strategies: projected online gradient descent (one step per round),
its multi-step variant (the same inner update applied K times to the round's
loss, warm-started at the current decision), and the greedy strategy that
plays an exact minimizer of the previous loss. The runner enforces the
online protocol: the decision for round t is recorded before the round's
loss is touched.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from omgd._backend import kernels
from omgd.errors import ConfigError
from omgd.geometry import FeasibleSet, _as_vector
from omgd.losses import LossFunction
from omgd.scenarios import Scenario

_LN4 = math.log(4.0)

KINDS = ("ogd", "omgd", "omgd-auto", "greedy")


def quarter_decay_params(
    strong_convexity: float, smoothness: float
) -> tuple[float, int]:
    """Step size and inner-iteration count that shrink the per-round value
    suboptimality by at least 4x: ``eta = 1/L`` and
    ``K = ceil(4 (L + lambda) / lambda * ln 4)``."""
    if strong_convexity <= 0.0:
        raise ConfigError("quarter-decay parameters need strong convexity > 0")
    if smoothness < strong_convexity:
        raise ConfigError("smoothness must be at least the strong convexity")
    eta = 1.0 / smoothness
    k = math.ceil(4.0 * (smoothness + strong_convexity) / strong_convexity * _LN4)
    return eta, k


def halving_iterations(eta: float, strong_convexity: float) -> int:
    """Inner iterations sufficient, at step size eta <= 1/L, for the
    distance-to-minimizer contraction behind the path-length regret bounds:
    ``ceil((1/eta + lambda) / (2 lambda) * ln 4)``."""
    if eta <= 0.0 or strong_convexity <= 0.0:
        raise ConfigError("eta and strong convexity must be positive")
    return math.ceil((1.0 / eta + strong_convexity) / (2.0 * strong_convexity) * _LN4)


def pgd_steps(
    x, loss: LossFunction, eta: float, n_steps: int, domain: FeasibleSet
) -> np.ndarray:
    """``n_steps`` projected-gradient steps on one fixed loss."""
    if eta <= 0.0:
        raise ConfigError(f"step size must be positive, got {eta}")
    if n_steps < 1:
        raise ConfigError(f"inner iteration count must be >= 1, got {n_steps}")
    x = _as_vector(x, domain.dimension)
    if loss.dimension != domain.dimension:
        raise ValueError(
            f"loss dimension {loss.dimension} != domain {domain.dimension}"
        )
    h, g = loss.gradient_affine()
    kind, a0, a1, scal = domain.kernel_args()
    return kernels.inner_loop(x, eta, n_steps, h, g, kind, a0, a1, scal)


def ogd_step(x, loss, eta, domain) -> np.ndarray:
    """project(x - eta * grad f(x))"""
    return pgd_steps(x, loss, eta, 1, domain)


def omgd_step(x, loss, eta, inner_iters, domain) -> np.ndarray:
    """K warm-started projected-gradient steps on the same loss; with
    ``inner_iters=1`` this is exactly ``ogd_step`` (same code path)."""
    return pgd_steps(x, loss, eta, inner_iters, domain)


def greedy_step(loss, domain) -> np.ndarray:
    """An exact minimizer of the last revealed loss (deterministic
    tie-break from the loss family)."""
    return loss.minimizer(domain)


@dataclass(frozen=True)
class AlgorithmConfig:
    """Which strategy to play, its parameters, and the starting decision
    (None means the domain's deterministic default)."""

    kind: str
    eta: float | None = None
    inner_iters: int | None = None
    start: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown algorithm kind {self.kind!r}")
        if self.kind == "ogd":
            if self.eta is None or self.eta <= 0.0:
                raise ConfigError("ogd needs a positive eta")
        elif self.kind == "omgd":
            if self.eta is None or self.eta <= 0.0:
                raise ConfigError("omgd needs a positive eta")
            if self.inner_iters is None or self.inner_iters < 1:
                raise ConfigError("omgd needs inner_iters >= 1")

    @staticmethod
    def ogd(eta, start=None):
        return AlgorithmConfig("ogd", eta=eta, start=start)

    @staticmethod
    def omgd(eta, inner_iters, start=None):
        return AlgorithmConfig("omgd", eta=eta, inner_iters=inner_iters, start=start)

    @staticmethod
    def omgd_auto(start=None):
        """Multi-step descent with (eta, K) derived from the scenario's
        certificate via quarter_decay_params."""
        return AlgorithmConfig("omgd-auto", start=start)

    @staticmethod
    def greedy(start=None):
        return AlgorithmConfig("greedy", start=start)

    @staticmethod
    def from_config(cfg) -> "AlgorithmConfig":
        if isinstance(cfg, str):
            cfg = {"kind": cfg}
        if not isinstance(cfg, dict) or "kind" not in cfg:
            raise ConfigError(f"algorithm config needs a 'kind': {cfg!r}")
        start = cfg.get("start")
        if start is not None:
            start = tuple(float(v) for v in start)
        return AlgorithmConfig(
            cfg["kind"],
            eta=cfg.get("eta"),
            inner_iters=cfg.get("inner_iters"),
            start=start,
        )

    def to_config(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.eta is not None:
            out["eta"] = self.eta
        if self.inner_iters is not None:
            out["inner_iters"] = self.inner_iters
        if self.start is not None:
            out["start"] = list(self.start)
        return out


@dataclass
class Trajectory:
    """Per-round record of one run.

    ``decisions`` has T+1 rows: the played decisions plus the decision the
    algorithm would play in round T+1, whose value under the last loss is
    ``final_value`` (the variation-based regret bound references it).
    """

    algorithm: str
    kind: str
    eta: float | None
    inner_iters: int | None
    decisions: np.ndarray
    minimizers: np.ndarray
    loss_values: np.ndarray
    optimal_values: np.ndarray
    inner_counts: np.ndarray
    final_value: float

    @property
    def horizon(self) -> int:
        return self.minimizers.shape[0]

    @property
    def instant_regret(self) -> np.ndarray:
        return self.loss_values - self.optimal_values

    def initial_distance(self) -> float:
        return float(np.linalg.norm(self.decisions[0] - self.minimizers[0]))


def run(config: AlgorithmConfig, scenario: Scenario) -> Trajectory:
    """Play the strategy through the scenario under the online protocol.

    Every decision x_t is recorded before f_t is revealed; the per-round
    minimizers are recorded by the runner (not the strategy) for the regret
    accounting. Any failure aborts with the round index attached.
    """
    domain = scenario.domain
    horizon = scenario.horizon
    d = domain.dimension

    if config.start is None:
        x = domain.default_start()
    else:
        x = _as_vector(np.array(config.start, dtype=np.float64), d, "start")
        if not domain.contains(x):
            raise ConfigError(f"start {list(config.start)} is not feasible")

    kind = config.kind
    eta = config.eta
    inner = config.inner_iters
    label = kind
    if kind == "omgd-auto":
        cert = scenario.certificate
        if cert.strong_convexity <= 0.0:
            raise ConfigError(
                "omgd-auto needs a strongly convex scenario certificate"
            )
        eta, inner = quarter_decay_params(cert.strong_convexity, cert.smoothness)
        label = f"omgd-auto(eta={eta!r},K={inner})"
    elif kind == "omgd":
        label = f"omgd(eta={eta!r},K={inner})"
    elif kind == "ogd":
        inner = 1
        label = f"ogd(eta={eta!r})"

    decisions = np.empty((horizon + 1, d))
    minimizers = np.empty((horizon, d))
    loss_values = np.empty(horizon)
    optimal_values = np.empty(horizon)
    inner_counts = np.zeros(horizon, dtype=np.int64)

    for t, f in enumerate(scenario.losses):
        decisions[t] = x
        try:
            xs = f.minimizer(domain)
            minimizers[t] = xs
            loss_values[t] = f.value(x)
            optimal_values[t] = f.value(xs)
            if loss_values[t] < optimal_values[t] - 1e-9:
                raise RuntimeError(
                    "minimizer oracle beaten by the played decision "
                    f"({loss_values[t]} < {optimal_values[t]})"
                )
            if not domain.contains(x, 1e-12):
                raise RuntimeError("decision left the feasible set")
            if kind == "greedy":
                x = xs.copy()
            else:
                x = pgd_steps(x, f, eta, inner, domain)
                inner_counts[t] = inner
        except Exception as exc:
            raise RuntimeError(
                f"{scenario.label} / {label}: round {t + 1}: {exc}"
            ) from exc

    decisions[horizon] = x
    final_value = scenario.losses[-1].value(x)

    return Trajectory(
        algorithm=label,
        kind=kind,
        eta=eta,
        inner_iters=inner,
        decisions=decisions,
        minimizers=minimizers,
        loss_values=loss_values,
        optimal_values=optimal_values,
        inner_counts=inner_counts,
        final_value=final_value,
    )


def write_trajectory_csv(traj: Trajectory, path) -> None:
    """Columns: t, x_t (semicolon-joined), x_t_star, loss, opt_loss,
    inst_regret."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "x_t", "x_t_star", "loss", "opt_loss", "inst_regret"])
        for t in range(traj.horizon):
            writer.writerow(
                [
                    t + 1,
                    ";".join(repr(float(v)) for v in traj.decisions[t]),
                    ";".join(repr(float(v)) for v in traj.minimizers[t]),
                    repr(float(traj.loss_values[t])),
                    repr(float(traj.optimal_values[t])),
                    repr(float(traj.loss_values[t] - traj.optimal_values[t])),
                ]
            )

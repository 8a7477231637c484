"""Non-stationary loss sequences and the scenario file format.

Generators are deterministic given their parameters and seed (seeded draws
go through :class:`omgd.rng.SplitMix64`), so two invocations serialize to
identical bytes. The file format is schema-versioned JSON; floats are
written with ``repr`` precision and round-trip exactly.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from omgd.errors import ConfigError
from omgd.geometry import Ball, FeasibleSet, Simplex, set_from_config
from omgd.losses import (
    CurvatureCertificate,
    DiagonalQuadratic,
    IsotropicQuadratic,
    Linear,
    LossFunction,
    loss_from_config,
)
from omgd.rng import SplitMix64

SCHEMA_VERSION = 1


@dataclass
class Scenario:
    """A horizon-indexed loss sequence over one feasible set."""

    domain: FeasibleSet
    losses: list[LossFunction]
    label: str
    seed: int | None = None
    certificate: CurvatureCertificate = field(init=False)

    def __post_init__(self):
        if not self.losses:
            raise ConfigError("scenario needs at least one loss")
        for t, f in enumerate(self.losses):
            if f.dimension != self.domain.dimension:
                raise ConfigError(
                    f"losses[{t}] has dimension {f.dimension}, "
                    f"domain has {self.domain.dimension}"
                )
        self.certificate = CurvatureCertificate.aggregate(
            f.certify(self.domain) for f in self.losses
        )

    @property
    def horizon(self) -> int:
        return len(self.losses)

    @property
    def dimension(self) -> int:
        return self.domain.dimension

    def to_config(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "label": self.label,
            "seed": self.seed,
            "horizon": self.horizon,
            "domain": self.domain.to_config(),
            "losses": [f.to_config() for f in self.losses],
        }


def scenario_from_config(cfg: dict) -> Scenario:
    if not isinstance(cfg, dict):
        raise ConfigError(f"scenario config must be a mapping, got {type(cfg)}")
    schema = cfg.get("schema")
    if schema != SCHEMA_VERSION:
        raise ConfigError(f"unsupported scenario schema {schema!r}")
    for key in ("label", "domain", "losses"):
        if key not in cfg:
            raise ConfigError(f"scenario config is missing {key!r}")
    domain = set_from_config(cfg["domain"])
    losses = []
    for t, loss_cfg in enumerate(cfg["losses"]):
        try:
            losses.append(loss_from_config(loss_cfg))
        except ConfigError as exc:
            raise ConfigError(f"losses[{t}]: {exc}") from exc
    if "horizon" in cfg and cfg["horizon"] != len(losses):
        raise ConfigError(
            f"declared horizon {cfg['horizon']} != {len(losses)} losses"
        )
    return Scenario(domain, losses, cfg["label"], cfg.get("seed"))


def dump_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario.to_config(), sort_keys=True, indent=2) + "\n"


def load_scenario(text: str) -> Scenario:
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario file is not valid JSON: {exc}") from exc
    return scenario_from_config(cfg)


# ---------------------------------------------------------------------------
# generators


def alternating_leaders(d: int, horizon: int) -> Scenario:
    """Linear losses of weight 1/T over simplex(d), the weight alternating
    between the first two coordinates.

    The per-round minimizer hops between two vertices while consecutive
    losses differ by at most 1/T anywhere, so the minimizer path length
    grows linearly in T while the function variation stays bounded.
    """
    if d < 2:
        raise ConfigError("alternating_leaders needs dimension >= 2")
    if horizon < 1:
        raise ConfigError("horizon must be >= 1")
    weight = 1.0 / horizon
    losses = []
    for t in range(1, horizon + 1):
        w = np.zeros(d)
        w[0 if t % 2 == 1 else 1] = weight
        losses.append(Linear(w))
    return Scenario(
        Simplex(d), losses, f"alternating-leaders(d={d},T={horizon})"
    )


def fixed_best_expert(horizon: int) -> Scenario:
    """Two-expert prediction with alternating weights [-1/2, 0] / [0, 1/2].

    The first expert stays optimal every round (zero minimizer movement),
    but consecutive losses differ by 1/2 across the simplex, so the
    function variation grows linearly in T.
    """
    if horizon < 1:
        raise ConfigError("horizon must be >= 1")
    odd = np.array([-0.5, 0.0])
    even = np.array([0.0, 0.5])
    losses = [
        Linear(odd if t % 2 == 1 else even) for t in range(1, horizon + 1)
    ]
    return Scenario(Simplex(2), losses, f"fixed-best-expert(T={horizon})")


def drifting_quadratic(
    d: int,
    horizon: int,
    strong_convexity: float,
    smoothness: float,
    drift_per_round: float,
    seed: int = 0,
) -> Scenario:
    """Quadratics whose centers random-walk on an interior circle.

    The centers live on the circle of radius 0.5 in the first two
    coordinates of ball(0, 1); each step moves along the circle by a chord
    of exactly ``drift_per_round`` in a seeded random direction. Centers
    are therefore always strictly interior, every per-round minimizer is
    the center itself, and the gradient there is exactly zero.
    """
    if d < 2:
        raise ConfigError("drifting_quadratic needs dimension >= 2")
    if horizon < 1:
        raise ConfigError("horizon must be >= 1")
    if not 0.0 < strong_convexity <= smoothness:
        raise ConfigError(
            "needs 0 < strong_convexity <= smoothness, got "
            f"({strong_convexity}, {smoothness})"
        )
    ring = 0.5
    if drift_per_round < 0.0 or drift_per_round > 2.0 * ring:
        raise ConfigError(
            f"drift_per_round {drift_per_round} cannot keep centers on the "
            f"interior circle of radius {ring}"
        )
    sm = SplitMix64(seed)
    theta = sm.uniform(0.0, 2.0 * math.pi)
    dtheta = 2.0 * math.asin(drift_per_round / (2.0 * ring))
    if smoothness == strong_convexity:
        diag = None
    else:
        diag = np.linspace(strong_convexity, smoothness, d)
    losses = []
    for _ in range(horizon):
        center = np.zeros(d)
        center[0] = ring * math.cos(theta)
        center[1] = ring * math.sin(theta)
        if diag is None:
            losses.append(IsotropicQuadratic(strong_convexity, center))
        else:
            losses.append(DiagonalQuadratic(diag, center))
        theta += sm.sign() * dtheta
    label = (
        f"drifting-quadratic(d={d},T={horizon},sc={strong_convexity!r},"
        f"sm={smoothness!r},drift={drift_per_round!r},seed={seed})"
    )
    return Scenario(Ball(np.zeros(d), 1.0), losses, label, seed)


def low_variation_high_path(d: int, horizon: int, seed: int = 0) -> Scenario:
    """Weakly curved quadratics whose centers hop across the set.

    Curvature 1/T with centers alternating between two interior points at
    distance 1.4 inside ball(0, 1): the minimizer path length grows like T
    while every consecutive pair of losses differs by O(1/T) anywhere, so
    the variation-based regret bound is strictly the smallest of the three.
    """
    if d < 2:
        raise ConfigError("low_variation_high_path needs dimension >= 2")
    if horizon < 1:
        raise ConfigError("horizon must be >= 1")
    sm = SplitMix64(seed)
    phi = sm.uniform(0.0, 2.0 * math.pi)
    axis = np.zeros(d)
    axis[0] = math.cos(phi)
    axis[1] = math.sin(phi)
    curvature = 1.0 / horizon
    losses = []
    for t in range(horizon):
        center = (0.7 if t % 2 == 0 else -0.7) * axis
        losses.append(IsotropicQuadratic(curvature, center))
    label = f"low-variation-high-path(d={d},T={horizon},seed={seed})"
    return Scenario(Ball(np.zeros(d), 1.0), losses, label, seed)


def random_linear(
    d: int, horizon: int, scale: float = 1.0, seed: int = 0
) -> Scenario:
    """Seeded i.i.d. linear losses over simplex(d); a smooth convex but not
    strongly convex testbed for the greedy strategy."""
    if d < 2:
        raise ConfigError("random_linear needs dimension >= 2")
    if horizon < 1:
        raise ConfigError("horizon must be >= 1")
    sm = SplitMix64(seed)
    losses = []
    for _ in range(horizon):
        w = np.array([sm.uniform(-scale, scale) for _ in range(d)])
        losses.append(Linear(w))
    label = f"random-linear(d={d},T={horizon},scale={scale!r},seed={seed})"
    return Scenario(Simplex(d), losses, label, seed)


GENERATORS = {
    "alternating-leaders": alternating_leaders,
    "fixed-best-expert": fixed_best_expert,
    "drifting-quadratic": drifting_quadratic,
    "low-variation-high-path": low_variation_high_path,
    "random-linear": random_linear,
}


def scenario_from_generator_config(cfg: dict) -> Scenario:
    """Build a scenario from a ``{"generator": name, ...params}`` mapping."""
    if not isinstance(cfg, dict) or "generator" not in cfg:
        raise ConfigError("generator config needs a 'generator' name")
    name = cfg["generator"]
    params = {k: v for k, v in cfg.items() if k != "generator"}
    if name not in GENERATORS:
        raise ConfigError(
            f"unknown generator {name!r}; known: {sorted(GENERATORS)}"
        )
    try:
        return GENERATORS[name](**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for generator {name!r}: {exc}")

"""Evaluators for every dynamic-regret inequality the package verifies.

For multi-step descent trajectories there are three bound branches:

* path:      ``2 G P + 2 G |x_1 - x_1^*|``
* squared:   ``E/(2 alpha) + 2 (L + alpha) S + (L + alpha) |x_1 - x_1^*|^2``
  for any alpha > 0 (E is the gradient energy at the minimizers); when
  E = 0 the alpha -> 0 limit ``2 L S + L |x_1 - x_1^*|^2`` applies;
* variation: ``2 V + 2 (f_1(x_1) - f_T(x_{T+1}))``.

For greedy trajectories the three branches are

* path:      ``f_1(x_1) - f_1(x_1^*) + G Pbar``
* squared:   ``f_1(x_1) - f_1(x_1^*) + 1/2 sum_{t>=2} |grad f_t(x_t^*)|^2
  + (L+1)/2 Sbar``
* variation: ``f_1(x_1) - f_1(x_1^*) + V``

where Pbar/Sbar maximize over minimizer selections. The per-step value
contraction of one projected-gradient step at 1/L, and the inequality
``S <= 2 V / lambda`` for strongly convex rounds, are checked separately.
"""

import math
from collections import namedtuple
from dataclasses import dataclass, field

import numpy as np

from omgd.algorithms import (
    Trajectory,
    halving_iterations,
    pgd_steps,
    quarter_decay_params,
)
from omgd.geometry import FeasibleSet
from omgd.losses import CurvatureCertificate, LossFunction
from omgd.regularity import RegularityReport, dynamic_regret

SATISFACTION_TOL = 1e-6
DEFAULT_ALPHA_GRID = tuple(np.logspace(-3.0, 3.0, 13))


def contraction_factor(strong_convexity: float, smoothness: float) -> float:
    """Per-step value-suboptimality decay of one projected-gradient step at
    step size 1/L: 1/2 when ``3 lambda >= 2 L``, else
    ``1 - lambda / (4 (L - lambda))``."""
    if strong_convexity <= 0.0:
        raise ValueError("contraction factor needs strong convexity > 0")
    if smoothness < strong_convexity:
        raise ValueError("smoothness must be at least the strong convexity")
    if 3.0 * strong_convexity >= 2.0 * smoothness:
        return 0.5
    return 1.0 - strong_convexity / (4.0 * (smoothness - strong_convexity))


ContractionCheck = namedtuple("ContractionCheck", ["lhs", "rhs", "ok"])


def check_contraction(
    loss: LossFunction, domain: FeasibleSet, u
) -> ContractionCheck:
    """One projected-gradient step at 1/L from u must contract the value
    suboptimality by the contraction factor.

    Returns ``lhs = f(v) - f(x^*)``, ``rhs = gamma (f(u) - f(x^*))`` and
    ``ok = lhs <= rhs (1 + 1e-9) + 1e-12``.
    """
    cert = loss.certify(domain)
    if cert.strong_convexity <= 0.0:
        raise ValueError("contraction check needs a strongly convex loss")
    gamma = contraction_factor(cert.strong_convexity, cert.smoothness)
    v = pgd_steps(u, loss, 1.0 / cert.smoothness, 1, domain)
    xs = loss.minimizer(domain)
    opt = loss.value(xs)
    lhs = loss.value(v) - opt
    rhs = gamma * (loss.value(u) - opt)
    return ContractionCheck(lhs, rhs, lhs <= rhs * (1.0 + 1e-9) + 1e-12)


def path_length_bound(grad_bound: float, path_len: float, init_dist: float) -> float:
    return 2.0 * grad_bound * path_len + 2.0 * grad_bound * init_dist


def squared_path_bound(
    alpha: float,
    smoothness: float,
    sq_path: float,
    grad_energy: float,
    init_sq_dist: float,
) -> float:
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return (
        grad_energy / (2.0 * alpha)
        + 2.0 * (smoothness + alpha) * sq_path
        + (smoothness + alpha) * init_sq_dist
    )


def squared_path_bound_limit(
    smoothness: float, sq_path: float, init_sq_dist: float
) -> float:
    """The alpha -> 0 limit, valid when the gradient energy is zero (all
    minimizers interior)."""
    return 2.0 * smoothness * sq_path + smoothness * init_sq_dist


def variation_bound(variation: float, first_value: float, final_value: float) -> float:
    """``2 V + 2 (f_1(x_1) - f_T(x_{T+1}))``; reported as-is even when the
    additive term is negative."""
    return 2.0 * variation + 2.0 * (first_value - final_value)


def squared_path_within_variation(
    strong_convexity: float, sq_path: float, variation: float
) -> bool:
    """``S <= 2 V / lambda + 1e-9``, which strong convexity forces whenever
    both sides are exact."""
    if strong_convexity <= 0.0:
        raise ValueError("inequality needs strong convexity > 0")
    return sq_path <= 2.0 * variation / strong_convexity + 1e-9


@dataclass
class BoundReport:
    """Evaluated bound branches against the realized dynamic regret.

    ``margins`` holds bound - realized for every evaluated branch;
    ``applicable`` marks the branches whose preconditions the trajectory
    actually meets, and only those enter ``min_bound`` / ``all_satisfied``.
    ``alpha_used`` is None when the squared branch reports the alpha -> 0
    limit (zero gradient energy).
    """

    flavor: str  # "descent" or "greedy"
    realized_regret: float
    path_bound: float | None
    squared_path_bound: float | None
    alpha_used: float | None
    variation_bound: float | None
    min_bound: float | None
    margins: dict[str, float]
    applicable: dict[str, bool]
    all_satisfied: bool
    extras: dict[str, float] = field(default_factory=dict)

    def to_config(self) -> dict:
        return {
            "flavor": self.flavor,
            "realized_regret": self.realized_regret,
            "path_bound": self.path_bound,
            "squared_path_bound": self.squared_path_bound,
            "alpha_used": self.alpha_used,
            "variation_bound": self.variation_bound,
            "min_bound": self.min_bound,
            "margins": dict(sorted(self.margins.items())),
            "applicable": dict(sorted(self.applicable.items())),
            "all_satisfied": self.all_satisfied,
            "extras": dict(sorted(self.extras.items())),
        }


def _finish_report(flavor, realized, values, applicable, alpha_used, extras):
    margins = {
        name: val - realized for name, val in values.items() if val is not None
    }
    usable = [
        values[name]
        for name, ok in applicable.items()
        if ok and values[name] is not None
    ]
    min_bound = min(usable) if usable else None
    all_ok = all(
        margins[name] >= -SATISFACTION_TOL
        for name, ok in applicable.items()
        if ok and name in margins
    )
    return BoundReport(
        flavor=flavor,
        realized_regret=realized,
        path_bound=values["path"],
        squared_path_bound=values["squared_path"],
        alpha_used=alpha_used,
        variation_bound=values["variation"],
        min_bound=min_bound,
        margins=margins,
        applicable=applicable,
        all_satisfied=all_ok,
        extras=extras,
    )


def descent_bounds(
    traj: Trajectory,
    reg: RegularityReport,
    cert: CurvatureCertificate,
    alpha_grid=None,
) -> BoundReport:
    """Evaluate the three descent-trajectory branches.

    The squared branch is reported at the best alpha on a log grid
    (default 10^-3 .. 10^3, 13 points), or at the alpha -> 0 limit when the
    gradient energy is exactly zero. Branch applicability:

    * path / squared: strongly convex, eta <= 1/L, and at least the
      distance-halving inner iteration count;
    * variation: strongly convex, eta = 1/L, at least the quarter-decay
      inner iteration count, and an exact variation value.
    """
    if traj.kind == "greedy":
        raise ValueError("descent bounds take ogd/omgd trajectories")
    realized = dynamic_regret(traj)
    init_dist = traj.initial_distance()
    grid = DEFAULT_ALPHA_GRID if alpha_grid is None else tuple(alpha_grid)

    path_val = path_length_bound(cert.gradient_bound, reg.path_length, init_dist)

    sq_val, alpha_used = min(
        (
            squared_path_bound(
                a,
                cert.smoothness,
                reg.squared_path_length,
                reg.gradient_energy,
                init_dist**2,
            ),
            a,
        )
        for a in grid
    )
    if reg.gradient_energy == 0.0:
        limit = squared_path_bound_limit(
            cert.smoothness, reg.squared_path_length, init_dist**2
        )
        if limit <= sq_val:
            sq_val, alpha_used = limit, None

    var_val = variation_bound(
        reg.function_variation, float(traj.loss_values[0]), traj.final_value
    )

    strongly_convex = cert.strong_convexity > 0.0
    eta = traj.eta if traj.eta is not None else math.inf
    inner = traj.inner_iters if traj.inner_iters is not None else 0
    eta_small_enough = eta <= (1.0 / cert.smoothness) * (1.0 + 1e-12) if cert.smoothness > 0 else True
    path_ok = (
        strongly_convex
        and eta_small_enough
        and inner >= halving_iterations(eta, cert.strong_convexity)
    )
    if strongly_convex:
        _, quarter_k = quarter_decay_params(cert.strong_convexity, cert.smoothness)
        var_ok = (
            abs(eta * cert.smoothness - 1.0) <= 1e-9
            and inner >= quarter_k
            and reg.variation_exact
        )
    else:
        var_ok = False

    values = {"path": path_val, "squared_path": sq_val, "variation": var_val}
    applicable = {"path": path_ok, "squared_path": path_ok, "variation": var_ok}
    extras = {
        # the proof chain actually yields factor 4/3 where the stated bound
        # has 2; logged for information, never gated on
        "variation_bound_four_thirds": (4.0 / 3.0)
        * (reg.function_variation + float(traj.loss_values[0]) - traj.final_value)
    }
    return _finish_report("descent", realized, values, applicable, alpha_used, extras)


def greedy_bounds(
    traj: Trajectory, reg: RegularityReport, cert: CurvatureCertificate
) -> BoundReport:
    """Evaluate the three greedy-strategy branches.

    Path and squared branches use the selection-maximized path lengths and
    are only marked applicable when those maxima are exact; the variation
    branch needs an exact variation value.
    """
    if traj.kind != "greedy":
        raise ValueError("greedy bounds take greedy trajectories only")
    realized = dynamic_regret(traj)
    base = float(traj.loss_values[0] - traj.optimal_values[0])

    path_val = base + cert.gradient_bound * reg.max_path_length
    sq_val = (
        base
        + 0.5 * reg.gradient_energy_tail
        + 0.5 * (cert.smoothness + 1.0) * reg.max_squared_path_length
    )
    var_val = base + reg.function_variation

    values = {"path": path_val, "squared_path": sq_val, "variation": var_val}
    applicable = {
        "path": reg.max_paths_exact,
        "squared_path": reg.max_paths_exact,
        "variation": reg.variation_exact,
    }
    extras = {
        # endpoint variant that the telescoping derivation produces
        # directly: f_1(x_1) - f_T(x_T^*) + V
        "variation_bound_endpoint": float(
            traj.loss_values[0] - traj.optimal_values[-1]
        )
        + reg.function_variation
    }
    return _finish_report("greedy", realized, values, applicable, None, extras)

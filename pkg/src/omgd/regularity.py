"""The three non-stationarity measures and dynamic-regret accounting.

* path length: sum of distances between consecutive per-round minimizers;
* squared path length: same with squared distances;
* function variation: sum over consecutive loss pairs of the exact
  sup |f_{t-1} - f_t| over the domain (carries an exactness flag).

For losses with non-unique minimizers the report also carries the maxima of
the two path quantities over all minimizer selections, computed exactly by
dynamic programming when every round's minimizer set is a finite vertex
list (linear losses over simplex/box), and otherwise falls back to the
tie-break selection flagged as a lower estimate.
"""

from dataclasses import dataclass

import numpy as np

from omgd.algorithms import Trajectory
from omgd.losses import sup_abs_diff
from omgd.scenarios import Scenario


def path_length(minimizers) -> float:
    """Sum of Euclidean distances between consecutive minimizers."""
    pts = np.asarray(minimizers, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError("minimizers must be a (T, d) array or list of vectors")
    if pts.shape[0] < 2:
        return 0.0
    hops = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    return float(np.sum(hops))


def squared_path_length(minimizers) -> float:
    """Sum of squared distances between consecutive minimizers."""
    pts = np.asarray(minimizers, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError("minimizers must be a (T, d) array or list of vectors")
    if pts.shape[0] < 2:
        return 0.0
    diffs = np.diff(pts, axis=0)
    return float(np.sum(diffs * diffs))


def function_variation(losses, domain) -> tuple[float, bool]:
    """``sum_t sup_x |f_{t-1}(x) - f_t(x)|`` with an exactness flag that is
    False if any pair needed the sampling estimator."""
    total = 0.0
    exact = True
    for prev, cur in zip(losses, losses[1:]):
        val, is_exact = sup_abs_diff(prev, cur, domain)
        total += val
        exact = exact and is_exact
    return total, exact


def gradient_energy(losses, minimizers) -> float:
    """``sum_t |grad f_t(x_t^*)|^2``; zero when all minimizers are interior."""
    losses = list(losses)
    pts = np.asarray(minimizers, dtype=np.float64)
    if len(losses) != pts.shape[0]:
        raise ValueError(
            f"{len(losses)} losses vs {pts.shape[0]} minimizers"
        )
    total = 0.0
    for f, xs in zip(losses, pts):
        g = f.gradient(xs)
        total += float(g @ g)
    return total


def dynamic_regret(traj: Trajectory) -> float:
    """Cumulative played loss minus cumulative per-round optimal loss."""
    return float(np.sum(traj.loss_values - traj.optimal_values))


def _max_selection(vertex_sets, hop) -> float:
    # DP over rounds: best[i] = max total hop weight ending at vertex i
    best = [0.0] * len(vertex_sets[0])
    for prev_set, cur_set in zip(vertex_sets, vertex_sets[1:]):
        best = [
            max(best[i] + hop(u, v) for i, u in enumerate(prev_set))
            for v in cur_set
        ]
    return max(best)


def max_selection_path_lengths(vertex_sets) -> tuple[float, float]:
    """Exact maxima of (path length, squared path length) over all
    selections of one minimizer per round from finite minimizer sets."""
    vertex_sets = [list(s) for s in vertex_sets]
    if any(len(s) == 0 for s in vertex_sets):
        raise ValueError("every round needs at least one candidate minimizer")
    if len(vertex_sets) < 2:
        return 0.0, 0.0
    pbar = _max_selection(
        vertex_sets, lambda u, v: float(np.linalg.norm(u - v))
    )
    sbar = _max_selection(
        vertex_sets, lambda u, v: float(np.sum((u - v) ** 2))
    )
    return pbar, sbar


@dataclass
class RegularityReport:
    """Every regularity quantity the bound evaluators consume."""

    rounds: int
    path_length: float
    squared_path_length: float
    function_variation: float
    variation_exact: bool
    gradient_energy: float
    gradient_energy_tail: float  # same sum but starting from round 2
    max_path_length: float
    max_squared_path_length: float
    max_paths_exact: bool  # False when the maxima fall back to the
    # tie-break selection (lower estimates)

    def to_config(self) -> dict:
        return {
            "rounds": self.rounds,
            "path_length": self.path_length,
            "squared_path_length": self.squared_path_length,
            "function_variation": self.function_variation,
            "variation_exact": self.variation_exact,
            "gradient_energy": self.gradient_energy,
            "gradient_energy_tail": self.gradient_energy_tail,
            "max_path_length": self.max_path_length,
            "max_squared_path_length": self.max_squared_path_length,
            "max_paths_exact": self.max_paths_exact,
        }


def measure(scenario: Scenario, traj: Trajectory) -> RegularityReport:
    """Assemble the report; minimizers come from the trajectory record so
    every consumer sees the same oracle output."""
    mins = traj.minimizers
    p = path_length(mins)
    s = squared_path_length(mins)
    v, v_exact = function_variation(scenario.losses, scenario.domain)
    energy = gradient_energy(scenario.losses, mins)
    energy_tail = gradient_energy(scenario.losses[1:], mins[1:])

    vertex_sets = [
        f.minimizer_vertices(scenario.domain) for f in scenario.losses
    ]
    if all(vs is not None for vs in vertex_sets):
        pbar, sbar = max_selection_path_lengths(vertex_sets)
        paths_exact = True
    else:
        pbar, sbar = p, s
        paths_exact = False

    return RegularityReport(
        rounds=traj.horizon,
        path_length=p,
        squared_path_length=s,
        function_variation=v,
        variation_exact=v_exact,
        gradient_energy=energy,
        gradient_energy_tail=energy_tail,
        max_path_length=pbar,
        max_squared_path_length=sbar,
        max_paths_exact=paths_exact,
    )

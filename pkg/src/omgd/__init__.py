"""Projected online gradient methods on non-stationary loss sequences,
with exact regularity accounting and regret-bound verification.

The hot kernels (projections, the inner descent loop) run through a
compiled extension when available; ``omgd.BACKEND`` tells which
implementation was selected.
"""

from omgd._backend import BACKEND
from omgd.algorithms import (
    AlgorithmConfig,
    Trajectory,
    greedy_step,
    halving_iterations,
    ogd_step,
    omgd_step,
    quarter_decay_params,
    run,
    write_trajectory_csv,
)
from omgd.bounds import (
    BoundReport,
    check_contraction,
    contraction_factor,
    descent_bounds,
    greedy_bounds,
    path_length_bound,
    squared_path_bound,
    squared_path_bound_limit,
    squared_path_within_variation,
    variation_bound,
)
from omgd.errors import ConfigError, UnboundedError
from omgd.geometry import Ball, Box, FeasibleSet, Simplex, set_from_config
from omgd.losses import (
    CurvatureCertificate,
    DiagonalQuadratic,
    IsotropicQuadratic,
    Linear,
    LossFunction,
    loss_from_config,
    sup_abs_diff,
)
from omgd.regularity import (
    RegularityReport,
    dynamic_regret,
    function_variation,
    gradient_energy,
    max_selection_path_lengths,
    measure,
    path_length,
    squared_path_length,
)
from omgd.scenarios import (
    Scenario,
    alternating_leaders,
    drifting_quadratic,
    dump_scenario,
    fixed_best_expert,
    load_scenario,
    low_variation_high_path,
    random_linear,
    scenario_from_config,
)

__version__ = "0.1.0"

__all__ = [
    "AlgorithmConfig",
    "BACKEND",
    "Ball",
    "BoundReport",
    "Box",
    "ConfigError",
    "CurvatureCertificate",
    "DiagonalQuadratic",
    "FeasibleSet",
    "IsotropicQuadratic",
    "Linear",
    "LossFunction",
    "RegularityReport",
    "Scenario",
    "Simplex",
    "Trajectory",
    "UnboundedError",
    "alternating_leaders",
    "check_contraction",
    "contraction_factor",
    "descent_bounds",
    "drifting_quadratic",
    "dump_scenario",
    "dynamic_regret",
    "fixed_best_expert",
    "function_variation",
    "gradient_energy",
    "greedy_bounds",
    "greedy_step",
    "halving_iterations",
    "load_scenario",
    "loss_from_config",
    "low_variation_high_path",
    "max_selection_path_lengths",
    "measure",
    "ogd_step",
    "omgd_step",
    "path_length",
    "path_length_bound",
    "quarter_decay_params",
    "random_linear",
    "run",
    "scenario_from_config",
    "set_from_config",
    "squared_path_bound",
    "squared_path_bound_limit",
    "squared_path_length",
    "squared_path_within_variation",
    "sup_abs_diff",
    "variation_bound",
    "write_trajectory_csv",
]

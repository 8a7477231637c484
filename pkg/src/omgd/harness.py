"""Experiment orchestration: runs, verdict tables, reports, and the
built-in verification suite behind ``omgd verify``.

A verdict row is a plain dict with keys ``check``, ``scenario``,
``algorithm``, ``branch``, ``lhs``, ``rhs``, ``margin``, ``status``
(pass / fail / skip), ``note`` and optionally ``cases`` / ``failures`` for
batch rows. Reports serialize to schema-versioned JSON with deterministic
key order; the only non-deterministic field is ``duration_seconds``.
"""

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from omgd import bounds as bnd
from omgd._backend import BACKEND
from omgd.algorithms import (
    AlgorithmConfig,
    Trajectory,
    quarter_decay_params,
    run,
    write_trajectory_csv,
)
from omgd.errors import ConfigError
from omgd.geometry import Ball, Box, Simplex
from omgd.losses import DiagonalQuadratic, IsotropicQuadratic, Linear
from omgd.regularity import (
    RegularityReport,
    function_variation,
    measure,
    squared_path_length,
)
from omgd.rng import SplitMix64
from omgd.scenarios import (
    Scenario,
    alternating_leaders,
    drifting_quadratic,
    fixed_best_expert,
    load_scenario,
    low_variation_high_path,
    random_linear,
    scenario_from_config,
    scenario_from_generator_config,
)

REPORT_SCHEMA = 1

CHECKS = (
    "contraction",
    "quarter_decay",
    "path_bound",
    "squared_path_bound",
    "variation_bound",
    "greedy_bounds",
    "squared_path_inequality",
)

QUARTER_DECAY_TOL = 1e-9
INEQUALITY_TOL = 1e-9
BOUND_TOL = bnd.SATISFACTION_TOL


def _row(check, scenario="", algorithm="", branch="", lhs=None, rhs=None,
         margin=None, status="pass", note="", **extra):
    out = {
        "check": check,
        "scenario": scenario,
        "algorithm": algorithm,
        "branch": branch,
        "lhs": None if lhs is None else float(lhs),
        "rhs": None if rhs is None else float(rhs),
        "margin": None if margin is None else float(margin),
        "status": status,
        "note": note,
    }
    out.update(extra)
    return out


@dataclass
class ExperimentConfig:
    """One scenario, the algorithms to play on it, and which checks to run.

    Check values: ``"auto"`` runs a check when its preconditions hold and
    emits a skip row otherwise; ``True`` forces the comparison regardless
    of preconditions; ``False`` drops it entirely.
    """

    scenario: Scenario
    algorithms: list[AlgorithmConfig]
    checks: dict = field(default_factory=dict)
    alpha_grid: tuple | None = None

    def __post_init__(self):
        if not self.algorithms:
            raise ConfigError("experiment needs at least one algorithm")
        for name in self.checks:
            if name not in CHECKS:
                raise ConfigError(
                    f"unknown check {name!r}; known: {list(CHECKS)}"
                )
        for name, mode in self.checks.items():
            if mode not in (True, False, "auto"):
                raise ConfigError(
                    f"check {name!r} must be true, false or 'auto', got {mode!r}"
                )

    def mode(self, name):
        return self.checks.get(name, "auto")


def experiment_from_config(cfg: dict, base_dir=None) -> ExperimentConfig:
    """Parse the experiment config mapping (see README for the schema)."""
    if not isinstance(cfg, dict):
        raise ConfigError("experiment config must be a mapping")
    sc_cfg = cfg.get("scenario")
    if sc_cfg is None:
        raise ConfigError("experiment config needs a 'scenario'")
    if isinstance(sc_cfg, dict) and "file" in sc_cfg:
        path = Path(sc_cfg["file"])
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read scenario file {path}: {exc}")
        scenario = load_scenario(text)
    elif isinstance(sc_cfg, dict) and "generator" in sc_cfg:
        scenario = scenario_from_generator_config(sc_cfg)
    else:
        scenario = scenario_from_config(sc_cfg)
    algorithms = [
        AlgorithmConfig.from_config(a) for a in cfg.get("algorithms", [])
    ]
    alpha_grid = None
    if cfg.get("alpha_grid") is not None:
        raw = cfg["alpha_grid"]
        if not (isinstance(raw, (list, tuple)) and len(raw) == 3):
            raise ConfigError("alpha_grid must be [lo, hi, points]")
        lo, hi, points = raw
        if lo <= 0 or hi < lo or int(points) < 1:
            raise ConfigError(f"bad alpha_grid {raw!r}")
        alpha_grid = tuple(
            np.logspace(math.log10(lo), math.log10(hi), int(points))
        )
    return ExperimentConfig(
        scenario, algorithms, cfg.get("checks", {}), alpha_grid
    )


@dataclass
class AlgorithmCell:
    """One algorithm's run on the scenario plus its evaluated bounds."""

    traj: Trajectory
    bound_report: bnd.BoundReport
    contraction: float | None
    next_values: np.ndarray  # f_t(x_{t+1}) for every round

    def to_config(self) -> dict:
        traj = self.traj
        return {
            "name": traj.algorithm,
            "kind": traj.kind,
            "eta": traj.eta,
            "inner_iters": traj.inner_iters,
            "contraction_factor": self.contraction,
            "realized_regret": float(
                np.sum(traj.loss_values - traj.optimal_values)
            ),
            "initial_distance": traj.initial_distance(),
            "first_value": float(traj.loss_values[0]),
            "final_value": traj.final_value,
            "bounds": self.bound_report.to_config(),
        }


@dataclass
class RunReport:
    scenario: Scenario
    regularity: RegularityReport
    cells: list[AlgorithmCell]
    verdicts: list[dict]
    ok: bool
    duration_seconds: float

    def to_config(self) -> dict:
        sc = self.scenario
        return {
            "schema": REPORT_SCHEMA,
            "backend": BACKEND,
            "scenario": {
                "label": sc.label,
                "horizon": sc.horizon,
                "dimension": sc.dimension,
                "seed": sc.seed,
                "domain": sc.domain.to_config(),
            },
            "certificate": sc.certificate.to_config(),
            "regularity": self.regularity.to_config(),
            "algorithms": [c.to_config() for c in self.cells],
            "verdicts": self.verdicts,
            "ok": self.ok,
            "duration_seconds": self.duration_seconds,
        }


def _contraction_probes(scenario: Scenario, per_loss: int = 4):
    """Deterministic feasible probe points for the contraction rows."""
    domain = scenario.domain
    sm = SplitMix64((scenario.seed or 0) ^ 0x0C0FFEE0)
    start = domain.default_start()
    if isinstance(domain, Ball):
        scale = domain.radius
    elif isinstance(domain, Box):
        scale = float(np.max(domain.upper - domain.lower)) / 2.0
    else:
        scale = 1.0
    horizon = scenario.horizon
    picks = sorted({0, horizon // 2, horizon - 1})
    for t in picks:
        for _ in range(per_loss):
            noise = np.array([sm.normal() for _ in range(domain.dimension)])
            yield t, domain.project(start + scale * noise)


def _contraction_row(scenario: Scenario, mode) -> dict | None:
    if mode is False:
        return None
    lam = scenario.certificate.strong_convexity
    if lam <= 0.0:
        if mode == "auto":
            return _row(
                "contraction", scenario.label, status="skip",
                note="needs strong convexity",
            )
        return _row(
            "contraction", scenario.label, status="skip",
            note="forced but the scenario is not strongly convex",
        )
    worst = math.inf
    cases = failures = 0
    for t, u in _contraction_probes(scenario):
        res = bnd.check_contraction(scenario.losses[t], scenario.domain, u)
        cases += 1
        worst = min(worst, res.rhs - res.lhs)
        if not res.ok:
            failures += 1
    return _row(
        "contraction", scenario.label,
        margin=worst, status="pass" if failures == 0 else "fail",
        note="one descent step at 1/L contracts the value gap",
        cases=cases, failures=failures,
    )


def _inequality_row(scenario: Scenario, reg: RegularityReport, mode):
    if mode is False:
        return None
    lam = scenario.certificate.strong_convexity
    if lam <= 0.0 or not reg.variation_exact:
        status = "skip"
        note = (
            "needs strong convexity" if lam <= 0.0
            else "needs an exact variation value"
        )
        return _row("squared_path_inequality", scenario.label,
                    status=status, note=note)
    lhs = reg.squared_path_length
    rhs = 2.0 * reg.function_variation / lam
    margin = rhs + INEQUALITY_TOL - lhs
    return _row(
        "squared_path_inequality", scenario.label,
        lhs=lhs, rhs=rhs, margin=margin,
        status="pass" if margin >= 0.0 else "fail",
        note="squared path length vs 2 * variation / strong convexity",
    )


def _quarter_decay_row(scenario, cell: AlgorithmCell, mode):
    if mode is False:
        return None
    traj = cell.traj
    cert = scenario.certificate
    label = traj.algorithm
    if cert.strong_convexity <= 0.0:
        return _row("quarter_decay", scenario.label, label, status="skip",
                    note="needs strong convexity")
    if mode == "auto":
        applicable = traj.kind in ("omgd", "omgd-auto")
        if applicable:
            eta_q, k_q = quarter_decay_params(
                cert.strong_convexity, cert.smoothness
            )
            applicable = (
                abs(traj.eta * cert.smoothness - 1.0) <= 1e-9
                and traj.inner_iters >= k_q
            )
        if not applicable:
            return _row("quarter_decay", scenario.label, label, status="skip",
                        note="parameters below the quarter-decay setting")
    subopt = traj.loss_values - traj.optimal_values
    next_subopt = cell.next_values - traj.optimal_values
    viol = next_subopt - 0.25 * subopt
    t_worst = int(np.argmax(viol))
    margin = float(QUARTER_DECAY_TOL - viol[t_worst])
    return _row(
        "quarter_decay", scenario.label, label,
        lhs=float(next_subopt[t_worst]), rhs=float(0.25 * subopt[t_worst]),
        margin=margin,
        status="pass" if margin >= 0.0 else "fail",
        note=f"worst round {t_worst + 1} of {traj.horizon}",
    )


_BRANCH_CHECK = {
    "path": "path_bound",
    "squared_path": "squared_path_bound",
    "variation": "variation_bound",
}


def _bound_rows(scenario, cell: AlgorithmCell, config: ExperimentConfig):
    rows = []
    rep = cell.bound_report
    label = cell.traj.algorithm
    if rep.flavor == "greedy":
        mode = config.mode("greedy_bounds")
        if mode is False:
            return rows
        for branch in ("path", "squared_path", "variation"):
            value = getattr(
                rep, "variation_bound" if branch == "variation" else
                ("path_bound" if branch == "path" else "squared_path_bound")
            )
            margin = rep.margins.get(branch)
            if mode == "auto" and not rep.applicable[branch]:
                rows.append(_row("greedy_bounds", scenario.label, label,
                                 branch=branch, status="skip",
                                 note="branch preconditions not met"))
                continue
            rows.append(_row(
                "greedy_bounds", scenario.label, label, branch=branch,
                lhs=rep.realized_regret, rhs=value,
                margin=margin + BOUND_TOL,
                status="pass" if margin >= -BOUND_TOL else "fail",
            ))
        return rows
    for branch, check in _BRANCH_CHECK.items():
        mode = config.mode(check)
        if mode is False:
            continue
        value = {
            "path": rep.path_bound,
            "squared_path": rep.squared_path_bound,
            "variation": rep.variation_bound,
        }[branch]
        margin = rep.margins.get(branch)
        if mode == "auto" and not rep.applicable[branch]:
            rows.append(_row(check, scenario.label, label, branch=branch,
                             status="skip",
                             note="branch preconditions not met"))
            continue
        rows.append(_row(
            check, scenario.label, label, branch=branch,
            lhs=rep.realized_regret, rhs=value, margin=margin + BOUND_TOL,
            status="pass" if margin >= -BOUND_TOL else "fail",
        ))
    return rows


def run_experiment(config: ExperimentConfig) -> RunReport:
    """Run every algorithm on the scenario, evaluate bounds, emit verdicts."""
    t_start = time.perf_counter()
    scenario = config.scenario
    cert = scenario.certificate

    cells = []
    reg = None
    for algo in config.algorithms:
        traj = run(algo, scenario)
        if reg is None or not np.array_equal(
            reg_minimizers, traj.minimizers
        ):
            reg = measure(scenario, traj)
            reg_minimizers = traj.minimizers
        next_values = np.array(
            [
                f.value(traj.decisions[t + 1])
                for t, f in enumerate(scenario.losses)
            ]
        )
        if traj.kind == "greedy":
            rep = bnd.greedy_bounds(traj, reg, cert)
        else:
            rep = bnd.descent_bounds(traj, reg, cert, config.alpha_grid)
        gamma = None
        if cert.strong_convexity > 0.0:
            gamma = bnd.contraction_factor(
                cert.strong_convexity, cert.smoothness
            )
        cells.append(AlgorithmCell(traj, rep, gamma, next_values))

    verdicts = []
    row = _contraction_row(scenario, config.mode("contraction"))
    if row is not None:
        verdicts.append(row)
    row = _inequality_row(scenario, reg, config.mode("squared_path_inequality"))
    if row is not None:
        verdicts.append(row)
    for cell in cells:
        row = _quarter_decay_row(scenario, cell, config.mode("quarter_decay"))
        if row is not None:
            verdicts.append(row)
        verdicts.extend(_bound_rows(scenario, cell, config))

    ok = all(r["status"] != "fail" for r in verdicts)
    return RunReport(
        scenario=scenario,
        regularity=reg,
        cells=cells,
        verdicts=verdicts,
        ok=ok,
        duration_seconds=time.perf_counter() - t_start,
    )


# ---------------------------------------------------------------------------
# report emission


def _slug(text: str) -> str:
    keep = [c if c.isalnum() else "-" for c in text]
    out = "".join(keep).strip("-")
    while "--" in out:
        out = out.replace("--", "-")
    return out[:60]


def _prefix_bound_columns(scenario, cell: AlgorithmCell, alpha_grid):
    """Cumulative per-round values of the three applicable-form bounds."""
    traj = cell.traj
    cert = scenario.certificate
    horizon = traj.horizon
    grid = np.asarray(
        bnd.DEFAULT_ALPHA_GRID if alpha_grid is None else alpha_grid
    )
    hops = np.linalg.norm(np.diff(traj.minimizers, axis=0), axis=1)
    p_prefix = np.concatenate(([0.0], np.cumsum(hops)))
    s_prefix = np.concatenate(([0.0], np.cumsum(hops**2)))
    sups = [
        bnd_val
        for bnd_val, _ in (
            _pair_sup(scenario, t) for t in range(1, horizon)
        )
    ]
    v_prefix = np.concatenate(([0.0], np.cumsum(sups)))
    grads = np.array(
        [
            float(g @ g)
            for g in (
                f.gradient(traj.minimizers[t])
                for t, f in enumerate(scenario.losses)
            )
        ]
    )
    e_prefix = np.cumsum(grads)
    d1 = traj.initial_distance()

    path_col = 2.0 * cert.gradient_bound * p_prefix + 2.0 * cert.gradient_bound * d1
    # squared branch: best grid alpha per prefix, or the limit when the
    # prefix gradient energy is exactly zero
    sq_grid = (
        e_prefix[:, None] / (2.0 * grid[None, :])
        + 2.0 * (cert.smoothness + grid[None, :]) * s_prefix[:, None]
        + (cert.smoothness + grid[None, :]) * d1**2
    )
    sq_col = np.min(sq_grid, axis=1)
    limit_col = 2.0 * cert.smoothness * s_prefix + cert.smoothness * d1**2
    zero_energy = e_prefix == 0.0
    sq_col = np.where(zero_energy, np.minimum(sq_col, limit_col), sq_col)
    var_col = 2.0 * v_prefix + 2.0 * (traj.loss_values[0] - cell.next_values)
    return path_col, sq_col, var_col


def _pair_sup(scenario, t):
    from omgd.losses import sup_abs_diff

    return sup_abs_diff(
        scenario.losses[t - 1], scenario.losses[t], scenario.domain
    )


def emit_report(report: RunReport, out_dir, fmt: str = "json") -> list[Path]:
    """Write the report; ``json`` emits the full report document, ``csv``
    emits per-round rows plus the raw trajectory per algorithm."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        if fmt == "json":
            path = out_dir / "report.json"
            path.write_text(
                json.dumps(report.to_config(), sort_keys=True, indent=2) + "\n"
            )
            return [path]
        if fmt != "csv":
            raise ConfigError(f"unknown report format {fmt!r}")
        import csv as _csv

        written = []
        for i, cell in enumerate(report.cells):
            slug = f"{i}_{_slug(cell.traj.algorithm)}"
            traj_path = out_dir / f"trajectory_{slug}.csv"
            write_trajectory_csv(cell.traj, traj_path)
            written.append(traj_path)
            rounds_path = out_dir / f"rounds_{slug}.csv"
            path_col, sq_col, var_col = _prefix_bound_columns(
                report.scenario, cell, None
            )
            inst = cell.traj.instant_regret
            cum = np.cumsum(inst)
            with open(rounds_path, "w", newline="") as fh:
                writer = _csv.writer(fh)
                writer.writerow(
                    [
                        "t", "inst_regret", "cum_regret",
                        "path_bound", "squared_path_bound", "variation_bound",
                    ]
                )
                for t in range(cell.traj.horizon):
                    writer.writerow(
                        [
                            t + 1,
                            repr(float(inst[t])),
                            repr(float(cum[t])),
                            repr(float(path_col[t])),
                            repr(float(sq_col[t])),
                            repr(float(var_col[t])),
                        ]
                    )
            written.append(rounds_path)
        return written
    except OSError as exc:
        raise RuntimeError(f"cannot write report under {out_dir}: {exc}")


def strip_durations(obj):
    """Recursive copy with every ``duration_seconds`` removed, for
    byte-level comparison of otherwise deterministic reports."""
    if isinstance(obj, dict):
        return {
            k: strip_durations(v)
            for k, v in obj.items()
            if k != "duration_seconds"
        }
    if isinstance(obj, list):
        return [strip_durations(v) for v in obj]
    return obj


# ---------------------------------------------------------------------------
# built-in verification suite


def contraction_batch(n: int = 1000, seed: int = 0) -> dict:
    """Seeded random diagonal quadratics over random boxes/balls with
    random feasible start points; every case must contract."""
    sm = SplitMix64(seed ^ 0xC0417AC7)
    failures = 0
    worst = math.inf
    for _ in range(n):
        d = sm.integer(2, 5)
        lam = sm.uniform(0.1, 5.0)
        smooth = lam * sm.uniform(1.0, 10.0)
        diag = np.empty(d)
        diag[0] = lam
        diag[-1] = smooth
        for j in range(1, d - 1):
            diag[j] = sm.uniform(lam, smooth)
        if sm.sign() > 0:
            center = np.array([sm.uniform(-0.3, 0.3) for _ in range(d)])
            domain = Ball(center, sm.uniform(0.5, 1.5))
            direction = np.array([sm.normal() for _ in range(d)])
            norm = float(np.linalg.norm(direction))
            if norm == 0.0:
                direction[0] = 1.0
                norm = 1.0
            radius = domain.radius * sm.uniform() ** (1.0 / d)
            u = domain.center + direction / norm * radius
        else:
            lower = np.array([sm.uniform(-1.2, -0.1) for _ in range(d)])
            upper = np.array([sm.uniform(0.1, 1.2) for _ in range(d)])
            domain = Box(lower, upper)
            u = np.array(
                [sm.uniform(lo, hi) for lo, hi in zip(lower, upper)]
            )
        c = np.array([sm.uniform(-1.5, 1.5) for _ in range(d)])
        b = np.array([sm.uniform(-0.5, 0.5) for _ in range(d)])
        loss = DiagonalQuadratic(diag, c, b)
        res = bnd.check_contraction(loss, domain, u)
        worst = min(worst, res.rhs - res.lhs)
        if not res.ok or res.lhs > res.rhs + 1e-9:
            failures += 1
    return _row(
        "contraction_batch", margin=worst,
        status="pass" if failures == 0 else "fail",
        note="random strongly convex losses, one descent step at 1/L",
        cases=n, failures=failures,
    )


def squared_path_inequality_batch(n: int = 500, seed: int = 0) -> dict:
    """Seeded strongly convex drifting scenarios with exact variation:
    squared path length must stay within 2 * variation / strong convexity."""
    sm = SplitMix64(seed ^ 0x51E97A7B)
    failures = 0
    worst = math.inf
    for _ in range(n):
        d = sm.integer(2, 5)
        lam = sm.uniform(0.1, 5.0)
        smooth = lam * sm.uniform(1.0, 10.0)
        drift = sm.uniform(0.0, 0.05)
        sub_seed = sm.next_u64()
        scenario = drifting_quadratic(d, 30, lam, smooth, drift, sub_seed)
        mins = [f.minimizer(scenario.domain) for f in scenario.losses]
        s_val = squared_path_length(mins)
        v_val, exact = function_variation(scenario.losses, scenario.domain)
        assert exact
        margin = 2.0 * v_val / lam + INEQUALITY_TOL - s_val
        worst = min(worst, margin)
        if margin < 0.0:
            failures += 1
    return _row(
        "squared_path_inequality_batch", margin=worst,
        status="pass" if failures == 0 else "fail",
        note="exact squared path length vs 2 * variation / strong convexity",
        cases=n, failures=failures,
    )


def single_step_identity_row(seed: int = 0) -> dict:
    """The multi-step routine with one inner iteration must reproduce the
    single-step routine bit for bit."""
    scenario = drifting_quadratic(3, 200, 1.0, 2.0, 0.01, seed ^ 0x1D)
    t_multi = run(AlgorithmConfig.omgd(0.3, 1), scenario)
    t_single = run(AlgorithmConfig.ogd(0.3), scenario)
    same = (
        np.array_equal(t_multi.decisions, t_single.decisions)
        and np.array_equal(t_multi.minimizers, t_single.minimizers)
        and np.array_equal(t_multi.loss_values, t_single.loss_values)
        and np.array_equal(t_multi.optimal_values, t_single.optimal_values)
        and t_multi.final_value == t_single.final_value
    )
    return _row(
        "single_step_identity", scenario.label,
        status="pass" if same else "fail",
        note="K=1 multi-step trajectory is bitwise the single-step one",
    )


def projection_property_rows(n: int = 10_000, seed: int = 0) -> list[dict]:
    """Feasibility, idempotence, nonexpansiveness and optimality of the
    three projections on n random draws per set variant."""
    domains = [
        Ball(np.array([0.3, -0.2, 0.1]), 1.3),
        Box(np.array([-1.0, -0.5, 0.0]), np.array([0.5, 1.0, 2.0])),
        Simplex(4),
    ]
    worst = {
        "feasible": math.inf,
        "idempotent": math.inf,
        "nonexpansive": math.inf,
        "optimal": math.inf,
    }
    failures = dict.fromkeys(worst, 0)
    tol = 1e-12
    rng = np.random.default_rng(seed ^ 0x9E0)
    for domain in domains:
        d = domain.dimension
        us = rng.uniform(-2.5, 2.5, size=(n, d))
        vs = rng.uniform(-2.5, 2.5, size=(n, d))
        members = domain.sample(n, rng)
        for u, v, y in zip(us, vs, members):
            pu = domain.project(u)
            pv = domain.project(v)
            m = 0.0 if domain.contains(pu, tol) else -1.0
            worst["feasible"] = min(worst["feasible"], m)
            failures["feasible"] += m < 0.0
            m = tol - float(np.linalg.norm(domain.project(pu) - pu))
            worst["idempotent"] = min(worst["idempotent"], m)
            failures["idempotent"] += m < 0.0
            m = (
                float(np.linalg.norm(u - v))
                + tol
                - float(np.linalg.norm(pu - pv))
            )
            worst["nonexpansive"] = min(worst["nonexpansive"], m)
            failures["nonexpansive"] += m < 0.0
            m = (
                float(np.linalg.norm(u - y))
                + tol
                - float(np.linalg.norm(u - pu))
            )
            worst["optimal"] = min(worst["optimal"], m)
            failures["optimal"] += m < 0.0
    return [
        _row(
            f"projection_{prop}", margin=worst[prop],
            status="pass" if failures[prop] == 0 else "fail",
            cases=3 * n, failures=int(failures[prop]),
        )
        for prop in ("feasible", "idempotent", "nonexpansive", "optimal")
    ]


def gradient_check_row(seed: int = 0, cases: int = 60) -> dict:
    """Analytic gradients vs central finite differences at step 1e-5."""
    rng = np.random.default_rng(seed ^ 0xF1D)
    h = 1e-5
    worst = 0.0
    for _ in range(cases):
        d = int(rng.integers(2, 6))
        pick = rng.integers(0, 3)
        if pick == 0:
            loss = Linear(rng.uniform(-2, 2, d))
        elif pick == 1:
            loss = IsotropicQuadratic(
                float(rng.uniform(0.1, 4.0)), rng.uniform(-1, 1, d)
            )
        else:
            loss = DiagonalQuadratic(
                rng.uniform(0.1, 4.0, d),
                rng.uniform(-1, 1, d),
                rng.uniform(-1, 1, d),
            )
        for _ in range(5):
            x = rng.uniform(-1.5, 1.5, d)
            grad = loss.gradient(x)
            fd = np.empty(d)
            for i in range(d):
                e = np.zeros(d)
                e[i] = h
                fd[i] = (loss.value(x + e) - loss.value(x - e)) / (2.0 * h)
            rel = float(
                np.linalg.norm(fd - grad)
                / max(1.0, float(np.linalg.norm(grad)))
            )
            worst = max(worst, rel)
    return _row(
        "gradient_finite_difference", margin=1e-6 - worst,
        status="pass" if worst <= 1e-6 else "fail",
        note=f"worst relative error {worst:.3e} at step 1e-5",
        cases=cases * 5,
    )


def _expected_regularity_rows(report: RunReport, expected: dict) -> list[dict]:
    reg = report.regularity
    rows = []
    for name, want in expected.items():
        got = getattr(reg, name)
        margin = 1e-12 - abs(got - want)
        rows.append(
            _row(
                "instance_regularity", report.scenario.label, branch=name,
                lhs=got, rhs=want, margin=margin,
                status="pass" if margin >= 0.0 else "fail",
            )
        )
    return rows


def _greedy_exact_rows(report: RunReport) -> list[dict]:
    cell = report.cells[0]
    rep = cell.bound_report
    realized = rep.realized_regret
    rows = [
        _row(
            "greedy_exact_regret", report.scenario.label,
            cell.traj.algorithm,
            lhs=realized, rhs=0.25, margin=1e-12 - abs(realized - 0.25),
            status="pass" if abs(realized - 0.25) <= 1e-12 else "fail",
            note="greedy regret from the barycenter start",
        ),
        _row(
            "greedy_zero_margin", report.scenario.label,
            cell.traj.algorithm, branch="path",
            lhs=realized, rhs=rep.path_bound,
            margin=1e-12 - abs(rep.margins["path"]),
            status="pass" if abs(rep.margins["path"]) <= 1e-12 else "fail",
            note="path branch is tight on the fixed-best-expert scenario",
        ),
    ]
    return rows


def _interior_energy_row(reports: list[RunReport]) -> dict:
    bad = [
        r.scenario.label
        for r in reports
        if r.regularity.gradient_energy != 0.0
    ]
    return _row(
        "interior_gradient_energy",
        status="pass" if not bad else "fail",
        note="drifting scenarios keep every minimizer interior"
        + (f"; nonzero on {bad}" if bad else ""),
        cases=len(reports), failures=len(bad),
    )


def _best_of_three_row(report: RunReport) -> dict:
    rep = report.cells[0].bound_report
    var = rep.variation_bound
    strict = (
        var < rep.path_bound
        and var < rep.squared_path_bound
        and all(rep.applicable.values())
    )
    within = rep.realized_regret <= rep.min_bound + BOUND_TOL
    return _row(
        "best_of_three", report.scenario.label,
        report.cells[0].traj.algorithm,
        lhs=rep.realized_regret, rhs=rep.min_bound,
        margin=rep.min_bound + BOUND_TOL - rep.realized_regret,
        status="pass" if (strict and within) else "fail",
        note=(
            f"variation bound {var:.4f} vs path {rep.path_bound:.4f} "
            f"and squared {rep.squared_path_bound:.4f}"
        ),
    )


DRIFT_GRID = (0.0, 0.001, 0.01)
SMOOTHNESS_GRID = (1.0, 2.0, 5.0)


def builtin_report(seed: int = 0) -> dict:
    """The shipped verification program: every inequality the package
    promises, exercised at desk scale. Returns the full report dict."""
    t_start = time.perf_counter()
    sm = SplitMix64(seed ^ 0xB111D5)
    experiments: list[RunReport] = []
    batch: list[dict] = []

    greedy = [AlgorithmConfig.greedy()]
    auto = [AlgorithmConfig.omgd_auto()]

    exp_alt = run_experiment(
        ExperimentConfig(alternating_leaders(3, 100), greedy)
    )
    exp_fbe = run_experiment(
        ExperimentConfig(fixed_best_expert(100), greedy)
    )
    exp_fbe4 = run_experiment(
        ExperimentConfig(fixed_best_expert(4), greedy)
    )
    exp_lin = run_experiment(
        ExperimentConfig(random_linear(3, 50, 1.0, sm.next_u64()), greedy)
    )
    experiments += [exp_alt, exp_fbe, exp_fbe4, exp_lin]

    sqrt2 = math.sqrt(2.0)
    batch += _expected_regularity_rows(
        exp_alt,
        {
            "path_length": 99.0 * sqrt2,
            "squared_path_length": 198.0,
            "function_variation": 0.99,
        },
    )
    batch += _expected_regularity_rows(
        exp_fbe,
        {
            "path_length": 0.0,
            "squared_path_length": 0.0,
            "function_variation": 49.5,
        },
    )
    batch += _greedy_exact_rows(exp_fbe4)

    drift_reports = []
    for smooth in SMOOTHNESS_GRID:
        for drift in DRIFT_GRID:
            scenario = drifting_quadratic(
                4, 1000, 1.0, smooth, drift, sm.next_u64()
            )
            drift_reports.append(
                run_experiment(ExperimentConfig(scenario, auto))
            )
    experiments += drift_reports
    batch.append(_interior_energy_row(drift_reports))

    exp_lvhp = run_experiment(
        ExperimentConfig(low_variation_high_path(3, 1000, sm.next_u64()), auto)
    )
    experiments.append(exp_lvhp)
    batch.append(_best_of_three_row(exp_lvhp))

    batch.append(contraction_batch(1000, seed))
    batch.append(squared_path_inequality_batch(500, seed))
    batch.append(single_step_identity_row(seed))
    batch.extend(projection_property_rows(10_000, seed))
    batch.append(gradient_check_row(seed))

    ok = all(r.ok for r in experiments) and all(
        row["status"] != "fail" for row in batch
    )
    return {
        "schema": REPORT_SCHEMA,
        "suite": "builtin",
        "backend": BACKEND,
        "seed": seed,
        "experiments": [r.to_config() for r in experiments],
        "batch_verdicts": batch,
        "ok": ok,
        "duration_seconds": time.perf_counter() - t_start,
    }


def collect_rows(report_dict: dict) -> list[dict]:
    """Flatten every verdict row of a run or builtin report."""
    if "experiments" in report_dict:
        rows = []
        for exp in report_dict["experiments"]:
            rows.extend(exp["verdicts"])
        rows.extend(report_dict["batch_verdicts"])
        return rows
    return list(report_dict["verdicts"])

"""Command-line front end.

Subcommands: ``gen`` (write a scenario file), ``run`` (play algorithms on a
scenario and emit reports), ``verify`` (check the regret inequalities;
without a config this runs the shipped built-in suite), ``sweep`` (vary the
horizon or the drift and tabulate regret against the regularities).

Exit codes: 0 pass, 1 verification failure, 2 configuration error,
3 runtime error.
"""

import csv
import json
import math
import sys
from pathlib import Path

import click
import numpy as np

from omgd import harness
from omgd._backend import BACKEND
from omgd.algorithms import AlgorithmConfig
from omgd.errors import ConfigError
from omgd.regularity import measure
from omgd.scenarios import GENERATORS, dump_scenario

EXIT_VERIFY_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_RUNTIME_ERROR = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guarded(fn):
    try:
        fn()
    except ConfigError as exc:
        _fail(EXIT_CONFIG_ERROR, str(exc))
    except click.ClickException:
        raise
    except Exception as exc:  # noqa: BLE001 - boundary of the CLI
        _fail(EXIT_RUNTIME_ERROR, f"{type(exc).__name__}: {exc}")


def _load_config_file(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}")


def _parse_alpha_grid(spec: str | None):
    if spec is None:
        return None
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError("--alpha-grid expects lo:hi:points")
    try:
        lo, hi, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"bad --alpha-grid {spec!r}")
    if lo <= 0 or hi < lo or points < 1:
        raise ConfigError(f"bad --alpha-grid {spec!r}")
    return tuple(np.logspace(math.log10(lo), math.log10(hi), points))


def _format_num(value) -> str:
    if value is None:
        return "-"
    return f"{value:.6g}"


def _print_rows(rows):
    if not rows:
        click.echo("no checks enabled")
        return
    header = ("check", "scenario", "algorithm", "branch",
              "lhs", "rhs", "margin", "status")
    table = [header]
    for r in rows:
        table.append(
            (
                r["check"],
                r["scenario"][:38],
                r["algorithm"][:28],
                r["branch"],
                _format_num(r["lhs"]),
                _format_num(r["rhs"]),
                _format_num(r["margin"]),
                r["status"],
            )
        )
    widths = [max(len(row[i]) for row in table) for i in range(len(header))]
    for row in table:
        click.echo("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
    n_fail = sum(r["status"] == "fail" for r in rows)
    n_pass = sum(r["status"] == "pass" for r in rows)
    n_skip = sum(r["status"] == "skip" for r in rows)
    click.echo(f"{n_pass} pass, {n_fail} fail, {n_skip} skip")


@click.group()
def main():
    """Online gradient methods on non-stationary scenarios, with
    regret-bound verification."""


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(),
              help="Experiment config JSON (see README).")
@click.option("--out", "out_dir", default="omgd-out", show_default=True,
              help="Output directory.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
              default="json", show_default=True)
@click.option("--alpha-grid", default=None,
              help="lo:hi:points log grid for the squared-path bound.")
def run(config_path, out_dir, fmt, alpha_grid):
    """Run the configured algorithms on a scenario and emit reports."""

    def body():
        cfg = _load_config_file(config_path)
        experiment = harness.experiment_from_config(
            cfg, base_dir=Path(config_path).parent
        )
        grid = _parse_alpha_grid(alpha_grid)
        if grid is not None:
            experiment.alpha_grid = grid
        report = harness.run_experiment(experiment)
        paths = harness.emit_report(report, out_dir, fmt)
        _print_rows(report.verdicts)
        for p in paths:
            click.echo(f"wrote {p}")
        if not report.ok:
            sys.exit(EXIT_VERIFY_FAILED)

    _guarded(body)


@main.command()
@click.option("--config", "config_path", default=None, type=click.Path(),
              help="Experiment config JSON; omit to run the built-in suite.")
@click.option("--out", "out_dir", default=None,
              help="Directory for the JSON verification report.")
@click.option("--seed", default=0, show_default=True, type=int,
              help="Seed for the built-in suite's randomized batches.")
def verify(config_path, out_dir, seed):
    """Verify the regret inequalities; exit 0 only if every check passes."""

    def body():
        if config_path is None:
            report_dict = harness.builtin_report(seed)
        else:
            cfg = _load_config_file(config_path)
            experiment = harness.experiment_from_config(
                cfg, base_dir=Path(config_path).parent
            )
            report = harness.run_experiment(experiment)
            report_dict = report.to_config()
        rows = harness.collect_rows(report_dict)
        _print_rows(rows)
        if out_dir is not None:
            out = Path(out_dir)
            out.mkdir(parents=True, exist_ok=True)
            path = out / "verify_report.json"
            path.write_text(
                json.dumps(report_dict, sort_keys=True, indent=2) + "\n"
            )
            click.echo(f"wrote {path}")
        if any(r["status"] == "fail" for r in rows):
            sys.exit(EXIT_VERIFY_FAILED)

    _guarded(body)


@main.command()
@click.option("--kind", required=True, type=click.Choice(sorted(GENERATORS)))
@click.option("--dim", default=3, show_default=True, type=int)
@click.option("--horizon", default=100, show_default=True, type=int)
@click.option("--strong-convexity", default=1.0, show_default=True, type=float)
@click.option("--smoothness", default=1.0, show_default=True, type=float)
@click.option("--drift", default=0.01, show_default=True, type=float)
@click.option("--scale", default=1.0, show_default=True, type=float)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_path", required=True, type=click.Path())
def gen(kind, dim, horizon, strong_convexity, smoothness, drift, scale, seed,
        out_path):
    """Generate a scenario file."""

    def body():
        if kind == "alternating-leaders":
            scenario = GENERATORS[kind](dim, horizon)
        elif kind == "fixed-best-expert":
            scenario = GENERATORS[kind](horizon)
        elif kind == "drifting-quadratic":
            scenario = GENERATORS[kind](
                dim, horizon, strong_convexity, smoothness, drift, seed
            )
        elif kind == "low-variation-high-path":
            scenario = GENERATORS[kind](dim, horizon, seed)
        else:
            scenario = GENERATORS[kind](dim, horizon, scale, seed)
        Path(out_path).write_text(dump_scenario(scenario))
        click.echo(f"wrote {out_path} ({scenario.label})")

    _guarded(body)


@main.command()
@click.option("--kind", default="drifting-quadratic", show_default=True,
              type=click.Choice(["drifting-quadratic", "low-variation-high-path"]))
@click.option("--vary", required=True, type=click.Choice(["horizon", "drift"]))
@click.option("--values", required=True,
              help="Comma-separated values of the varied parameter.")
@click.option("--dim", default=3, show_default=True, type=int)
@click.option("--horizon", default=1000, show_default=True, type=int)
@click.option("--strong-convexity", default=1.0, show_default=True, type=float)
@click.option("--smoothness", default=1.0, show_default=True, type=float)
@click.option("--drift", default=0.01, show_default=True, type=float)
@click.option("--algorithm", default="omgd-auto", show_default=True,
              type=click.Choice(["omgd-auto", "greedy"]))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", "out_path", required=True, type=click.Path())
def sweep(kind, vary, values, dim, horizon, strong_convexity, smoothness,
          drift, algorithm, seed, out_path):
    """Tabulate regret and bounds against the regularities while one
    scenario parameter varies."""

    def body():
        try:
            points = [float(v) for v in values.split(",") if v.strip()]
        except ValueError:
            raise ConfigError(f"bad --values {values!r}")
        if not points:
            raise ConfigError("--values is empty")
        if vary == "drift" and kind != "drifting-quadratic":
            raise ConfigError("--vary drift needs --kind drifting-quadratic")
        algo = (
            AlgorithmConfig.omgd_auto()
            if algorithm == "omgd-auto"
            else AlgorithmConfig.greedy()
        )
        rows = []
        for value in points:
            t_horizon = int(value) if vary == "horizon" else horizon
            t_drift = value if vary == "drift" else drift
            if kind == "drifting-quadratic":
                scenario = GENERATORS[kind](
                    dim, t_horizon, strong_convexity, smoothness, t_drift, seed
                )
            else:
                scenario = GENERATORS[kind](dim, t_horizon, seed)
            report = harness.run_experiment(
                harness.ExperimentConfig(scenario, [algo], {})
            )
            cell = report.cells[0]
            reg = report.regularity
            rep = cell.bound_report
            rows.append(
                [
                    vary,
                    repr(value),
                    repr(reg.path_length),
                    repr(reg.squared_path_length),
                    repr(reg.function_variation),
                    repr(rep.realized_regret),
                    repr(rep.path_bound),
                    repr(rep.squared_path_bound),
                    repr(rep.variation_bound),
                    repr(rep.min_bound),
                ]
            )
        with open(out_path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                [
                    "varied", "value", "path_length", "squared_path_length",
                    "function_variation", "realized_regret", "path_bound",
                    "squared_path_bound", "variation_bound", "min_bound",
                ]
            )
            writer.writerows(rows)
        click.echo(f"wrote {out_path} ({len(rows)} rows, backend {BACKEND})")

    _guarded(body)


if __name__ == "__main__":
    main()

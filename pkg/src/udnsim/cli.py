"""Command-line front end: config parsing, sweep runs, CSV and manifest output."""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import yaml

from . import __version__
from .config import (ConfigError, EngineParams, ScenarioConfig, SweepSpec,
                     engine_from_dict, scenario_from_dict, scenario_to_dict,
                     sweep_from_dict)
from .engine import run_sweep
from .metrics import SweepPointResult

CSV_HEADER = ("lambda_bs_per_km2,deployment,variant,L_m,gamma_db,"
              "active_density,active_density_eq5,p_cov,p_cov_ci,"
              "reliable_ue_density,n_sinr_samples,n_drops")


def parse_config(path: str) -> tuple[ScenarioConfig, SweepSpec, EngineParams]:
    """Load and validate a YAML configuration file.

    An empty file yields the full default parameter set.  Unknown keys and
    out-of-range values raise ConfigError naming the offending key.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"config file: {exc}") from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"config file: malformed YAML: {exc}") from exc
    if doc is None:
        doc = {}
    cfg = scenario_from_dict(doc)
    sweep = sweep_from_dict(doc, cfg)
    engine = engine_from_dict(doc)
    return cfg, sweep, engine


def format_value(v: float) -> str:
    """Stable decimal rendering with at least nine significant digits."""
    if isinstance(v, float) and math.isnan(v):
        return "nan"
    if v == 0 or abs(v) >= 0.1:
        return f"{v:.9f}"
    return f"{v:.9e}"


def csv_lines(results: list[SweepPointResult]) -> list[str]:
    lines = [CSV_HEADER]
    for res in results:
        for gamma in sorted(res.coverage):
            cov = res.coverage[gamma]
            lines.append(",".join([
                format_value(res.bs_density),
                res.deployment,
                res.variant,
                format_value(res.antenna_height_diff),
                format_value(gamma),
                format_value(res.active_density),
                format_value(res.analytical_active_density),
                format_value(cov.estimate),
                format_value(cov.ci_half_width),
                format_value(res.reliable_density[gamma]),
                str(cov.n),
                str(res.n_drops),
            ]))
    return lines


def emit_csv(results: list[SweepPointResult], path: str) -> None:
    """One row per (sweep point, threshold), rows in grid order, stable bytes."""
    if not results:
        raise ValueError("emit_csv requires non-empty results")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(csv_lines(results)) + "\n")


def write_manifest(path: str, cfg: ScenarioConfig, sweep: SweepSpec,
                   engine: EngineParams, results: list[SweepPointResult],
                   wall_clock_s: float) -> None:
    manifest = {
        "tool": "udnsim",
        "version": __version__,
        "master_seed": cfg.master_seed,
        "workers": engine.workers,
        "wall_clock_s": round(wall_clock_s, 3),
        "config": scenario_to_dict(cfg, sweep, engine),
        "points": [
            {
                "lambda_bs_per_km2": res.bs_density,
                "deployment": res.deployment,
                "variant": res.variant,
                "L_m": res.antenna_height_diff,
                "area_km2": res.area_km2,
                "n_drops": res.n_drops,
                "ci_converged": res.ci_converged,
            }
            for res in results
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _apply_overrides(cfg: ScenarioConfig, engine: EngineParams,
                     args: argparse.Namespace) -> tuple[ScenarioConfig, EngineParams]:
    from dataclasses import replace
    if args.seed is not None:
        cfg = replace(cfg, master_seed=args.seed)
        cfg.validate()
    if args.workers is not None:
        if args.workers < 1:
            raise ConfigError("engine.workers: must be a positive integer")
        engine = replace(engine, workers=args.workers)
    if args.max_drops is not None:
        if args.max_drops < 1:
            raise ConfigError("engine.max_drops: must be a positive integer")
        engine = replace(engine, max_drops=args.max_drops)
    return cfg, engine


def _cmd_run(args: argparse.Namespace) -> int:
    cfg, sweep, engine = parse_config(args.config)
    cfg, engine = _apply_overrides(cfg, engine, args)
    t0 = time.perf_counter()
    results = run_sweep(cfg, sweep, engine, progress=not args.quiet)
    wall = time.perf_counter() - t0
    emit_csv(results, args.out)
    write_manifest(args.out + ".manifest.json", cfg, sweep, engine, results, wall)
    if not args.quiet:
        print(f"[udnsim] wrote {args.out} ({len(results)} points, {wall:.1f}s)",
              file=sys.stderr)
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    cfg, sweep, engine = parse_config(args.config)
    print(f"ok: {sweep.n_points()} sweep point(s), "
          f"seed {cfg.master_seed}, min drops {cfg.drops}, "
          f"max drops {engine.max_drops}, ci target {engine.ci_target}")
    return 0


def _cmd_eq5(args: argparse.Namespace) -> int:
    from .association import analytical_active_density
    cfg, sweep, _ = parse_config(args.config)
    print("lambda_bs_per_km2,active_density_eq5")
    for lam in sweep.bs_densities:
        value = analytical_active_density(lam, cfg.ue_density, cfg.idle_mode_q)
        print(f"{format_value(lam)},{format_value(value)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="udnsim",
        description="Monte Carlo simulator for uplink IoT ultra-dense networks")
    parser.add_argument("--version", action="version", version=f"udnsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run the configured sweep and write CSV + manifest")
    run.add_argument("--config", required=True, help="YAML configuration file")
    run.add_argument("--out", required=True, help="output CSV path")
    run.add_argument("--seed", type=int, default=None, help="override master_seed")
    run.add_argument("--workers", type=int, default=None, help="parallel drop workers")
    run.add_argument("--max-drops", type=int, default=None,
                     help="override the per-point drop budget")
    run.add_argument("--quiet", action="store_true", help="suppress progress output")
    run.set_defaults(func=_cmd_run)

    validate = sub.add_parser("validate", help="check a configuration file")
    validate.add_argument("--config", required=True)
    validate.set_defaults(func=_cmd_validate)

    eq5 = sub.add_parser(
        "eq5", help="print the closed-form active-BS density for the configured grid")
    eq5.add_argument("--config", required=True)
    eq5.set_defaults(func=_cmd_eq5)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

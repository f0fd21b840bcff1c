"""Command-line interface.

Subcommands: ``run <config.toml>``, ``recipe <name>``, ``scan-params``,
``check-regularity <problem>``, ``measure <problem> <x> <y>``.  Exit
status 0 on success, 1 on configuration errors, 2 on numeric failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import recipes
from .analysis import interaction_dominance, weak_mvi_rho
from .errors import ConfigError, DsgdaError, NumericsError
from .harness import export_feasibility_csv, parse_config, run_config
from .measures import stationarity_report
from .problems import builtin


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


_FLAG_DEFAULTS = {"out": "results", "tol": None, "max_iters": None,
                  "format": "csv", "parallel": 1, "seed": 0}


def build_parser() -> argparse.ArgumentParser:
    # the common flags are accepted both before and after the subcommand
    common = _Parser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS,
                        help="output directory (default: results)")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                        help="stopping tolerance override")
    common.add_argument("--max-iters", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("csv", "json"),
                        default=argparse.SUPPRESS)
    common.add_argument("--parallel", type=int, default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)

    parser = _Parser(
        prog="dsgda",
        description="Minimax benchmark harness for smoothed gradient descent ascent",
        parents=[common])
    sub = parser.add_subparsers(dest="command")

    p_run = sub.add_parser("run", help="run a TOML experiment config",
                           parents=[common])
    p_run.add_argument("config")

    p_recipe = sub.add_parser("recipe", help="run a built-in benchmark recipe",
                              parents=[common])
    p_recipe.add_argument("name", choices=recipes.RECIPE_NAMES)

    sub.add_parser("scan-params", help="scan the (t1, t2) feasibility region",
                   parents=[common])

    p_reg = sub.add_parser("check-regularity",
                           help="weak-MVI and interaction-dominance probes",
                           parents=[common])
    p_reg.add_argument("problem")

    p_meas = sub.add_parser("measure", help="stationarity residuals at a point",
                            parents=[common])
    p_meas.add_argument("problem")
    p_meas.add_argument("x", type=float)
    p_meas.add_argument("y", type=float)
    p_meas.add_argument("--r1", type=float, default=None,
                        help="prox weight for the optimization residual")
    return parser


def _cmd_run(args) -> int:
    from dataclasses import replace

    cfg = parse_config(args.config)
    if args.tol is not None or args.max_iters is not None:
        stop = replace(cfg.stop, tol=args.tol or cfg.stop.tol,
                       max_iters=args.max_iters or cfg.stop.max_iters)
        cfg = replace(cfg, stop=stop)
    if cfg.outputs is None:
        cfg = replace(cfg, outputs=args.out)
    if args.format != "csv":
        cfg = replace(cfg, fmt=args.format)
    out = run_config(cfg)
    for res in out if isinstance(out, list) else [out]:
        print(f"{res.config.resolved_label()}: {res.outcome.kind} "
              f"after {res.iterations} iterations, residuals "
              f"({res.final_residuals[0]:.3e}, {res.final_residuals[1]:.3e}) "
              f"[{res.wall_time:.2f}s] -> {res.trajectory_path}")
    return 0


def _cmd_recipe(args) -> int:
    summary = recipes.run_recipe(
        args.name, out_dir=args.out, fmt=args.format,
        parallelism=args.parallel, seed=args.seed,
        tol=args.tol, max_iters=args.max_iters)
    for line in summary.lines:
        print(line)
    return 0 if summary.ok else 2


def _cmd_scan_params(args) -> int:
    from .analysis import feasibility_scan
    scan = feasibility_scan(L=1.0, beta=1.0 / 5000, mu=1.0 / 5000)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "feasibility.csv"
    export_feasibility_csv(scan, path)
    print(f"feasible points: {int(scan.feasible.sum())} / {scan.feasible.size} "
          f"-> {path}")
    return 0


def _cmd_check_regularity(args) -> int:
    prob = builtin(args.problem)
    if prob.stationary_point is None:
        raise ConfigError(f"problem '{args.problem}' has no recorded stationary point")
    u_star = prob.stationary_point
    scan = weak_mvi_rho(prob, u_star)
    report = {
        "problem": prob.name,
        "u_star": list(u_star),
        "rho_min": scan.rho_min,
        "rho_argmin": list(scan.argmin),
        "weak_mvi_threshold": scan.threshold,
        "weak_mvi_violated": scan.rho_min < scan.threshold,
    }
    if prob.second_derivs is not None:
        eta = prob.lip
        vx, vy = interaction_dominance(
            prob, float(scan.argmin[0]), float(scan.argmin[1]), eta)
        report["interaction_value_x_at_argmin"] = vx
        report["interaction_value_y_at_argmin"] = vy
        report["eta"] = eta
    print(json.dumps(report, indent=1))
    return 0


def _cmd_measure(args) -> int:
    prob = builtin(args.problem)
    rep = stationarity_report(prob, args.x, args.y, r1=args.r1)
    payload = {"problem": prob.name, "at": [args.x, args.y],
               "gs_x": rep.gs_x, "gs_y": rep.gs_y}
    if rep.os is not None:
        payload["os"] = rep.os
    print(json.dumps(payload, indent=1))
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in _FLAG_DEFAULTS.items():
        if not hasattr(args, name):
            setattr(args, name, default)
    handlers = {
        "run": _cmd_run,
        "recipe": _cmd_recipe,
        "scan-params": _cmd_scan_params,
        "check-regularity": _cmd_check_regularity,
        "measure": _cmd_measure,
    }
    if args.command is None:
        parser.print_usage()
        return 1
    try:
        return handlers[args.command](args)
    except (ConfigError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericsError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    except DsgdaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

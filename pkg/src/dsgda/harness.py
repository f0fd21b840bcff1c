"""Configuration-driven experiment runner and exporter.

A RunConfig names a registry problem, an algorithm, parameters, an
initialization (a point, an interior lattice ``grid(n)``, or a seeded
``random(n)`` batch), a stopping rule, and a recording stride.  Running a
config produces a RunResult whose outcome class matches the measures
module's classifier on the recorded trajectory, and writes the trajectory
to disk.  Exports are deterministic: identical configs give byte-identical
files (wall time is reported in memory only).
"""

from __future__ import annotations

import concurrent.futures
import json
import math
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ConfigError, ParameterError
from .measures import OutcomeClass, classify
from .problems import MinimaxProblem, SmoothedState, builtin
from .solvers import ALGORITHMS, AlgoParams, StoppingRule, Trajectory, run

_FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class RunConfig:
    problem: str
    algorithm: str = "dsgda"
    params: Optional[AlgoParams] = None
    init: object = None  # (x0, y0) | "grid(n)" | "random(n)"
    stop: StoppingRule = field(default_factory=StoppingRule)
    every_k: int = 1
    outputs: Optional[str] = None
    seed: int = 0
    label: str = ""
    fmt: str = "csv"

    def __post_init__(self):
        # canonicalize point inits to float tuples so configs hash, compare,
        # and round-trip exactly
        if self.init is not None and not isinstance(self.init, str):
            x0, y0 = self.init
            x0 = tuple(float(t) for t in np.atleast_1d(np.asarray(x0, dtype=float)))
            y0 = tuple(float(t) for t in np.atleast_1d(np.asarray(y0, dtype=float)))
            object.__setattr__(self, "init", (x0, y0))

    def resolved_label(self) -> str:
        return self.label or f"{self.problem}-{self.algorithm}"


@dataclass
class RunResult:
    config: RunConfig
    outcome: OutcomeClass
    final_x: np.ndarray
    final_y: np.ndarray
    iterations: int
    final_residuals: tuple
    wall_time: float
    trajectory_path: Optional[str]
    termination: str
    error: Optional[str] = None


def default_baseline_params(prob: MinimaxProblem) -> AlgoParams:
    """Baseline stepsizes 1/(2L) when a config leaves them unspecified."""
    s = 1.0 / (2.0 * prob.lip)
    return AlgoParams(c=s, alpha=s, beta=0.5, mu=0.5, r1=prob.lip, r2=prob.lip)


def _inits(cfg: RunConfig, prob: MinimaxProblem):
    init = cfg.init
    if init is None:
        raise ConfigError("config field 'init' is required")
    if isinstance(init, str):
        m = re.match(r"^(grid|random)\((\d+)\)$", init.strip())
        if not m:
            raise ConfigError(f"config field 'init': cannot parse '{init}'")
        kind, n = m.group(1), int(m.group(2))
        dims = prob.dim_x + prob.dim_y
        if kind == "grid":
            per_axis = round(n ** (1.0 / dims))
            if per_axis**dims != n:
                raise ConfigError(
                    f"config field 'init': grid({n}) is not a {dims}-dim lattice size")
            lo = np.concatenate([prob.box_x.lower, prob.box_y.lower])
            hi = np.concatenate([prob.box_x.upper, prob.box_y.upper])
            axes = [lo[i] + (hi[i] - lo[i]) * np.arange(1, per_axis + 1) / (per_axis + 1)
                    for i in range(dims)]
            mesh = np.meshgrid(*axes, indexing="ij")
            pts = np.stack([m.ravel() for m in mesh], axis=-1)
        else:
            # counter-based generator: the seed fully determines the batch
            rng = np.random.Generator(np.random.Philox(cfg.seed))
            lo = np.concatenate([prob.box_x.lower, prob.box_y.lower])
            hi = np.concatenate([prob.box_x.upper, prob.box_y.upper])
            pts = rng.uniform(lo, hi, size=(n, dims))
        return [(p[: prob.dim_x], p[prob.dim_x:]) for p in pts]
    x0, y0 = init
    return [(np.atleast_1d(np.asarray(x0, dtype=float)),
             np.atleast_1d(np.asarray(y0, dtype=float)))]


def run_config(cfg: RunConfig) -> "RunResult | list[RunResult]":
    """Execute a config: solve, classify, export.  Lattice/batch inits
    return one result per initialization."""
    try:
        prob = builtin(cfg.problem)
    except KeyError as e:
        raise ConfigError(str(e)) from None
    if cfg.algorithm not in ALGORITHMS:
        raise ConfigError(
            f"config field 'algorithm': '{cfg.algorithm}' is not one of {ALGORITHMS}")
    params = cfg.params or default_baseline_params(prob)
    inits = _inits(cfg, prob)
    results = []
    for idx, (x0, y0) in enumerate(inits):
        if not prob.box_x.contains(x0) or not prob.box_y.contains(y0):
            raise ConfigError(f"config field 'init': point {idx} outside the boxes")
        t0 = time.perf_counter()
        traj = run(prob, params, SmoothedState.from_xy(x0, y0), cfg.stop,
                   algorithm=cfg.algorithm, record_every=cfg.every_k)
        wall = time.perf_counter() - t0
        outcome = classify(traj, prob)
        path = None
        if cfg.outputs is not None:
            out_dir = Path(cfg.outputs)
            out_dir.mkdir(parents=True, exist_ok=True)
            suffix = f"-{idx}" if len(inits) > 1 else ""
            path = str(out_dir / f"{cfg.resolved_label()}{suffix}.{cfg.fmt}")
            export_trajectory(traj, path, cfg.fmt)
        results.append(RunResult(
            config=cfg, outcome=outcome, final_x=traj.xs[-1], final_y=traj.ys[-1],
            iterations=traj.iterations, final_residuals=traj.final_residuals,
            wall_time=wall, trajectory_path=path, termination=traj.termination))
    return results[0] if len(results) == 1 else results


def _run_one(cfg: RunConfig):
    try:
        out = run_config(cfg)
        return out if isinstance(out, list) else [out]
    except Exception as exc:  # per-member failure; the batch continues
        return [RunResult(
            config=cfg, outcome=OutcomeClass("error", {"message": str(exc)}),
            final_x=np.array([]), final_y=np.array([]), iterations=0,
            final_residuals=(math.nan, math.nan), wall_time=0.0,
            trajectory_path=None, termination="error", error=str(exc))]


def run_batch(configs, parallelism: int = 1) -> list:
    """Run configs in declaration order; results are identical to the
    sequential execution regardless of parallelism (each run writes only
    its own files)."""
    if parallelism <= 1 or len(configs) <= 1:
        nested = [_run_one(c) for c in configs]
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=parallelism) as pool:
            nested = list(pool.map(_run_one, configs))
    return [r for group in nested for r in group]


# ---------------------------------------------------------------------------
# Trajectory and scan exports


def _col_names(dim_x: int, dim_y: int):
    cols = ["iter"]
    for prefix, d in (("x", dim_x), ("y", dim_y), ("z", dim_x), ("v", dim_y)):
        cols += [f"{prefix}{i}" for i in range(d)]
    return cols + ["gs_x", "gs_y"]


def export_trajectory(traj: Trajectory, path, fmt: str = "csv") -> None:
    """Write recorded iterates: columns iter, x*, y*, z*, v*, gs_x, gs_y
    with 17-significant-digit floats; JSON mirrors the same fields."""
    cols = _col_names(traj.xs.shape[1], traj.ys.shape[1])
    rows = np.concatenate(
        [traj.xs, traj.ys, traj.zs, traj.vs, traj.residuals], axis=1)
    path = Path(path)
    if fmt == "csv":
        with path.open("w", newline="") as fh:
            fh.write(",".join(cols) + "\n")
            for it, row in zip(traj.recorded_iters, rows):
                fh.write(str(int(it)) + "," +
                         ",".join(_FLOAT_FMT % v for v in row) + "\n")
    elif fmt == "json":
        payload = {
            "problem": traj.problem,
            "algorithm": traj.algorithm,
            "termination": traj.termination,
            "iterations": int(traj.iterations),
            "columns": cols,
            "rows": [[int(it)] + [float(_FLOAT_FMT % v) for v in row]
                     for it, row in zip(traj.recorded_iters, rows)],
        }
        path.write_text(json.dumps(payload, indent=1) + "\n")
    else:
        raise ConfigError(f"unknown export format '{fmt}' (csv or json)")


def read_trajectory_csv(path, problem: str = "", algorithm: str = "",
                        termination: str = "", iterations: int = None) -> Trajectory:
    """Rebuild a trajectory from an exported CSV (exact round trip)."""
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().strip().split(",")
        data = [line.strip().split(",") for line in fh if line.strip()]
    dims = {}
    for prefix in ("x", "y", "z", "v"):
        dims[prefix] = sum(1 for c in header if re.match(rf"^{prefix}\d+$", c))
    rows = np.array([[float(v) for v in row] for row in data])
    iters = rows[:, 0].astype(np.int64)
    offset = 1
    blocks = {}
    for prefix in ("x", "y", "z", "v"):
        blocks[prefix] = rows[:, offset:offset + dims[prefix]]
        offset += dims[prefix]
    residuals = rows[:, offset:offset + 2]
    return Trajectory(
        xs=blocks["x"], ys=blocks["y"], zs=blocks["z"], vs=blocks["v"],
        recorded_iters=iters, residuals=residuals,
        termination=termination, problem=problem, algorithm=algorithm,
        iterations=int(iters[-1]) if iterations is None else iterations)


def export_feasibility_csv(scan, path) -> None:
    with Path(path).open("w", newline="") as fh:
        fh.write("t1,t2,feasible\n")
        for t1, t2, ok in scan.to_rows():
            fh.write(f"{_FLOAT_FMT % t1},{_FLOAT_FMT % t2},{int(ok)}\n")


def export_rho_csv(prob, u_star, path, resolution: int = 201) -> None:
    """Dense rho(u) samples over the box as x,y,rho rows."""
    from .analysis import rho_value
    xs = np.linspace(prob.box_x.lower[0], prob.box_x.upper[0], resolution)
    ys = np.linspace(prob.box_y.lower[0], prob.box_y.upper[0], resolution)
    with Path(path).open("w", newline="") as fh:
        fh.write("x,y,rho\n")
        for xv in xs:
            for yv in ys:
                try:
                    r = rho_value(prob, u_star, float(xv), float(yv))
                except ParameterError:
                    continue
                fh.write(f"{_FLOAT_FMT % xv},{_FLOAT_FMT % yv},{_FLOAT_FMT % r}\n")


# ---------------------------------------------------------------------------
# Config file round trip (TOML)


def serialize_config(cfg: RunConfig) -> str:
    lines = [
        f'problem = "{cfg.problem}"',
        f'algorithm = "{cfg.algorithm}"',
    ]
    if isinstance(cfg.init, str):
        lines.append(f'init = "{cfg.init}"')
    else:
        x0, y0 = cfg.init
        lines.append(f"init = [{list(x0)}, {list(y0)}]")
    if cfg.outputs is not None:
        lines.append(f'outputs = "{cfg.outputs}"')
    if cfg.label:
        lines.append(f'label = "{cfg.label}"')
    lines.append(f"seed = {cfg.seed}")
    if cfg.params is not None:
        lines.append("\n[params]")
        for name in ("c", "alpha", "beta", "mu", "r1", "r2"):
            lines.append(f"{name} = {_FLOAT_FMT % getattr(cfg.params, name)}")
    lines.append("\n[stop]")
    lines.append(f"tol = {_FLOAT_FMT % cfg.stop.tol}")
    lines.append(f"max_iters = {cfg.stop.max_iters}")
    lines.append(f'mode = "{cfg.stop.mode}"')
    lines.append("\n[record]")
    lines.append(f"every-k = {cfg.every_k}")
    return "\n".join(lines) + "\n"


_TOP_KEYS = {"problem", "algorithm", "params", "init", "stop", "record",
             "outputs", "seed", "label"}


def parse_config(text_or_path) -> RunConfig:
    """Parse a TOML run config; unknown keys are errors (fail-fast)."""
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    p = Path(str(text_or_path))
    if p.suffix == ".toml":
        if not p.exists():
            raise ConfigError(f"config file not found: {p}")
        raw = p.read_text()
    else:
        raw = str(text_or_path)
    try:
        data = tomllib.loads(raw)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"config parse error: {e}") from None

    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "problem" not in data:
        raise ConfigError("config field 'problem' is required")

    params = None
    if "params" in data:
        pd = dict(data["params"])
        unknown = set(pd) - {"c", "alpha", "beta", "mu", "r1", "r2"}
        if unknown:
            raise ConfigError(f"unknown keys in [params]: {sorted(unknown)}")
        try:
            params = AlgoParams(**pd)
        except (TypeError, ParameterError) as e:
            raise ConfigError(f"invalid [params]: {e}") from None

    stop = StoppingRule()
    if "stop" in data:
        sd = dict(data["stop"])
        unknown = set(sd) - {"tol", "max_iters", "mode"}
        if unknown:
            raise ConfigError(f"unknown keys in [stop]: {sorted(unknown)}")
        try:
            stop = StoppingRule(**sd)
        except (TypeError, ParameterError) as e:
            raise ConfigError(f"invalid [stop]: {e}") from None

    every_k = 1
    if "record" in data:
        rd = dict(data["record"])
        unknown = set(rd) - {"every-k", "every_k"}
        if unknown:
            raise ConfigError(f"unknown keys in [record]: {sorted(unknown)}")
        every_k = int(rd.get("every-k", rd.get("every_k", 1)))
        if every_k < 1:
            raise ConfigError("config field 'record.every-k' must be >= 1")

    init = data.get("init")
    if isinstance(init, list):
        init = (np.asarray(init[0], dtype=float), np.asarray(init[1], dtype=float))

    return RunConfig(
        problem=data["problem"], algorithm=data.get("algorithm", "dsgda"),
        params=params, init=init, stop=stop, every_k=every_k,
        outputs=data.get("outputs"), seed=int(data.get("seed", 0)),
        label=data.get("label", ""))

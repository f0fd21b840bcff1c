"""Experiment runner: config round trips, batch determinism, exports,
and the CLI surface."""

import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from dsgda import AlgoParams, ConfigError, StoppingRule, builtin
from dsgda.harness import (
    RunConfig,
    export_trajectory,
    parse_config,
    read_trajectory_csv,
    run_batch,
    run_config,
    serialize_config,
)
from dsgda.solvers import SmoothedState, run

KL_PARAMS = AlgoParams(c=0.04, alpha=0.04, beta=0.8, mu=0.8, r1=0.125, r2=0.125)


def kl_config(tmp_path, **kw):
    base = dict(problem="kl_nonconcave", algorithm="dsgda", params=KL_PARAMS,
                init=(0.5, 0.5), stop=StoppingRule(tol=1e-6, max_iters=10**6),
                outputs=str(tmp_path), label="kl-test")
    base.update(kw)
    return RunConfig(**base)


class TestRunConfig:
    def test_single_run_outcome(self, tmp_path):
        res = run_config(kl_config(tmp_path))
        assert res.outcome.kind == "converged"
        assert res.termination == "converged"
        assert np.hypot(res.final_x[0], res.final_y[0]) < 1e-3
        assert Path(res.trajectory_path).exists()

    def test_unknown_problem_is_config_error(self, tmp_path):
        with pytest.raises(ConfigError, match="registry"):
            run_config(kl_config(tmp_path, problem="martian_game"))

    def test_unknown_algorithm_is_config_error(self, tmp_path):
        with pytest.raises(ConfigError, match="algorithm"):
            run_config(kl_config(tmp_path, algorithm="newton"))

    def test_init_outside_box_rejected(self, tmp_path):
        with pytest.raises(ConfigError, match="init"):
            run_config(kl_config(tmp_path, init=(5.0, 0.0)))

    def test_grid_init_runs_lattice(self, tmp_path):
        results = run_config(kl_config(tmp_path, init="grid(9)"))
        assert len(results) == 9
        assert all(r.outcome.kind == "converged" for r in results)

    def test_grid_init_must_be_lattice_size(self, tmp_path):
        with pytest.raises(ConfigError, match="lattice"):
            run_config(kl_config(tmp_path, init="grid(7)"))

    def test_random_init_seeded(self, tmp_path):
        a = run_config(kl_config(tmp_path, init="random(3)", seed=12))
        b = run_config(kl_config(tmp_path, init="random(3)", seed=12))
        c = run_config(kl_config(tmp_path, init="random(3)", seed=13))
        xa = [r.final_x[0] for r in a]
        xb = [r.final_x[0] for r in b]
        assert xa == xb
        assert [r.iterations for r in a] != [r.iterations for r in c] or \
            [r.final_x[0] for r in c] != xa


class TestRunBatch:
    def test_parallel_matches_sequential(self, tmp_path):
        cfgs = [kl_config(tmp_path / "seq", init=(x0, 0.3), label=f"p{i}")
                for i, x0 in enumerate((-0.5, 0.1, 0.6))]
        seq = run_batch(cfgs, parallelism=1)
        par_cfgs = [kl_config(tmp_path / "par", init=(x0, 0.3), label=f"p{i}")
                    for i, x0 in enumerate((-0.5, 0.1, 0.6))]
        par = run_batch(par_cfgs, parallelism=3)
        for a, b in zip(seq, par):
            assert a.iterations == b.iterations
            assert a.final_x[0] == b.final_x[0]
            assert a.final_residuals == b.final_residuals

    def test_empty_batch(self):
        assert run_batch([]) == []

    def test_member_failure_recorded_batch_continues(self, tmp_path):
        cfgs = [kl_config(tmp_path, problem="nope", label="bad"),
                kl_config(tmp_path, label="good")]
        out = run_batch(cfgs)
        assert out[0].outcome.kind == "error" and out[0].error
        assert out[1].outcome.kind == "converged"

    def test_forsaken_lattice_all_converge(self, tmp_path):
        from dsgda.recipes import TUNED
        cfg = RunConfig(problem="forsaken", algorithm="dsgda",
                        params=TUNED["forsaken"], init="grid(25)",
                        stop=StoppingRule(tol=1e-6, max_iters=10**6))
        results = run_config(cfg)
        assert len(results) == 25
        assert all(r.outcome.kind == "converged" for r in results)

    def test_batch_reruns_byte_identical(self, tmp_path):
        for sub in ("one", "two"):
            run_config(kl_config(tmp_path / sub))
        a = (tmp_path / "one" / "kl-test.csv").read_bytes()
        b = (tmp_path / "two" / "kl-test.csv").read_bytes()
        assert a == b


class TestTrajectoryExport:
    def _traj(self, iters=40):
        prob = builtin("forsaken")
        par = AlgoParams(c=0.05, alpha=0.05, beta=0.5, mu=0.5, r1=1.0, r2=1.0)
        return run(prob, par, SmoothedState.from_xy(-1.0, 1.2),
                   StoppingRule(tol=1e-12, max_iters=iters))

    def test_csv_schema(self, tmp_path):
        traj = self._traj(1)
        path = tmp_path / "t.csv"
        export_trajectory(traj, path, "csv")
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "iter,x0,y0,z0,v0,gs_x,gs_y"
        assert len(lines) == 1 + 2  # header + two recorded iterates

    def test_csv_round_trip_exact(self, tmp_path):
        traj = self._traj()
        path = tmp_path / "t.csv"
        export_trajectory(traj, path, "csv")
        back = read_trajectory_csv(path)
        assert np.array_equal(back.xs, traj.xs)
        assert np.array_equal(back.ys, traj.ys)
        assert np.array_equal(back.zs, traj.zs)
        assert np.array_equal(back.vs, traj.vs)
        assert np.array_equal(back.residuals, traj.residuals)
        assert np.array_equal(back.recorded_iters, traj.recorded_iters)

    def test_json_mirrors_csv_fields(self, tmp_path):
        traj = self._traj()
        export_trajectory(traj, tmp_path / "t.json", "json")
        payload = json.loads((tmp_path / "t.json").read_text())
        assert payload["columns"] == ["iter", "x0", "y0", "z0", "v0", "gs_x", "gs_y"]
        assert payload["iterations"] == traj.iterations
        assert payload["rows"][0][1] == traj.xs[0, 0]

    def test_unknown_format_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            export_trajectory(self._traj(1), tmp_path / "t.bin", "parquet")


class TestConfigRoundTrip:
    def test_parse_serialize_identity(self):
        cfg = RunConfig(problem="forsaken", algorithm="sgda-dual",
                        params=KL_PARAMS, init=(-1.0, 1.2),
                        stop=StoppingRule(tol=1e-7, max_iters=12345,
                                          mode="residual"),
                        every_k=5, outputs="out", seed=9, label="x")
        assert parse_config(serialize_config(cfg)) == cfg

    def test_parse_grid_init(self):
        cfg = RunConfig(problem="kl_nonconcave", init="grid(25)")
        assert parse_config(serialize_config(cfg)) == cfg

    def test_flat_point_init_accepted(self):
        cfg = parse_config('problem = "toy_bilinear"\ninit = [0.5, -0.25]\n')
        assert cfg.init == ((0.5,), (-0.25,))

    def test_unknown_top_key_rejected(self):
        with pytest.raises(ConfigError, match="unknown config keys"):
            parse_config('problem = "forsaken"\nstyle = "fast"\n')

    def test_unknown_param_key_rejected(self):
        with pytest.raises(ConfigError, match="params"):
            parse_config('problem = "forsaken"\n[params]\nc = 0.1\ngamma = 2\n')

    def test_missing_file_is_config_error(self):
        with pytest.raises(ConfigError, match="not found"):
            parse_config("does/not/exist.toml")

    def test_invalid_params_are_config_errors(self):
        with pytest.raises(ConfigError, match="params"):
            parse_config('problem = "forsaken"\n[params]\nc = -1\n')


class TestCli:
    def _cli(self, *args):
        return subprocess.run(
            [sys.executable, "-m", "dsgda.cli", *args],
            capture_output=True, text=True)

    def test_missing_config_file_exit_1(self, tmp_path):
        out = self._cli("--out", str(tmp_path), "run", str(tmp_path / "missing.toml"))
        assert out.returncode == 1
        assert "not found" in out.stderr

    def test_run_config_file(self, tmp_path):
        cfg = kl_config(tmp_path, outputs=None)
        path = tmp_path / "exp.toml"
        path.write_text(serialize_config(cfg))
        out = self._cli("--out", str(tmp_path / "res"), "run", str(path))
        assert out.returncode == 0, out.stderr
        assert "converged" in out.stdout
        assert (tmp_path / "res" / "kl-test.csv").exists()

    def test_measure_command(self, tmp_path):
        out = self._cli("measure", "kl_nonconcave", "0", "0")
        assert out.returncode == 0
        payload = json.loads(out.stdout)
        assert payload["gs_x"] == 0.0 and payload["gs_y"] == 0.0

    def test_check_regularity_command(self, tmp_path):
        out = self._cli("check-regularity", "bilinear_coupled(10)")
        assert out.returncode == 0
        payload = json.loads(out.stdout)
        assert payload["weak_mvi_violated"] is True
        assert payload["weak_mvi_threshold"] == pytest.approx(-1 / 344)

    def test_unknown_subcommand_exit_1_with_usage(self):
        out = self._cli("frobnicate")
        assert out.returncode == 1
        assert "usage" in out.stderr

    def test_unknown_problem_exit_1(self):
        out = self._cli("measure", "martian_game", "0", "0")
        assert out.returncode == 1

    def test_scan_params_writes_csv(self, tmp_path):
        out = self._cli("--out", str(tmp_path), "scan-params")
        assert out.returncode == 0
        text = (tmp_path / "feasibility.csv").read_text()
        assert text.splitlines()[0] == "t1,t2,feasible"
        assert ",1" in text  # at least one feasible cell

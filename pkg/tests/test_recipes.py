"""Built-in recipes: outcomes, artifacts, and runtime discipline."""

import time
from pathlib import Path

import numpy as np
import pytest

from dsgda import AlgoParams, StoppingRule
from dsgda.harness import RunConfig, read_trajectory_csv, run_config
from dsgda.recipes import RECIPE_NAMES, run_recipe


def _files_under(root):
    return {p.relative_to(root) for p in Path(root).rglob("*") if p.is_file()}


class TestSolverRecipes:
    def test_kl_nc_universal(self, tmp_path):
        t0 = time.perf_counter()
        summary = run_recipe("kl-nc-universal", out_dir=tmp_path)
        assert summary.ok, summary.lines
        res = summary.results[0]
        assert res.outcome.kind == "converged"
        assert np.hypot(res.final_x[0], res.final_y[0]) <= 1e-3
        assert time.perf_counter() - t0 < 300

    def test_forsaken_recipe_contrasts_gda(self, tmp_path):
        summary = run_recipe("forsaken", out_dir=tmp_path)
        assert summary.ok, summary.lines
        ds, gda = summary.results
        assert ds.outcome.kind == "converged"
        assert ds.iterations == 908  # deterministic given the frozen params
        assert abs(ds.final_x[0] - 0.078) < 5e-3
        assert abs(ds.final_y[0] - 0.412) < 5e-3
        assert gda.outcome.kind == "limit-cycle"

    def test_polar_game_recipe_starts_on_cycle(self, tmp_path):
        summary = run_recipe("polar-game", out_dir=tmp_path)
        assert summary.ok, summary.lines
        res = summary.results[0]
        x0, y0 = res.config.init
        assert np.hypot(x0[0], y0[0]) == pytest.approx(1.0)
        assert res.outcome.kind == "converged"
        assert np.hypot(res.final_x[0], res.final_y[0]) < 1e-3

    def test_bilinear_11_recipe(self, tmp_path):
        summary = run_recipe("bilinear-coupled-11", out_dir=tmp_path)
        assert summary.ok, summary.lines
        ds, sg = summary.results
        assert ds.outcome.kind == "converged"
        assert sg.outcome.kind == "limit-cycle"
        assert ds.config.init == sg.config.init

    def test_sixth_order_recipe(self, tmp_path):
        summary = run_recipe("sixth-order", out_dir=tmp_path)
        assert summary.ok, summary.lines
        res = summary.results[0]
        assert np.hypot(res.final_x[0], res.final_y[0]) < 1e-3

    def test_bilinear_10_recipe(self, tmp_path):
        summary = run_recipe("bilinear-coupled-10", out_dir=tmp_path)
        assert summary.ok, summary.lines
        assert np.hypot(summary.results[0].final_x[0],
                        summary.results[0].final_y[0]) < 0.05

    def test_wrong_smoothing_recipe(self, tmp_path):
        summary = run_recipe("wrong-smoothing", out_dir=tmp_path)
        assert summary.ok, summary.lines


class TestScanRecipes:
    def test_feasibility_scan_writes_csv(self, tmp_path):
        summary = run_recipe("feasibility-scan", out_dir=tmp_path)
        assert summary.ok
        text = (tmp_path / "feasibility.csv").read_text()
        assert text.splitlines()[0] == "t1,t2,feasible"

    def test_rho_scan_witnesses_and_files(self, tmp_path):
        summary = run_recipe("rho-scan", out_dir=tmp_path)
        assert summary.ok, summary.lines
        files = _files_under(tmp_path)
        assert len([f for f in files if f.name.startswith("rho-")]) == 3
        sample = (tmp_path / "rho-bilinear_coupled-10.csv").read_text().splitlines()
        assert sample[0] == "x,y,rho"

    def test_descent_audit_margins(self, tmp_path):
        summary = run_recipe("descent-audit", out_dir=tmp_path, max_iters=60)
        assert summary.ok, summary.lines
        rows = (tmp_path / "descent-audit-kl_nonconcave.csv").read_text().splitlines()
        assert rows[0] == "iter,lhs,rhs,margin"
        margins = [float(r.split(",")[3]) for r in rows[1:]]
        assert len(margins) == 60
        assert min(margins) >= -1e-4


class TestRecipeHygiene:
    def test_recipe_names_exposed(self):
        assert set(RECIPE_NAMES) == {
            "forsaken", "bilinear-coupled-10", "bilinear-coupled-11",
            "sixth-order", "polar-game", "kl-nc-universal", "wrong-smoothing",
            "feasibility-scan", "rho-scan", "descent-audit"}

    def test_writes_stay_inside_out_dir(self, tmp_path):
        out = tmp_path / "inner"
        sibling = tmp_path / "sibling"
        sibling.mkdir()
        run_recipe("kl-nc-universal", out_dir=out)
        assert _files_under(out)
        assert not _files_under(sibling)

    def test_cli_runs_a_recipe(self, tmp_path):
        import subprocess
        import sys
        out = subprocess.run(
            [sys.executable, "-m", "dsgda.cli", "--out", str(tmp_path),
             "recipe", "feasibility-scan"],
            capture_output=True, text=True)
        assert out.returncode == 0, out.stderr
        assert (tmp_path / "feasibility.csv").exists()

    def test_gda_on_toy_never_converges(self, tmp_path):
        cfg = RunConfig(problem="toy_bilinear", algorithm="gda",
                        params=AlgoParams(c=0.1, alpha=0.1, beta=0.5, mu=0.5,
                                          r1=1.0, r2=1.0),
                        init=(0.5, 0.5),
                        stop=StoppingRule(tol=1e-6, max_iters=50_000),
                        outputs=str(tmp_path), label="toy-gda-osc")
        res = run_config(cfg)
        assert res.outcome.kind in ("limit-cycle", "max-iters")
        assert res.termination != "converged"

    def test_exported_kl_trajectory_final_residuals(self, tmp_path):
        run_recipe("kl-nc-universal", out_dir=tmp_path)
        csv = next(Path(tmp_path).glob("kl-nc-universal-dsgda*.csv"))
        traj = read_trajectory_csv(csv)
        gs_x, gs_y = traj.residuals[-1]
        assert gs_x < 1e-4 and gs_y < 1e-4

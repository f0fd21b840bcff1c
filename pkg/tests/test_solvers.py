"""Iteration maps: hand-checked steps, reductions between methods,
feasibility, determinism, and stopping behavior."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from dsgda import (
    AlgoParams,
    BoxSet,
    MinimaxProblem,
    NumericsError,
    ParameterError,
    SmoothedState,
    StoppingRule,
    builtin,
    dsgda_step,
    eg_step,
    gda_step,
    gs_residual,
    run,
    sgda_step,
)
from dsgda.solvers import dsgda_update


@pytest.fixture
def toy_params():
    return AlgoParams(c=0.1, alpha=0.1, beta=0.5, mu=0.5, r1=1.0, r2=1.0)


class TestAlgoParams:
    def test_rejects_nonpositive_fields(self):
        with pytest.raises(ParameterError):
            AlgoParams(c=0.0, alpha=0.1, beta=0.5, mu=0.5, r1=1.0, r2=1.0)
        with pytest.raises(ParameterError):
            AlgoParams(c=0.1, alpha=0.1, beta=0.5, mu=0.5, r1=-1.0, r2=1.0)

    def test_rejects_weights_above_one(self):
        with pytest.raises(ParameterError):
            AlgoParams(c=0.1, alpha=0.1, beta=1.5, mu=0.5, r1=1.0, r2=1.0)

    def test_stopping_rule_validation(self):
        with pytest.raises(ParameterError):
            StoppingRule(tol=-1.0)
        with pytest.raises(ParameterError):
            StoppingRule(max_iters=0)
        with pytest.raises(ParameterError):
            StoppingRule(mode="banana")


class TestDsgdaStep:
    def test_hand_evaluation_on_toy(self, toy_params):
        toy = builtin("toy_bilinear")
        s = SmoothedState(1.0, 1.0, 1.0, 1.0)
        out = dsgda_step(toy, toy_params, s)
        # x+ = 1 - 0.1*1 = 0.9 ; y+ = clip(1 + 0.1*0.9) = 1 ;
        # z+ = 1 + 0.5*(0.9-1) = 0.95 ; v+ = 1
        assert_allclose(out.x, [0.9])
        assert_allclose(out.y, [1.0])
        assert_allclose(out.z, [0.95])
        assert_allclose(out.v, [1.0])

    def test_y_update_uses_new_x(self, toy_params):
        # for f = xy the y-gradient is x, so y+ reveals which x was used
        toy = builtin("toy_bilinear")
        s = SmoothedState(1.0, 0.5, 1.0, 0.5)
        out = dsgda_step(toy, toy_params, s)
        assert out.x[0] == pytest.approx(0.95)
        assert out.y[0] == pytest.approx(0.5 + 0.1 * 0.95)  # not 0.5 + 0.1*1.0

    def test_fixed_point_is_stationary(self, toy_params):
        toy = builtin("toy_bilinear")
        s = SmoothedState(0.0, 0.0, 0.0, 0.0)
        out = dsgda_step(toy, toy_params, s)
        assert out.close_to(s)
        assert gs_residual(toy, out.x, out.y) == (0.0, 0.0)

    def test_kl_origin_is_a_fixed_point(self):
        kl = builtin("kl_nonconcave")
        par = AlgoParams(c=0.04, alpha=0.04, beta=0.8, mu=0.8, r1=0.125, r2=0.125)
        s = SmoothedState(0.0, 0.0, 0.0, 0.0)
        assert dsgda_step(kl, par, s).close_to(s)

    def test_fixed_points_are_game_stationary(self, toy_params):
        # interior fixed point and a corner fixed point both have zero
        # residual and coincident anchors
        for prob, pt in ((builtin("kl_nonconcave"), 0.0),
                         (builtin("sixth_order"), -2.0)):
            s = SmoothedState(pt, pt, pt, pt)
            out = dsgda_step(prob, toy_params, s)
            if out.close_to(s):
                gx, gy = gs_residual(prob, s.x, s.y)
                assert max(gx, gy) <= 1e-12
                assert float(np.linalg.norm(s.x - s.z)) == 0.0
                assert float(np.linalg.norm(s.y - s.v)) == 0.0


class TestReductions:
    def test_primal_sgda_is_dsgda_with_r2_zero(self, toy_params):
        prob = builtin("forsaken")
        s = SmoothedState(0.5, -0.7, 0.2, -0.7)
        a = sgda_step(prob, toy_params, s, "primal")
        b = dsgda_update(prob, s, toy_params.c, toy_params.alpha,
                         toy_params.beta, toy_params.mu, toy_params.r1, 0.0)
        assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)
        assert np.array_equal(a.z, b.z)
        assert np.array_equal(a.v, a.y)  # anchor pinned to the decision var

    def test_dual_sgda_pins_z_to_x(self, toy_params):
        prob = builtin("forsaken")
        s = SmoothedState(0.5, -0.7, 0.5, 0.1)
        out = sgda_step(prob, toy_params, s, "dual")
        assert np.array_equal(out.z, out.x)

    def test_dsgda_with_zero_radii_matches_gda(self, toy_params):
        prob = builtin("sixth_order")
        s = SmoothedState(0.5, -0.7, 0.5, -0.7)
        a = dsgda_update(prob, s, 0.1, 0.1, 0.5, 0.5, 0.0, 0.0)
        b = gda_step(prob, 0.1, 0.1, s)
        assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)

    def test_sgda_side_validation(self, toy_params):
        with pytest.raises(ParameterError):
            sgda_step(builtin("toy_bilinear"), toy_params,
                      SmoothedState(0.0, 0.0, 0.0, 0.0), "sideways")


class TestBaselineSteps:
    def test_gda_oscillates_on_toy_bilinear(self):
        toy = builtin("toy_bilinear")
        s = SmoothedState.from_xy(0.5, 0.5)
        dists = []
        for _ in range(200):
            s = gda_step(toy, 0.1, 0.1, s)
            dists.append(float(np.hypot(s.x[0], s.y[0])))
        dists = np.array(dists)
        assert np.any(np.diff(dists) > 0)  # distance to origin not monotone
        assert dists[-1] > 1e-3            # and no convergence

    def test_gda_fixed_point(self):
        kl = builtin("kl_nonconcave")
        s = SmoothedState(0.0, 0.0, 0.0, 0.0)
        assert gda_step(kl, 0.1, 0.1, s).close_to(s)

    def test_eg_hand_evaluation(self):
        toy = builtin("toy_bilinear")
        s = SmoothedState(1.0, 1.0, 1.0, 1.0)
        out = eg_step(toy, 0.1, s)
        # half: xh = 1-0.1*1 = 0.9, yh = clip(1+0.1) = 1
        # full: x = 1-0.1*grad_x(0.9,1)=1-0.1*1=0.9 ; y = clip(1+0.1*0.9)=1
        assert out.x[0] == pytest.approx(0.9)
        assert out.y[0] == 1.0

    def test_eg_fixed_point_at_interior_zero(self):
        pol = builtin("polar_game")
        s = SmoothedState(0.0, 0.0, 0.0, 0.0)
        assert eg_step(pol, 0.01, s).close_to(s)


class TestRun:
    def test_zero_iterations_at_fixed_point(self, toy_params):
        toy = builtin("toy_bilinear")
        t = run(toy, toy_params, SmoothedState.from_xy(0.0, 0.0), StoppingRule())
        assert t.termination == "converged"
        assert t.iterations == 0
        assert t.n_recorded == t.iterations + 1

    def test_kl_universal_parameters_converge(self):
        kl = builtin("kl_nonconcave")
        par = AlgoParams(c=0.04, alpha=0.04, beta=0.8, mu=0.8, r1=0.125, r2=0.125)
        t = run(kl, par, SmoothedState.from_xy(0.7, -0.6),
                StoppingRule(tol=1e-6, max_iters=10**6))
        assert t.termination == "converged"
        assert np.hypot(t.xs[-1, 0], t.ys[-1, 0]) < 1e-3

    def test_states_length_matches_iterations(self, toy_params):
        prob = builtin("forsaken")
        t = run(prob, toy_params, SmoothedState.from_xy(-1.0, 1.2),
                StoppingRule(tol=1e-12, max_iters=137))
        assert t.n_recorded == t.iterations + 1
        assert np.all(t.recorded_iters == np.arange(138))

    def test_feasibility_preserved(self, toy_params):
        for алg in ("dsgda", "sgda-primal", "sgda-dual", "gda", "eg"):
            prob = builtin("forsaken")
            t = run(prob, toy_params, SmoothedState.from_xy(-1.4, 1.45),
                    StoppingRule(max_iters=300), algorithm=алg)
            assert np.all(t.xs >= prob.box_x.lower[0])
            assert np.all(t.xs <= prob.box_x.upper[0])
            assert np.all(t.ys >= prob.box_y.lower[0])
            assert np.all(t.ys <= prob.box_y.upper[0])

    def test_determinism(self, toy_params):
        prob = builtin("sixth_order")
        a = run(prob, toy_params, SmoothedState.from_xy(0.3, 0.4),
                StoppingRule(max_iters=500))
        b = run(prob, toy_params, SmoothedState.from_xy(0.3, 0.4),
                StoppingRule(max_iters=500))
        assert np.array_equal(a.xs, b.xs) and np.array_equal(a.vs, b.vs)
        assert np.array_equal(a.residuals, b.residuals)

    def test_run_matches_repeated_public_steps(self, toy_params):
        prob = builtin("kl_nonconcave")
        t = run(prob, toy_params, SmoothedState.from_xy(0.3, -0.2),
                StoppingRule(tol=1e-14, max_iters=250))
        s = SmoothedState.from_xy(0.3, -0.2)
        for _ in range(t.iterations):
            s = dsgda_step(prob, toy_params, s)
        assert s.x[0] == t.xs[-1, 0] and s.v[0] == t.vs[-1, 0]

    def test_infeasible_init_rejected(self, toy_params):
        with pytest.raises(ParameterError):
            run(builtin("toy_bilinear"), toy_params,
                SmoothedState.from_xy(2.0, 0.0), StoppingRule())

    def test_record_every_keeps_final_state(self, toy_params):
        prob = builtin("forsaken")
        t = run(prob, toy_params, SmoothedState.from_xy(-1.0, 1.2),
                StoppingRule(tol=1e-12, max_iters=101), record_every=10)
        assert t.recorded_iters[-1] == t.iterations
        assert t.recorded_iters[0] == 0

    def test_nonfinite_raises_with_iterate_index(self):
        box = BoxSet([-np.inf], [np.inf])
        bad = MinimaxProblem(
            name="explode", dim_x=1, dim_y=1, box_x=box, box_y=box,
            f=lambda x, y: x**4 - y**4, grad_x=lambda x, y: 4 * x**3 + 0 * y,
            grad_y=lambda x, y: -4 * y**3 + 0 * x, lip_x=1.0, lip_y=1.0)
        par = AlgoParams(c=10.0, alpha=10.0, beta=0.5, mu=0.5, r1=1e-6, r2=1e-6)
        with pytest.raises(NumericsError, match="iteration"):
            run(bad, par, SmoothedState.from_xy(10.0, 0.0),
                StoppingRule(max_iters=10**4))

    def test_residual_mode_stops_at_stationarity(self):
        kl = builtin("kl_nonconcave")
        par = AlgoParams(c=0.04, alpha=0.04, beta=0.8, mu=0.8, r1=0.125, r2=0.125)
        t = run(kl, par, SmoothedState.from_xy(0.4, 0.3),
                StoppingRule(tol=1e-5, max_iters=10**6, mode="residual"))
        assert t.termination == "converged"
        assert max(t.final_residuals) < 1e-5

    def test_multidimensional_path(self, toy_params):
        # 2-D-per-block saddle with weak coupling exercises the array path
        box2 = BoxSet([-1.0, -1.0], [1.0, 1.0])
        prob = MinimaxProblem(
            name="dot2", dim_x=2, dim_y=2, box_x=box2, box_y=box2,
            f=lambda x, y: 0.5 * float(x @ x) - 0.5 * float(y @ y) + 0.1 * float(x @ y),
            grad_x=lambda x, y: x + 0.1 * y, grad_y=lambda x, y: -y + 0.1 * x,
            lip_x=1.1, lip_y=1.1)
        t = run(prob, toy_params, SmoothedState.from_xy([0.5, -0.5], [0.25, 0.1]),
                StoppingRule(tol=1e-6, max_iters=20000))
        assert t.xs.shape[1] == 2
        assert t.termination == "converged"
        assert np.linalg.norm(t.xs[-1]) < 1e-4 and np.linalg.norm(t.ys[-1]) < 1e-4

"""Stationarity residuals and trajectory outcome classification.

Two residuals: the game-stationarity pair (normal-cone distance per
block) and the optimization-stationarity residual (distance to the
proximal point of the inner-max value function).  Trajectories are
classified as converged, limit-cycle, boundary-stall, or max-iters from
their recorded states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._grid import GridSpec
from .errors import ParameterError
from .oracle import prox_value_function, y_plus_point
from .problems import MinimaxProblem, SmoothedState, box_residual
from .solvers import AlgoParams, Trajectory


@dataclass(frozen=True)
class StationarityReport:
    gs_x: float
    gs_y: float
    at: tuple
    os: Optional[float] = None


@dataclass(frozen=True)
class OutcomeClass:
    kind: str  # converged | limit-cycle | boundary-stall | max-iters
    evidence: dict

    def __str__(self):
        bits = ", ".join(f"{k}={v}" for k, v in self.evidence.items())
        return f"{self.kind} ({bits})"


def gs_residual(prob: MinimaxProblem, x, y) -> tuple:
    """Game-stationarity pair: per-block Euclidean norm of the
    coordinatewise normal-cone distances (interior -> |g_i|, lower bound
    -> max(0, -g_i), upper bound -> max(0, g_i)); the y-block uses -grad_y."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if not prob.box_x.contains(x) or not prob.box_y.contains(y):
        raise ParameterError("gs_residual requires a feasible point")
    if prob.dim_x == 1 and prob.dim_y == 1:
        gx = np.atleast_1d(np.asarray(prob.grad_x(x[0], y[0]), dtype=float))
        gy = np.atleast_1d(np.asarray(prob.grad_y(x[0], y[0]), dtype=float))
    else:
        gx = np.atleast_1d(np.asarray(prob.grad_x(x, y), dtype=float))
        gy = np.atleast_1d(np.asarray(prob.grad_y(x, y), dtype=float))
    return box_residual(prob.box_x, x, gx), box_residual(prob.box_y, y, -gy)


def stationarity_report(prob, x, y, r1: float = None,
                        grid: GridSpec = None) -> StationarityReport:
    gx, gy = gs_residual(prob, x, y)
    os = None
    if r1 is not None and prob.has_value:
        os = os_residual(prob, r1, x, grid)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    return StationarityReport(gs_x=gx, gs_y=gy, at=(tuple(x), tuple(y)), os=os)


def os_residual(prob: MinimaxProblem, r1: float, x_hat,
                grid: GridSpec = None) -> float:
    """||x*(x_hat) - x_hat|| where x*(z) minimizes
    max_y f(., y) + (r1/2)||. - z||^2 over X (nested grid solve; accuracy
    follows the grid refinement tolerance)."""
    prob.require_value("os_residual")
    prob.require_scalar("os_residual")
    x_star, _ = prox_value_function(prob, r1, x_hat, grid)
    return abs(x_star - float(np.atleast_1d(np.asarray(x_hat, dtype=float))[0]))


def classify(traj: Trajectory, prob: MinimaxProblem, eps_stat: float = 1e-4,
             delta_rec: float = 1e-3, burn_in: int = None,
             min_loop: int = 10, probes: int = 16) -> OutcomeClass:
    """Outcome of a recorded trajectory.

    converged: final game residuals below eps_stat.  limit-cycle: some
    post-burn-in state returns within delta_rec of an earlier post-burn-in
    state at lag >= min_loop while staying non-stationary (checked at a
    spread of probe states from the tail).  boundary-stall: pinned on the
    box boundary with an unchanged state.  Otherwise max-iters.  Recurrence
    detection reads the recorded states, so runs meant for classification
    should record densely (every iterate).
    """
    n = traj.n_recorded
    if n == 0:
        raise ParameterError("classify needs a nonempty trajectory")
    gs_final = traj.final_residuals
    if max(gs_final) < eps_stat:
        return OutcomeClass("converged", {"final_residuals": gs_final})
    if burn_in is None:
        burn_in = n // 10

    pts = np.concatenate([traj.xs, traj.ys], axis=1)
    best_dist, best_lag = np.inf, 0
    if n - burn_in > min_loop + 1:
        probe_idx = np.unique(np.linspace(max(burn_in + min_loop, n - 1 - 3 * (n - burn_in) // 4),
                                          n - 1, num=min(probes, n), dtype=int))
        for pi in probe_idx:
            res = traj.residuals[pi]
            if max(res) < eps_stat:
                continue  # probe must itself be non-stationary
            earlier = pts[burn_in:pi - min_loop + 1]
            if len(earlier) == 0:
                continue
            dists = np.linalg.norm(earlier - pts[pi], axis=1)
            j = int(np.argmin(dists))
            if dists[j] < best_dist:
                best_dist = float(dists[j])
                best_lag = int(traj.recorded_iters[pi] - traj.recorded_iters[burn_in + j])
        if best_dist <= delta_rec:
            return OutcomeClass("limit-cycle", {
                "loop_length": best_lag, "recurrence_distance": best_dist,
                "final_residuals": gs_final})

    tail = min(n - 1, max(min_loop, 1))
    moved = float(np.max(np.abs(pts[-1] - pts[-1 - tail]))) if n > 1 else 0.0
    x_fin, y_fin = traj.xs[-1], traj.ys[-1]
    on_boundary = bool(
        np.any(x_fin <= prob.box_x.lower) or np.any(x_fin >= prob.box_x.upper)
        or np.any(y_fin <= prob.box_y.lower) or np.any(y_fin >= prob.box_y.upper))
    if on_boundary and moved < 1e-12:
        return OutcomeClass("boundary-stall", {
            "final_residuals": gs_final, "tail_movement": moved})
    return OutcomeClass("max-iters", {
        "final_residuals": gs_final, "recurrence_distance": best_dist,
        "tail_movement": moved})


def gs_bound_check(prob: MinimaxProblem, params: AlgoParams,
                   s_t: SmoothedState, s_next: SmoothedState,
                   grid: GridSpec = None) -> float:
    """Certificate ratio for the displacement-to-stationarity bound.

    eps is the max of the four stepsize-scaled displacements; the game
    residual at the new pair must stay below rho * eps with rho assembled
    from the explicit constants of the bound's proof:

      rho_x = (r1 - Lx + r1^2 - Lx^2 + (2 r1 + 1) Lx Ly)/(r1 - Lx) + r2 + Lx
      rho_y = (1 + Ly + r2) (1 + Ly (2 r1 + 1)/(r1 - Lx)) + r2

    Returns max(gs_x / (rho_x eps), gs_y / (rho_y eps)), with 0/0 read as 0.
    """
    r1, r2 = params.r1, params.r2
    Lx, Ly = prob.lip_x, prob.lip_y
    if not r1 > Lx:
        raise ParameterError("gs_bound_check needs r1 > L_x")
    y_plus = y_plus_point(prob, params, s_t, grid)
    eps = max(
        float(np.linalg.norm(s_t.x - s_next.x)) / params.c,
        abs(float(s_t.y[0]) - y_plus) / params.alpha,
        float(np.linalg.norm(s_t.z - s_next.z)) / params.beta,
        float(np.linalg.norm(s_t.v - s_next.v)) / params.mu,
    )
    gx, gy = gs_residual(prob, s_next.x, s_next.y)
    if eps == 0.0:
        return 0.0 if max(gx, gy) == 0.0 else np.inf
    rho_x = (r1 - Lx + r1**2 - Lx**2 + (2 * r1 + 1) * Lx * Ly) / (r1 - Lx) + r2 + Lx
    rho_y = (1 + Ly + r2) * (1 + Ly * (2 * r1 + 1) / (r1 - Lx)) + r2
    return max(gx / (rho_x * eps), gy / (rho_y * eps))

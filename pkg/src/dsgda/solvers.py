"""Deterministic iteration maps and the shared run loop.

The main solver is the doubly smoothed gradient descent ascent step on
the regularized objective F: a projected descent step in x, a projected
ascent step in y evaluated at the new x, and exponential averaging of
the two anchors.  Single-sided smoothing, plain projected GDA, and a
projected extragradient baseline share the same state layout so every
run produces the same kind of trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericsError, ParameterError
from .problems import MinimaxProblem, SmoothedState, box_residual

ALGORITHMS = ("dsgda", "sgda-primal", "sgda-dual", "gda", "eg")


@dataclass(frozen=True)
class AlgoParams:
    """Stepsizes (c, alpha), averaging weights (beta, mu) and smoothing
    radii (r1, r2)."""

    c: float
    alpha: float
    beta: float
    mu: float
    r1: float
    r2: float

    def __post_init__(self):
        for name in ("c", "alpha", "beta", "mu", "r1", "r2"):
            if getattr(self, name) <= 0:
                raise ParameterError(f"{name} must be strictly positive")
        if self.beta > 1 or self.mu > 1:
            raise ParameterError("beta and mu must lie in (0, 1]")


@dataclass(frozen=True)
class StoppingRule:
    """Termination test: 'proximal-gap' stops when ||x-z||_inf and
    ||y-v||_inf drop below tol; 'residual' stops when both blocks of the
    game-stationarity residual do."""

    tol: float = 1e-6
    max_iters: int = 10_000_000
    mode: str = "proximal-gap"

    def __post_init__(self):
        if self.tol <= 0:
            raise ParameterError("tol must be positive")
        if self.max_iters < 1:
            raise ParameterError("max_iters must be at least 1")
        if self.mode not in ("proximal-gap", "residual"):
            raise ParameterError("mode must be 'proximal-gap' or 'residual'")


@dataclass(eq=False)
class Trajectory:
    """Recorded run: state rows (x, y, z, v stacked per recorded iterate),
    per-recorded-iterate stationarity residual pair, and the outcome."""

    xs: np.ndarray
    ys: np.ndarray
    zs: np.ndarray
    vs: np.ndarray
    recorded_iters: np.ndarray
    residuals: np.ndarray
    termination: str
    iterations: int
    problem: str = ""
    algorithm: str = "dsgda"

    @property
    def n_recorded(self) -> int:
        return len(self.recorded_iters)

    def state(self, idx: int) -> SmoothedState:
        return SmoothedState(self.xs[idx], self.ys[idx], self.zs[idx], self.vs[idx])

    @property
    def final_state(self) -> SmoothedState:
        return self.state(-1)

    @property
    def final_residuals(self) -> tuple:
        return float(self.residuals[-1, 0]), float(self.residuals[-1, 1])


# ---------------------------------------------------------------------------
# Single steps.  The *_update functions take raw floats so the reductions
# between the methods (e.g. r2 -> 0) can be exercised directly; the public
# steps validate through AlgoParams.


def _clip(arr, box):
    return np.minimum(np.maximum(arr, box.lower), box.upper)


def dsgda_update(prob: MinimaxProblem, s: SmoothedState, c, alpha, beta, mu,
                 r1, r2) -> SmoothedState:
    gx = np.atleast_1d(np.asarray(prob.grad_x(*_args(prob, s.x, s.y)), dtype=float))
    x_new = _clip(s.x - c * (gx + r1 * (s.x - s.z)), prob.box_x)
    gy = np.atleast_1d(np.asarray(prob.grad_y(*_args(prob, x_new, s.y)), dtype=float))
    y_new = _clip(s.y + alpha * (gy - r2 * (s.y - s.v)), prob.box_y)
    z_new = s.z + beta * (x_new - s.z)
    v_new = s.v + mu * (y_new - s.v)
    return SmoothedState(x_new, y_new, z_new, v_new)


def dsgda_step(prob: MinimaxProblem, params: AlgoParams, s: SmoothedState) -> SmoothedState:
    """One doubly smoothed GDA step: descend x, ascend y at the new x,
    then average both anchors toward the new pair."""
    return dsgda_update(prob, s, params.c, params.alpha, params.beta,
                        params.mu, params.r1, params.r2)


def sgda_step(prob: MinimaxProblem, params: AlgoParams, s: SmoothedState,
              side: str) -> SmoothedState:
    """Single-sided smoothing: the omitted anchor is pinned to its decision
    variable and its quadratic term dropped."""
    if side == "primal":
        out = dsgda_update(prob, s, params.c, params.alpha, params.beta,
                           params.mu, params.r1, 0.0)
        return SmoothedState(out.x, out.y, out.z, out.y.copy())
    if side == "dual":
        out = dsgda_update(prob, s, params.c, params.alpha, params.beta,
                           params.mu, 0.0, params.r2)
        return SmoothedState(out.x, out.y, out.x.copy(), out.v)
    raise ParameterError("side must be 'primal' or 'dual'")


def gda_step(prob: MinimaxProblem, c: float, alpha: float,
             s: SmoothedState) -> SmoothedState:
    """Plain projected GDA (two timescales via distinct c, alpha); the
    anchors are carried along unchanged."""
    gx = np.atleast_1d(np.asarray(prob.grad_x(*_args(prob, s.x, s.y)), dtype=float))
    x_new = _clip(s.x - c * gx, prob.box_x)
    gy = np.atleast_1d(np.asarray(prob.grad_y(*_args(prob, x_new, s.y)), dtype=float))
    y_new = _clip(s.y + alpha * gy, prob.box_y)
    return SmoothedState(x_new, y_new, s.z.copy(), s.v.copy())


def eg_step(prob: MinimaxProblem, stepsize: float, s: SmoothedState) -> SmoothedState:
    """Projected extragradient on the field G = [grad_x f; -grad_y f]:
    a half step to a probe point, then the full step using the probe
    gradient, projected blockwise."""
    gx = np.atleast_1d(np.asarray(prob.grad_x(*_args(prob, s.x, s.y)), dtype=float))
    gy = np.atleast_1d(np.asarray(prob.grad_y(*_args(prob, s.x, s.y)), dtype=float))
    x_half = _clip(s.x - stepsize * gx, prob.box_x)
    y_half = _clip(s.y + stepsize * gy, prob.box_y)
    gx_h = np.atleast_1d(np.asarray(prob.grad_x(*_args(prob, x_half, y_half)), dtype=float))
    gy_h = np.atleast_1d(np.asarray(prob.grad_y(*_args(prob, x_half, y_half)), dtype=float))
    x_new = _clip(s.x - stepsize * gx_h, prob.box_x)
    y_new = _clip(s.y + stepsize * gy_h, prob.box_y)
    return SmoothedState(x_new, y_new, s.z.copy(), s.v.copy())


def _args(prob, x, y):
    if prob.dim_x == 1 and prob.dim_y == 1:
        return x[0], y[0]
    return x, y


def _make_step(prob, params, algorithm):
    if algorithm == "dsgda":
        return lambda s: dsgda_step(prob, params, s)
    if algorithm == "sgda-primal":
        return lambda s: sgda_step(prob, params, s, "primal")
    if algorithm == "sgda-dual":
        return lambda s: sgda_step(prob, params, s, "dual")
    if algorithm == "gda":
        return lambda s: gda_step(prob, params.c, params.alpha, s)
    if algorithm == "eg":
        return lambda s: eg_step(prob, params.c, s)
    raise ParameterError(f"unknown algorithm '{algorithm}'; one of {ALGORITHMS}")


def _gs_pair(prob, x, y):
    gx = np.atleast_1d(np.asarray(prob.grad_x(*_args(prob, x, y)), dtype=float))
    gy = np.atleast_1d(np.asarray(prob.grad_y(*_args(prob, x, y)), dtype=float))
    return (box_residual(prob.box_x, x, gx), box_residual(prob.box_y, y, -gy))


def run(prob: MinimaxProblem, params: AlgoParams, init: SmoothedState,
        stop: StoppingRule, algorithm: str = "dsgda",
        record_every: int = 1) -> Trajectory:
    """Iterate a step map until the stopping rule fires.

    The trajectory is bit-reproducible for identical inputs.  An exact
    fixed point terminates without counting the probing step, so a run
    started at a stationary state converges in 0 iterations.  Non-finite
    values raise :class:`NumericsError` naming the iterate index.
    """
    if record_every < 1:
        raise ParameterError("record_every must be >= 1")
    if not prob.box_x.contains(init.x) or not prob.box_y.contains(init.y):
        raise ParameterError("initial (x, y) must lie in the feasible boxes")
    if prob.dim_x == 1 and prob.dim_y == 1 and _returns_scalars(prob, init):
        return _run_scalar(prob, params, init, stop, algorithm, record_every)
    step = _make_step(prob, params, algorithm)

    xs, ys, zs, vs, iters, residuals = [], [], [], [], [], []

    def record(t, s):
        xs.append(s.x); ys.append(s.y); zs.append(s.z); vs.append(s.v)
        iters.append(t)
        residuals.append(_gs_pair(prob, s.x, s.y))

    s = init
    record(0, s)
    if stop.mode == "residual" and max(residuals[0]) < stop.tol:
        return _build(prob, algorithm, xs, ys, zs, vs, iters, residuals,
                      "converged", 0)

    termination = "max-iters"
    t = 0
    while t < stop.max_iters:
        s_new = step(s)
        if not (np.all(np.isfinite(s_new.x)) and np.all(np.isfinite(s_new.y))
                and np.all(np.isfinite(s_new.z)) and np.all(np.isfinite(s_new.v))):
            raise NumericsError(
                f"non-finite value at iteration {t + 1}", iteration=t + 1)
        if s_new.close_to(s):
            # exact fixed point; drop the probing step
            termination = "converged"
            break
        t += 1
        s = s_new
        last_record = t % record_every == 0
        if last_record:
            record(t, s)
        if stop.mode == "proximal-gap":
            done = (np.max(np.abs(s.x - s.z)) < stop.tol
                    and np.max(np.abs(s.y - s.v)) < stop.tol)
        else:
            pair = residuals[-1] if last_record else _gs_pair(prob, s.x, s.y)
            done = max(pair) < stop.tol
        if done:
            termination = "converged"
            break
    if iters[-1] != t:
        record(t, s)
    return _build(prob, algorithm, xs, ys, zs, vs, iters, residuals,
                  termination, t)


def _build(prob, algorithm, xs, ys, zs, vs, iters, residuals, termination, t):
    return Trajectory(
        xs=np.asarray(xs, dtype=float).reshape(len(iters), -1),
        ys=np.asarray(ys, dtype=float).reshape(len(iters), -1),
        zs=np.asarray(zs, dtype=float).reshape(len(iters), -1),
        vs=np.asarray(vs, dtype=float).reshape(len(iters), -1),
        recorded_iters=np.asarray(iters, dtype=np.int64),
        residuals=np.asarray(residuals, dtype=float),
        termination=termination, iterations=t,
        problem=prob.name, algorithm=algorithm,
    )


def _returns_scalars(prob, init):
    """The float fast path needs scalar-in scalar-out gradient callables."""
    try:
        probe = prob.grad_x(float(init.x[0]), float(init.y[0]))
    except Exception:
        return False
    return np.ndim(probe) == 0


def _run_scalar(prob, params, init, stop, algorithm, record_every):
    """Float fast path for 1-D-by-1-D problems; identical arithmetic to the
    array path, an order of magnitude less interpreter overhead."""
    gradx, grady = prob.grad_x, prob.grad_y
    xlo, xhi = float(prob.box_x.lower[0]), float(prob.box_x.upper[0])
    ylo, yhi = float(prob.box_y.lower[0]), float(prob.box_y.upper[0])
    c, alpha, beta, mu = params.c, params.alpha, params.beta, params.mu
    r1, r2 = params.r1, params.r2
    if algorithm == "sgda-primal":
        r2 = 0.0
    elif algorithm == "sgda-dual":
        r1 = 0.0
    elif algorithm not in ("dsgda", "gda", "eg"):
        raise ParameterError(f"unknown algorithm '{algorithm}'; one of {ALGORITHMS}")
    plain = algorithm in ("gda", "eg")

    def residual(xv, yv):
        try:
            gx = float(gradx(xv, yv))
            gy = -float(grady(xv, yv))
        except (OverflowError, FloatingPointError):
            return (math.inf, math.inf)
        if xv <= xlo:
            rx = max(0.0, -gx)
        elif xv >= xhi:
            rx = max(0.0, gx)
        else:
            rx = abs(gx)
        if yv <= ylo:
            ry = max(0.0, -gy)
        elif yv >= yhi:
            ry = max(0.0, gy)
        else:
            ry = abs(gy)
        return rx, ry

    x, y = float(init.x[0]), float(init.y[0])
    z, v = float(init.z[0]), float(init.v[0])
    xs, ys, zs, vs, iters, residuals = [x], [y], [z], [v], [0], [residual(x, y)]
    if stop.mode == "residual" and max(residuals[0]) < stop.tol:
        return _build(prob, algorithm, xs, ys, zs, vs, iters, residuals,
                      "converged", 0)

    termination = "max-iters"
    t = 0
    tol = stop.tol
    while t < stop.max_iters:
        try:
            if algorithm == "eg":
                g1 = float(gradx(x, y))
                g2 = float(grady(x, y))
                xh = min(max(x - c * g1, xlo), xhi)
                yh = min(max(y + c * g2, ylo), yhi)
                xn = min(max(x - c * float(gradx(xh, yh)), xlo), xhi)
                yn = min(max(y + c * float(grady(xh, yh)), ylo), yhi)
                zn, vn = z, v
            else:
                gx = float(gradx(x, y))
                if plain:
                    xn = min(max(x - c * gx, xlo), xhi)
                    yn = min(max(y + alpha * float(grady(xn, y)), ylo), yhi)
                    zn, vn = z, v
                else:
                    xn = min(max(x - c * (gx + r1 * (x - z)), xlo), xhi)
                    yn = min(max(y + alpha * (float(grady(xn, y)) - r2 * (y - v)),
                                 ylo), yhi)
                    zn = z + beta * (xn - z)
                    vn = v + mu * (yn - v)
                    if algorithm == "sgda-primal":
                        vn = yn
                    elif algorithm == "sgda-dual":
                        zn = xn
        except (OverflowError, FloatingPointError):
            raise NumericsError(f"non-finite value at iteration {t + 1}",
                                iteration=t + 1) from None
        if not (math.isfinite(xn) and math.isfinite(yn)
                and math.isfinite(zn) and math.isfinite(vn)):
            raise NumericsError(f"non-finite value at iteration {t + 1}",
                                iteration=t + 1)
        if xn == x and yn == y and zn == z and vn == v:
            termination = "converged"
            break
        t += 1
        x, y, z, v = xn, yn, zn, vn
        recorded = t % record_every == 0
        if recorded:
            pair = residual(x, y)
            xs.append(x); ys.append(y); zs.append(z); vs.append(v)
            iters.append(t); residuals.append(pair)
        if stop.mode == "proximal-gap":
            done = abs(x - z) < tol and abs(y - v) < tol
        else:
            pair = residuals[-1] if recorded else residual(x, y)
            done = max(pair) < tol
        if done:
            termination = "converged"
            break
    if iters[-1] != t:
        xs.append(x); ys.append(y); zs.append(z); vs.append(v)
        iters.append(t); residuals.append(residual(x, y))
    return _build(prob, algorithm, xs, ys, zs, vs, iters, residuals,
                  termination, t)

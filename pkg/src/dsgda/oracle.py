"""Brute-force nested-optimization oracles on dense grids.

These oracles evaluate, for 1-D-by-1-D problems, the value functions and
solution maps attached to the regularized objective F:

    d(y,z,v) = min_x F        p(z,v) = max_y d      q(z) = max_v p(z,v)
    h(x,z,v) = max_y F        g(v)   = min_z p(z,v)
    F_lower  = min_z q(z)     F_upper = max_v g(v)

together with the Lyapunov values Phi = F - 2d + 2q and Psi, the descent
certificate of the smoothed dynamics, and the proximal error bound checks.
The unbounded anchor searches (v for q, z for g) collapse onto the boxes:
the optimal v equals the inner maximizer y (which lies in Y), and the
optimal z equals the inner minimizer x, so restricting to conv(X), conv(Y)
is exact here.  Everything is a pure function of its arguments; results
use order-safe reductions with ties broken toward smaller coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._grid import DEFAULT_GRID, GridSpec, refine_minimax, refine_scalar
from .analysis import check_descent_params, check_descent_params_dual
from .errors import ParameterError, UnsupportedProblemError
from .problems import MinimaxProblem, SmoothedState, eval_F
from .solvers import AlgoParams, dsgda_step

__all__ = [
    "GridSpec", "LyapunovBreakdown", "AuxPoints", "DescentCertificate",
    "argmin_x", "argmax_y", "saddle", "saddle_y", "d_value", "h_value",
    "q_and_v", "p_value", "g_and_z", "f_lower", "f_upper", "value_functions",
    "ValueFunctions", "lyapunov_phi", "aux_points", "descent_certificate",
    "dual_descent_certificate", "audit_descent", "proximal_error_bound_check",
    "prox_value_function",
]


def _oracle_ready(prob: MinimaxProblem, op: str, r1=None, r2=None):
    prob.require_scalar(op)
    prob.require_value(op)
    if r1 is not None and not r1 > prob.lip_x:
        raise ParameterError(f"{op}: need r1 > L_x = {prob.lip_x:g} (got {r1:g})")
    if r2 is not None and not r2 > prob.lip_y:
        raise ParameterError(f"{op}: need r2 > L_y = {prob.lip_y:g} (got {r2:g})")


def _boxes(prob):
    bx, by = prob.box_x, prob.box_y
    return (float(bx.lower[0]), float(bx.upper[0])), (float(by.lower[0]), float(by.upper[0]))


def _scalar(value) -> float:
    return float(np.atleast_1d(np.asarray(value, dtype=float))[0])


def _F2(prob, r1, r2, z, v):
    zf, vf = _scalar(z), _scalar(v)

    def fun2(X, Y):
        return prob.f(X, Y) + 0.5 * r1 * (X - zf) ** 2 - 0.5 * r2 * (Y - vf) ** 2

    return fun2


def _sigma1(prob, r1):
    return (prob.lip_y + r1 - prob.lip_x) / (r1 - prob.lip_x)


def _sigma4(prob, r2):
    return (prob.lip_x + r2 - prob.lip_y) / (r2 - prob.lip_y)


# ---------------------------------------------------------------------------
# Solution maps


def argmin_x(prob, r1, r2, y, z, v, grid: GridSpec = None) -> float:
    """x(y,z,v): minimizer of F(., y, z, v) over X (unique for r1 > L_x)."""
    _oracle_ready(prob, "argmin_x", r1=r1)
    grid = grid or DEFAULT_GRID
    yf = _scalar(y)
    F2 = _F2(prob, r1, r2, z, v)
    (xlo, xhi), _ = _boxes(prob)
    x_star, _ = refine_scalar(lambda xs: F2(xs, yf), xlo, xhi, grid)
    return x_star


def argmax_y(prob, r1, r2, x, z, v, grid: GridSpec = None) -> float:
    """y(x,z,v): maximizer of F(x, ., z, v) over Y (unique for r2 > L_y)."""
    _oracle_ready(prob, "argmax_y", r2=r2)
    grid = grid or DEFAULT_GRID
    xf = _scalar(x)
    F2 = _F2(prob, r1, r2, z, v)
    _, (ylo, yhi) = _boxes(prob)
    y_star, _ = refine_scalar(lambda ys: F2(xf, ys), ylo, yhi, grid, maximize=True)
    return y_star


def d_value(prob, r1, r2, y, z, v, grid: GridSpec = None) -> float:
    _oracle_ready(prob, "d_value", r1=r1)
    grid = grid or DEFAULT_GRID
    yf = _scalar(y)
    F2 = _F2(prob, r1, r2, z, v)
    (xlo, xhi), _ = _boxes(prob)
    _, val = refine_scalar(lambda xs: F2(xs, yf), xlo, xhi, grid)
    return val


def h_value(prob, r1, r2, x, z, v, grid: GridSpec = None) -> float:
    _oracle_ready(prob, "h_value", r2=r2)
    grid = grid or DEFAULT_GRID
    xf = _scalar(x)
    F2 = _F2(prob, r1, r2, z, v)
    _, (ylo, yhi) = _boxes(prob)
    _, val = refine_scalar(lambda ys: F2(xf, ys), ylo, yhi, grid, maximize=True)
    return val


def saddle(prob, r1, r2, z, v, grid: GridSpec = None):
    """(x(z,v), y(z,v)): exhaustive outer grid over x of the inner grid-max
    over y, refined; unique by strong convex-concavity of F."""
    _oracle_ready(prob, "saddle", r1=r1, r2=r2)
    grid = grid or DEFAULT_GRID
    F2 = _F2(prob, r1, r2, z, v)
    box_x, box_y = _boxes(prob)
    x_star, y_star, _ = refine_minimax(
        F2, box_x, box_y, grid, inner_lip=_sigma4(prob, r2), outer_min=True)
    return x_star, y_star


def saddle_y(prob, r1, r2, z, v, grid: GridSpec = None):
    """(y(z,v), x at it) computed from the dual route max_y min_x F."""
    _oracle_ready(prob, "saddle_y", r1=r1, r2=r2)
    grid = grid or DEFAULT_GRID
    F2 = _F2(prob, r1, r2, z, v)
    box_x, box_y = _boxes(prob)
    y_star, x_star, _ = refine_minimax(
        lambda Y, X: F2(X, Y), box_y, box_x, grid,
        inner_lip=_sigma1(prob, r1), outer_min=False)
    return y_star, x_star


def p_value(prob, r1, r2, z, v, grid: GridSpec = None) -> float:
    """p(z,v) = min_x max_y F(x,y,z,v)."""
    _oracle_ready(prob, "p_value", r1=r1, r2=r2)
    grid = grid or DEFAULT_GRID
    F2 = _F2(prob, r1, r2, z, v)
    box_x, box_y = _boxes(prob)
    _, _, val = refine_minimax(
        F2, box_x, box_y, grid, inner_lip=_sigma4(prob, r2), outer_min=True)
    return val


def q_and_v(prob, r1, r2, z, grid: GridSpec = None):
    """(q(z), v(z)).

    q(z) = max_v p(z,v) collapses to max_y min_x [f + (r1/2)(x-z)^2]
    because the anchor maximization is attained at v = y, which lies in Y;
    the arg of that collapsed problem is v(z).
    """
    _oracle_ready(prob, "q_and_v", r1=r1)
    grid = grid or DEFAULT_GRID
    zf = _scalar(z)

    def E(X, Y):
        return prob.f(X, Y) + 0.5 * r1 * (X - zf) ** 2

    box_x, box_y = _boxes(prob)
    v_z, _, q = refine_minimax(
        lambda Y, X: E(X, Y), box_y, box_x, grid,
        inner_lip=_sigma1(prob, r1), outer_min=False)
    return q, v_z


def g_and_z(prob, r1, r2, v, grid: GridSpec = None):
    """(g(v), z(v)): the anchor minimization over z is attained at z = x."""
    _oracle_ready(prob, "g_and_z", r2=r2)
    grid = grid or DEFAULT_GRID
    vf = _scalar(v)

    def H(X, Y):
        return prob.f(X, Y) - 0.5 * r2 * (Y - vf) ** 2

    box_x, box_y = _boxes(prob)
    z_v, _, g = refine_minimax(
        H, box_x, box_y, grid, inner_lip=_sigma4(prob, r2), outer_min=True)
    return g, z_v


_ENVELOPE_CACHE: dict = {}


def _envelope_scan(prob, r1, r2, grid, upper: bool):
    """min_z q(z) (upper=False) or max_v g(v) (upper=True): coarse triple
    scan over the anchor followed by window refinement with accurate inner
    solves.  Cached per (problem, radii, grid)."""
    key = (prob.name, float(r1), float(r2), grid.resolution, grid.refinements, upper)
    if key in _ENVELOPE_CACHE:
        return _ENVELOPE_CACHE[key]
    box_x, box_y = _boxes(prob)
    n0 = min(grid.resolution, 301)
    xs = np.linspace(box_x[0], box_x[1], n0)
    ys = np.linspace(box_y[0], box_y[1], n0)
    fmat = prob.f(xs[:, None], ys[None, :]) + 0.0 * xs[:, None] * ys[None, :]

    inner_grid = GridSpec(min(grid.resolution, 501), max(1, grid.refinements))
    if upper:
        anchors = ys
        def coarse(a):
            return float((fmat - 0.5 * r2 * (ys[None, :] - a) ** 2).max(axis=1).min())
        def accurate(a):
            return g_and_z(prob, r1, r2, a, inner_grid)[0]
        lo, hi = box_y
        sign = -1.0
    else:
        anchors = xs
        def coarse(a):
            return float((fmat + 0.5 * r1 * (xs[:, None] - a) ** 2).min(axis=0).max())
        def accurate(a):
            return q_and_v(prob, r1, r2, a, inner_grid)[0]
        lo, hi = box_x
        sign = 1.0

    vals = np.array([sign * coarse(a) for a in anchors])
    a0 = float(anchors[int(np.argmin(vals))])
    h = (hi - lo) / (n0 - 1)
    best_a, best_v = a0, math.inf
    for _ in range(grid.refinements + 1):
        window = np.linspace(max(lo, best_a - 10 * h), min(hi, best_a + 10 * h), 41)
        wvals = [sign * accurate(a) for a in window]
        i = int(np.argmin(wvals))
        best_a, best_v = float(window[i]), float(wvals[i])
        h = (window[-1] - window[0]) / 40
    result = (sign * best_v, best_a)
    _ENVELOPE_CACHE[key] = result
    return result


def f_lower(prob, r1, r2, grid: GridSpec = None) -> float:
    """min over z in conv(X) of q(z)."""
    _oracle_ready(prob, "f_lower", r1=r1)
    return _envelope_scan(prob, r1, r2, grid or DEFAULT_GRID, upper=False)[0]


def f_upper(prob, r1, r2, grid: GridSpec = None) -> float:
    """max over v in conv(Y) of g(v)."""
    _oracle_ready(prob, "f_upper", r2=r2)
    return _envelope_scan(prob, r1, r2, grid or DEFAULT_GRID, upper=True)[0]


# ---------------------------------------------------------------------------
# Value-function bundles and Lyapunov breakdowns


@dataclass(frozen=True)
class ValueFunctions:
    d: float
    p: float
    q: float
    f_lower: float
    h: Optional[float] = None
    g: Optional[float] = None
    f_upper: Optional[float] = None


def value_functions(prob, r1, r2, z, v, grid: GridSpec = None, y=None, x=None,
                    dual: bool = False) -> ValueFunctions:
    """Consistent chain of value functions at anchors (z, v); ``d`` needs a
    dual point ``y`` and (for the dual side) ``h`` needs a primal ``x``."""
    grid = grid or DEFAULT_GRID
    if y is None:
        raise ParameterError("value_functions needs the y at which to evaluate d")
    d = d_value(prob, r1, r2, y, z, v, grid)
    p = p_value(prob, r1, r2, z, v, grid)
    q, _ = q_and_v(prob, r1, r2, z, grid)
    flo = f_lower(prob, r1, r2, grid)
    h = g = fup = None
    if dual:
        if x is None:
            raise ParameterError("dual side needs the x at which to evaluate h")
        h = h_value(prob, r1, r2, x, z, v, grid)
        g, _ = g_and_z(prob, r1, r2, v, grid)
        fup = f_upper(prob, r1, r2, grid)
    return ValueFunctions(d=d, p=p, q=q, f_lower=flo, h=h, g=g, f_upper=fup)


@dataclass(frozen=True)
class LyapunovBreakdown:
    F: float
    d: float
    p: float
    q: float
    f_lower: float
    phi: float
    h: Optional[float] = None
    g: Optional[float] = None
    f_upper: Optional[float] = None
    psi: Optional[float] = None


def lyapunov_phi(prob, params: AlgoParams, s: SmoothedState,
                 grid: GridSpec = None, dual: bool = False) -> LyapunovBreakdown:
    """Assemble Phi = F - 2d + 2q (and Psi = 2h - F - 2g + F_upper when
    requested) at a state, from the same oracle values that make up the
    four-gap telescoping decomposition."""
    grid = grid or DEFAULT_GRID
    r1, r2 = params.r1, params.r2
    vals = value_functions(prob, r1, r2, s.z, s.v, grid, y=s.y,
                           x=s.x if dual else None, dual=dual)
    F = eval_F(prob, r1, r2, s)
    phi = F - 2 * vals.d + 2 * vals.q
    psi = None
    if dual:
        psi = 2 * vals.h - F - 2 * vals.g + vals.f_upper
    return LyapunovBreakdown(F=F, d=vals.d, p=vals.p, q=vals.q,
                             f_lower=vals.f_lower, phi=phi,
                             h=vals.h, g=vals.g, f_upper=vals.f_upper, psi=psi)


def _phi_fast(prob, params, s, grid, q=None):
    """Phi without the p / f_lower extras; q(z) may be supplied from cache."""
    if q is None:
        q, _ = q_and_v(prob, params.r1, params.r2, s.z, grid)
    d = d_value(prob, params.r1, params.r2, s.y, s.z, s.v, grid)
    return eval_F(prob, params.r1, params.r2, s) - 2 * d + 2 * q


@dataclass(frozen=True)
class AuxPoints:
    y_plus: float
    v_plus: float
    x_saddle: float
    v_best: float


def y_plus_point(prob, params, s, grid: GridSpec = None) -> float:
    """y_+(z,v) = proj_Y(y + alpha * grad_y F(x(y,z,v), y, z, v))."""
    grid = grid or DEFAULT_GRID
    x_best = argmin_x(prob, params.r1, params.r2, s.y, s.z, s.v, grid)
    gy = _scalar(prob.grad_y(x_best, _scalar(s.y)))
    raw = _scalar(s.y) + params.alpha * (gy - params.r2 * (_scalar(s.y) - _scalar(s.v)))
    _, (ylo, yhi) = _boxes(prob)
    return min(max(raw, ylo), yhi)


def aux_points(prob, params: AlgoParams, s: SmoothedState,
               grid: GridSpec = None) -> AuxPoints:
    """The auxiliary quantities of the descent estimate at the state's own
    anchors: y_+(z,v), v_+(z) = v + mu (y(z,v) - v), x(z,v), and v(z)."""
    grid = grid or DEFAULT_GRID
    r1, r2 = params.r1, params.r2
    y_plus = y_plus_point(prob, params, s, grid)
    x_zv, y_zv = saddle(prob, r1, r2, s.z, s.v, grid)
    v_plus = _scalar(s.v) + params.mu * (y_zv - _scalar(s.v))
    _, v_best = q_and_v(prob, r1, r2, s.z, grid)
    return AuxPoints(y_plus=y_plus, v_plus=v_plus, x_saddle=x_zv, v_best=v_best)


# ---------------------------------------------------------------------------
# Descent certificates


@dataclass(frozen=True)
class DescentCertificate:
    lhs: float
    rhs: float
    margin: float
    phi_t: float
    phi_next: float
    terms: dict


def _require_descent_params(prob, params, dual=False):
    checker = check_descent_params_dual if dual else check_descent_params
    report = checker(prob.lip_x, prob.lam, params)
    if not report.passed:
        failing = ", ".join(b.name for b in report.failing())
        raise ParameterError(f"parameters violate the descent estimate: {failing}")


def descent_certificate(prob, params: AlgoParams, s_t: SmoothedState,
                        s_next: SmoothedState, grid: GridSpec = None,
                        phi_t: float = None, q_next: float = None,
                        v_next: float = None) -> DescentCertificate:
    """Oracle evaluation of the per-step descent inequality.

    lhs is the Lyapunov drop Phi(s_t) - Phi(s_next); rhs is the four
    positive displacement terms minus the anchor-coupling error term
    4 r1 beta ||x(z', v(z')) - x(z', v_+(z'))||^2 at z' = the new anchor.
    The certificate holds when margin = lhs - rhs clears the grid
    tolerance.  Callers may pass cached phi_t / q(z') / v(z') values.
    """
    _oracle_ready(prob, "descent_certificate", r1=params.r1, r2=params.r2)
    _require_descent_params(prob, params)
    grid = grid or DEFAULT_GRID
    r1, r2 = params.r1, params.r2

    if q_next is None or v_next is None:
        q_next, v_next = q_and_v(prob, r1, r2, s_next.z, grid)
    if phi_t is None:
        phi_t = _phi_fast(prob, params, s_t, grid)
    phi_next = _phi_fast(prob, params, s_next, grid, q=q_next)

    y_plus = y_plus_point(prob, params, s_t, grid)
    # v_+ at the new anchor z' uses the saddle dual point y(z', v_t)
    _, y_zv = saddle(prob, r1, r2, s_next.z, s_t.v, grid)
    v_plus = _scalar(s_t.v) + params.mu * (y_zv - _scalar(s_t.v))

    x_at_vbest, _ = saddle(prob, r1, r2, s_next.z, np.array([v_next]), grid)
    x_at_vplus, _ = saddle(prob, r1, r2, s_next.z, np.array([v_plus]), grid)

    dx2 = float(np.sum((s_next.x - s_t.x) ** 2))
    dy2 = (float(s_t.y[0]) - y_plus) ** 2
    dz2 = float(np.sum((s_next.z - s_t.z) ** 2))
    dv2 = (v_plus - float(s_t.v[0])) ** 2
    err2 = (x_at_vbest - x_at_vplus) ** 2

    rhs = (r1 / 32 * dx2 + r2 / 15 * dy2 + r1 / (5 * params.beta) * dz2
           + r2 / (4 * params.mu) * dv2 - 4 * r1 * params.beta * err2)
    lhs = phi_t - phi_next
    terms = {"dx2": dx2, "dy_plus2": dy2, "dz2": dz2, "dv_plus2": dv2,
             "coupling_err2": err2, "q_next": q_next, "v_next": v_next}
    return DescentCertificate(lhs=lhs, rhs=rhs, margin=lhs - rhs,
                              phi_t=phi_t, phi_next=phi_next, terms=terms)


def audit_descent(prob, params: AlgoParams, init: SmoothedState, steps: int,
                  grid: GridSpec = None) -> list:
    """Run the smoothed dynamics for ``steps`` iterations, certifying the
    descent inequality at every step; q and Phi values are carried across
    steps so each step costs a constant number of oracle solves."""
    grid = grid or DEFAULT_GRID
    rows = []
    s = init
    phi_t = None
    for _ in range(steps):
        s_next = dsgda_step(prob, params, s)
        cert = descent_certificate(prob, params, s, s_next, grid, phi_t=phi_t)
        rows.append(cert)
        phi_t = cert.phi_next
        s = s_next
    return rows


def dual_descent_certificate(prob, params: AlgoParams, s_t: SmoothedState,
                             s_next: SmoothedState, grid: GridSpec = None,
                             psi_t: float = None) -> DescentCertificate:
    """Mirror-image certificate for the dual-side Lyapunov function Psi,
    obtained by swapping the roles (x,z,r1,c,beta) <-> (y,v,r2,alpha,mu)."""
    _oracle_ready(prob, "dual_descent_certificate", r1=params.r1, r2=params.r2)
    _require_descent_params(prob, params, dual=True)
    grid = grid or DEFAULT_GRID
    r1, r2 = params.r1, params.r2

    def psi(s):
        h = h_value(prob, r1, r2, s.x, s.z, s.v, grid)
        g, _ = g_and_z(prob, r1, r2, s.v, grid)
        return 2 * h - eval_F(prob, r1, r2, s) - 2 * g + f_upper(prob, r1, r2, grid)

    if psi_t is None:
        psi_t = psi(s_t)
    psi_next = psi(s_next)

    # x_+(z,v) = proj_X(x - c grad_x F(x, y(x,z,v), z, v))
    y_best = argmax_y(prob, r1, r2, s_t.x, s_t.z, s_t.v, grid)
    gx = _scalar(prob.grad_x(_scalar(s_t.x), y_best))
    raw = _scalar(s_t.x) - params.c * (gx + r1 * (_scalar(s_t.x) - _scalar(s_t.z)))
    (xlo, xhi), _ = _boxes(prob)
    x_plus = min(max(raw, xlo), xhi)

    # z_+ at the new dual anchor v' uses the saddle primal point x(z_t, v')
    x_zv, _ = saddle(prob, r1, r2, s_t.z, s_next.v, grid)
    z_plus = _scalar(s_t.z) + params.beta * (x_zv - _scalar(s_t.z))

    _, z_best = g_and_z(prob, r1, r2, s_next.v, grid)
    _, y_at_zbest = saddle(prob, r1, r2, np.array([z_best]), s_next.v, grid)
    _, y_at_zplus = saddle(prob, r1, r2, np.array([z_plus]), s_next.v, grid)

    dy2 = float(np.sum((s_next.y - s_t.y) ** 2))
    dx2 = (float(s_t.x[0]) - x_plus) ** 2
    dv2 = float(np.sum((s_next.v - s_t.v) ** 2))
    dz2 = (z_plus - float(s_t.z[0])) ** 2
    err2 = (y_at_zbest - y_at_zplus) ** 2

    rhs = (r2 / 32 * dy2 + r1 / 15 * dx2 + r2 / (5 * params.mu) * dv2
           + r1 / (4 * params.beta) * dz2 - 4 * r2 * params.mu * err2)
    lhs = psi_t - psi_next
    terms = {"dy2": dy2, "dx_plus2": dx2, "dv2": dv2, "dz_plus2": dz2,
             "coupling_err2": err2}
    return DescentCertificate(lhs=lhs, rhs=rhs, margin=lhs - rhs,
                              phi_t=psi_t, phi_next=psi_next, terms=terms)


# ---------------------------------------------------------------------------
# Proximal error bound (anchor-coupling error vs anchor displacement)


def proximal_error_bound_check(prob, params: AlgoParams, state: SmoothedState,
                               theta: float = None, tau: float = None,
                               grid: GridSpec = None):
    """Check ||x(z', v_+(z')) - x(z', v(z'))||^2 <= omega * displacement.

    Case (i) uses the dual-side KL data (theta, tau) and the exponent
    1/theta on ||v_+(z') - v||; case (ii) (concave dual) is linear in the
    displacement.  The regularity data defaults to the problem's tags and
    must exist somewhere.  Returns (lhs, rhs).
    """
    _oracle_ready(prob, "proximal_error_bound_check", r1=params.r1, r2=params.r2)
    grid = grid or DEFAULT_GRID
    r1, r2 = params.r1, params.r2
    mu = params.mu
    L = prob.lip_x

    concave = prob.dual_concave
    if theta is None and tau is None and prob.dual_kl is not None \
            and prob.dual_kl.side == "dual":
        theta, tau = prob.dual_kl.theta, prob.dual_kl.tau
    if (theta is None or tau is None) and not concave:
        raise UnsupportedProblemError(
            f"problem '{prob.name}' carries no dual-side regularity tag "
            "(KL data or concavity) and none was supplied")

    s_next = dsgda_step(prob, params, state)
    _, y_zv = saddle(prob, r1, r2, s_next.z, state.v, grid)
    v_plus = _scalar(state.v) + mu * (y_zv - _scalar(state.v))
    _, v_best = q_and_v(prob, r1, r2, s_next.z, grid)
    x_at_vplus, _ = saddle(prob, r1, r2, s_next.z, np.array([v_plus]), grid)
    x_at_vbest, _ = saddle(prob, r1, r2, s_next.z, np.array([v_best]), grid)

    lhs = (x_at_vplus - x_at_vbest) ** 2
    disp = abs(v_plus - _scalar(state.v))
    if theta is not None and tau is not None:
        omega0 = (2.0 / ((r1 - L) * tau)) * (
            r2 * (1 - mu) / mu + r2**2 / (r2 - prob.lip_y)) ** (1.0 / theta)
        rhs = omega0 * disp ** (1.0 / theta)
    else:
        diam_y = prob.box_y.diameter
        omega1 = (4 * r2 * diam_y / (r1 - L)) * ((1 - mu) / mu + r2 / (r2 - prob.lip_y))
        rhs = omega1 * disp
    return float(lhs), float(rhs)


# ---------------------------------------------------------------------------
# Value function of the inner maximization (for the OS residual)


def prox_value_function(prob, r1, x_hat, grid: GridSpec = None):
    """argmin over X of [max_y f(x, y) + (r1/2)(x - x_hat)^2].

    The inner maximization carries no smoothing, so no Lipschitz bound on
    its argmax is available; the inner solve is therefore run globally
    (full Y, refined) for every outer candidate.  Returns (x_star, value).
    """
    prob.require_scalar("prox_value_function")
    prob.require_value("prox_value_function")
    grid = grid or DEFAULT_GRID
    xh = _scalar(x_hat)
    box_x, box_y = _boxes(prob)
    inner = GridSpec(min(grid.resolution, 801), max(grid.refinements, 1))

    def m_of_x(xs):
        out = np.empty_like(xs)
        for i, xv in enumerate(xs):
            _, phi = refine_scalar(lambda ys: prob.f(xv, ys) + 0.0 * ys,
                                   box_y[0], box_y[1], inner, maximize=True)
            out[i] = phi + 0.5 * r1 * (xv - xh) ** 2
        return out

    outer = GridSpec(min(grid.resolution, 801), grid.refinements)
    return refine_scalar(m_of_x, box_x[0], box_x[1], outer)

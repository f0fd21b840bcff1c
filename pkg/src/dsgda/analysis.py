"""Closed-form constants and parameter logic for the smoothed dynamics.

Everything here is formula evaluation and dense scanning: the Lipschitz
error-bound constants sigma1..sigma8 and the derived moduli L_d, L_h;
admissibility checks for the descent estimate; the symmetric "universal"
parameter rule; the (t1, t2) feasibility scan; and the regularity probes
(weak MVI rho, interaction dominance, KL ratio certification).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._grid import GridSpec, refine_2d_min
from .errors import ParameterError, UnsupportedProblemError
from .problems import KLSpec, MinimaxProblem, box_residual_grid
from .solvers import AlgoParams

__all__ = [
    "ConstantSet", "KLSpec", "BoundCheck", "DescentCheck", "constants",
    "check_descent_params", "check_descent_params_dual", "descent_step_params",
    "universal_c", "universal_beta", "universal_params", "feasible_point",
    "feasibility_scan", "FeasibilityScan", "weak_mvi_rho", "rho_value",
    "RhoScan", "interaction_dominance", "kl_ratio_scan",
]


@dataclass(frozen=True)
class ConstantSet:
    """Error-bound constants for given (L_x, L_y, r1, r2, c, alpha).

    sigma1..sigma5 are the solution-map Lipschitz constants, sigma6..sigma8
    the iterate error-bound constants, L_d / L_h the smoothness moduli of
    the inner value functions.  The omega constants need extra data
    (averaging weights, KL data, box diameters) and stay None until it is
    supplied.  omega2/omega3 follow the mirrored (primal-side) proximal
    error bound; omega2_os/omega3_os are the dual error-bound constants
    used by the OS-vs-GS comparison.
    """

    sigma1: float
    sigma2: float
    sigma3: float
    sigma4: float
    sigma5: float
    sigma6: float
    sigma7: float
    sigma8: float
    L_d: float
    sigma_prime: float
    L_h: float
    omega0: Optional[float] = None
    omega1: Optional[float] = None
    omega2: Optional[float] = None
    omega3: Optional[float] = None
    omega2_os: Optional[float] = None
    omega3_os: Optional[float] = None


def constants(L_x: float, L_y: float, r1: float, r2: float, c: float,
              alpha: float, mu: float = None, beta: float = None,
              theta: float = None, tau: float = None,
              theta1: float = None, tau1: float = None,
              diam_x: float = None, diam_y: float = None) -> ConstantSet:
    """Evaluate the error-bound constants exactly as printed.

    Requires r1 > L_x and r2 > (L_y/(r1-L_x) + 2) L_y so that every
    constant is finite and positive; violations raise naming the failing
    inequality.
    """
    if not r1 > L_x:
        raise ParameterError(f"need r1 > L_x ({r1:g} <= {L_x:g})")
    r2_floor = (L_y / (r1 - L_x) + 2.0) * L_y
    if not r2 > r2_floor:
        raise ParameterError(
            f"need r2 > (L_y/(r1-L_x)+2)L_y = {r2_floor:g} (got {r2:g})")
    if c <= 0 or alpha <= 0:
        raise ParameterError("need c > 0 and alpha > 0")

    sigma1 = (L_y + r1 - L_x) / (r1 - L_x)
    sigma2 = r1 / (r1 - L_x)
    sigma3 = r1 * sigma1 / (r2 - L_y) + sigma2 / sigma1
    sigma4 = (L_x + r2 - L_y) / (r2 - L_y)
    sigma5 = r2 / (r2 - L_y)
    L_d = L_y * sigma1 + L_y + r2
    sigma6 = (2 * c * r1 + 1) / (c * r1 - c * L_x)
    sigma7 = (2 * alpha * r2 + 1) / (alpha * r2 - alpha * L_y)
    sigma8 = (1 + alpha * L_d) / (alpha * (r2 - L_y))
    L_h = (L_x / (r2 - L_y) + 2.0) * L_x + r1

    omega0 = omega1 = omega2 = omega3 = omega2_os = omega3_os = None
    if mu is not None:
        if theta is not None and tau is not None:
            omega0 = (2.0 / ((r1 - L_x) * tau)) * (
                r2 * (1 - mu) / mu + r2**2 / (r2 - L_y)) ** (1.0 / theta)
        if diam_y is not None:
            omega1 = (4 * r2 * diam_y / (r1 - L_x)) * (
                (1 - mu) / mu + r2 / (r2 - L_y))
    if beta is not None:
        if theta1 is not None and tau1 is not None:
            omega2 = (2.0 / ((r2 - L_y) * tau1)) * (
                r1 * (1 - beta) / beta + r1**2 / (r1 - L_x)) ** (1.0 / theta1)
        if diam_x is not None:
            omega3 = (4 * r1 * diam_x / (r2 - L_y)) * (
                (1 - beta) / beta + sigma2)
    if theta is not None and tau is not None:
        omega2_os = 2 * r2 ** (1.0 / theta) / (tau * (r1 - L_x))
    if diam_y is not None:
        omega3_os = 4 * r1 * diam_y / (r1 - L_x)

    return ConstantSet(
        sigma1=sigma1, sigma2=sigma2, sigma3=sigma3, sigma4=sigma4,
        sigma5=sigma5, sigma6=sigma6, sigma7=sigma7, sigma8=sigma8,
        L_d=L_d, sigma_prime=sigma7, L_h=L_h,
        omega0=omega0, omega1=omega1, omega2=omega2, omega3=omega3,
        omega2_os=omega2_os, omega3_os=omega3_os,
    )


# ---------------------------------------------------------------------------
# Descent-estimate admissibility


@dataclass(frozen=True)
class BoundCheck:
    name: str
    value: float
    limit: float
    ok: bool


@dataclass(frozen=True)
class DescentCheck:
    passed: bool
    bounds: tuple

    def failing(self) -> list:
        return [b for b in self.bounds if not b.ok]

    def __str__(self):
        lines = [f"{'PASS' if self.passed else 'FAIL'} descent-parameter check"]
        for b in self.bounds:
            mark = "ok " if b.ok else "BAD"
            lines.append(f"  [{mark}] {b.name}: value {b.value:.6g} vs limit {b.limit:.6g}")
        return "\n".join(lines)


def _upper(name, value, limit):
    ok = bool(np.isfinite(limit)) and value <= limit
    return BoundCheck(name, float(value), float(limit), ok)


def _lower(name, value, limit):
    ok = bool(np.isfinite(limit)) and value >= limit
    return BoundCheck(name, float(value), float(limit), ok)


def _sigma_of_c(c, r1, L):
    if c <= 0 or r1 <= L:
        return math.inf
    return (2 * c * r1 + 1) / (c * (r1 - L))


def check_descent_params(L: float, lam: float, params: AlgoParams) -> DescentCheck:
    """Evaluate every hypothesis of the basic descent estimate.

    sigma in the alpha-bound is evaluated with the candidate c (the proof
    uses sigma6 with the chosen stepsize).  The report never raises; it
    carries the failures.
    """
    if L <= 0 or lam <= 0:
        raise ParameterError("need L > 0 and lam > 0")
    c, alpha, beta, mu = params.c, params.alpha, params.beta, params.mu
    r1, r2 = params.r1, params.r2
    Ly = lam * L

    checks = [
        _lower("r1 >= 2L", r1, 2 * L),
        _lower("r2 >= 2*lam*L", r2, 2 * Ly),
        _upper("c <= 4/(3(L+r1))", c, 4.0 / (3 * (L + r1))),
        _upper("c <= 1/(6*lam*L)", c, 1.0 / (6 * Ly)),
    ]
    sigma = _sigma_of_c(c, r1, L)
    L_d = (Ly / (r1 - L) + 2.0) * Ly + r2 if r1 > L else math.inf
    checks += [
        _upper("alpha <= 2/(3*lam*L*sigma^2)", alpha,
               2.0 / (3 * Ly * sigma**2) if np.isfinite(sigma) else -math.inf),
        _upper("alpha <= 1/(6*L_d)", alpha,
               1.0 / (6 * L_d) if np.isfinite(L_d) else -math.inf),
        _upper("alpha <= 1/(5*lam*sqrt(lam+5)*L)", alpha,
               1.0 / (5 * lam * math.sqrt(lam + 5) * L)),
        _upper("beta <= 24r1/(360r1+5r1^2*lam+(2*lam*L+5r1)^2)", beta,
               24 * r1 / (360 * r1 + 5 * r1**2 * lam + (2 * Ly + 5 * r1) ** 2)),
        _upper("beta <= alpha*lam^2*L^2/(384r1(lam+5)(lam+1)^2)", beta,
               alpha * Ly**2 / (384 * r1 * (lam + 5) * (lam + 1) ** 2)),
        _upper("mu <= 2(lam+5)/(2(lam+5)+lam^2*L^2)", mu,
               2 * (lam + 5) / (2 * (lam + 5) + Ly**2)),
        _upper("mu <= alpha*lam^2*L^2/(64r2(lam+5))", mu,
               alpha * Ly**2 / (64 * r2 * (lam + 5))),
    ]
    return DescentCheck(passed=all(b.ok for b in checks), bounds=tuple(checks))


def check_descent_params_dual(L: float, lam: float, params: AlgoParams) -> DescentCheck:
    """Mirrored admissibility for the dual-side descent estimate, obtained
    by swapping (x, z, r1, c, beta, L) with (y, v, r2, alpha, mu, lam*L)."""
    if L <= 0 or lam <= 0:
        raise ParameterError("need L > 0 and lam > 0")
    c, alpha, beta, mu = params.c, params.alpha, params.beta, params.mu
    r1, r2 = params.r1, params.r2
    Ly = lam * L

    checks = [
        _lower("r1 >= 2L", r1, 2 * L),
        _lower("r2 >= 2*lam*L", r2, 2 * Ly),
        _upper("alpha <= 4/(3(lam*L+r2))", alpha, 4.0 / (3 * (Ly + r2))),
        _upper("alpha <= 1/(6L)", alpha, 1.0 / (6 * L)),
    ]
    sigma_p = _sigma_of_c(alpha, r2, Ly)
    L_h = (L / (r2 - Ly) + 2.0) * L + r1 if r2 > Ly else math.inf
    checks += [
        _upper("c <= 2/(3*L*sigma'^2)", c,
               2.0 / (3 * L * sigma_p**2) if np.isfinite(sigma_p) else -math.inf),
        _upper("c <= 1/(6*L_h)", c, 1.0 / (6 * L_h) if np.isfinite(L_h) else -math.inf),
        _upper("c <= 1/(5*sqrt(lam+5)*L)", c, 1.0 / (5 * math.sqrt(lam + 5) * L)),
        _upper("mu <= 24r2/(360r2+5r2^2*lam+(2L+5r2)^2)", mu,
               24 * r2 / (360 * r2 + 5 * r2**2 * lam + (2 * L + 5 * r2) ** 2)),
        _upper("mu <= c*L^2/(384r2(lam+5)(lam+1)^2)", mu,
               c * L**2 / (384 * r2 * (lam + 5) * (lam + 1) ** 2)),
        _upper("beta <= 2(lam+5)/(2(lam+5)+L^2)", beta,
               2 * (lam + 5) / (2 * (lam + 5) + L**2)),
        _upper("beta <= c*L^2/(64r1(lam+5))", beta,
               c * L**2 / (64 * r1 * (lam + 5))),
    ]
    return DescentCheck(passed=all(b.ok for b in checks), bounds=tuple(checks))


def descent_step_params(L: float, lam: float, r1: float = None,
                        r2: float = None, safety: float = 1.0,
                        dual: bool = False) -> AlgoParams:
    """Largest parameters admitted by the descent estimate for given radii
    (defaults r1 = 2L and the smallest r2 accepted by the error-bound
    constants).  ``safety`` < 1 backs every cap off proportionally;
    ``dual`` uses the mirrored dual-side hypotheses instead."""
    if r1 is None:
        r1 = 2 * L
    Ly = lam * L
    if r2 is None:
        r2 = max(2 * Ly, 1.01 * (Ly / (r1 - L) + 2.0) * Ly)
    if dual:
        alpha = safety * min(4.0 / (3 * (Ly + r2)), 1.0 / (6 * L))
        sigma_p = _sigma_of_c(alpha, r2, Ly)
        L_h = (L / (r2 - Ly) + 2.0) * L + r1
        c = safety * min(2.0 / (3 * L * sigma_p**2), 1.0 / (6 * L_h),
                         1.0 / (5 * math.sqrt(lam + 5) * L))
        mu = safety * min(
            24 * r2 / (360 * r2 + 5 * r2**2 * lam + (2 * L + 5 * r2) ** 2),
            c * L**2 / (384 * r2 * (lam + 5) * (lam + 1) ** 2))
        beta = safety * min(2 * (lam + 5) / (2 * (lam + 5) + L**2),
                            c * L**2 / (64 * r1 * (lam + 5)))
        return AlgoParams(c=c, alpha=alpha, beta=beta, mu=mu, r1=r1, r2=r2)
    c = safety * min(4.0 / (3 * (L + r1)), 1.0 / (6 * Ly))
    sigma = _sigma_of_c(c, r1, L)
    L_d = (Ly / (r1 - L) + 2.0) * Ly + r2
    alpha = safety * min(2.0 / (3 * Ly * sigma**2), 1.0 / (6 * L_d),
                         1.0 / (5 * lam * math.sqrt(lam + 5) * L))
    beta = safety * min(
        24 * r1 / (360 * r1 + 5 * r1**2 * lam + (2 * Ly + 5 * r1) ** 2),
        alpha * Ly**2 / (384 * r1 * (lam + 5) * (lam + 1) ** 2))
    mu = safety * min(2 * (lam + 5) / (2 * (lam + 5) + Ly**2),
                      alpha * Ly**2 / (64 * r2 * (lam + 5)))
    return AlgoParams(c=c, alpha=alpha, beta=beta, mu=mu, r1=r1, r2=r2)


# ---------------------------------------------------------------------------
# Universal (symmetric) parameter rule, lam = 1


def universal_c(L: float, r: float) -> float:
    """Symmetric stepsize c = alpha for radii r1 = r2 = r (lam = 1)."""
    L_d = (L / (r - L) + 2.0) * L + r
    return min(4.0 / (3 * (L + r)), 1.0 / (6 * L), 1.0 / (6 * L_d),
               1.0 / (5 * math.sqrt(6.0) * L))


def universal_beta(L: float, r: float, c: float) -> float:
    """Symmetric averaging weight beta = mu for the universal rule."""
    return min(
        24 * r / (360 * r + 5 * r**2 + (2 * L + 5 * r) ** 2),
        c * L**2 / (9216 * r),
        12.0 / (12 + L**2),
        c * L**2 / (384 * r),
    )


def universal_c_lower_bound(L: float, r: float) -> float:
    return 8 * L / (3 * (r - L) ** 2)


def _auto_universal_r(L: float) -> float:
    # smallest radius multiple (0.05 steps) whose stepsize clears the lower
    # bound; by homogeneity the multiple does not depend on L
    for t in np.arange(2.0, 100.0 + 1e-9, 0.05):
        r = float(t) * L
        if universal_c_lower_bound(L, r) < universal_c(L, r):
            return r
    raise ParameterError("no radius in [2L, 100L] satisfies the stepsize lower bound")


def universal_params(L: float, r: float = None, t_cap: float = None,
                     enforce_c_lower_bound: bool = None) -> AlgoParams:
    """Single symmetric parameter set (c=alpha, beta=mu, r1=r2) for lam = 1.

    With ``r`` unspecified the radius is auto-selected as the smallest
    multiple of L whose stepsize clears the lower bound 8L/(3(r-L)^2) < c
    (about 19.65 L).  An explicit ``r`` is validated against that lower
    bound and rejected if it fails, flagging that r must be increased.
    ``t_cap`` caps beta = mu (the horizon-dependent scaling, supplied by
    the caller).
    """
    if L <= 0:
        raise ParameterError("need L > 0")
    if enforce_c_lower_bound is None:
        enforce_c_lower_bound = r is not None
    if r is None:
        r = _auto_universal_r(L)
    if r < 2 * L:
        raise ParameterError(f"need r >= 2L (got r={r:g}, L={L:g})")
    c = universal_c(L, r)
    lower = universal_c_lower_bound(L, r)
    if enforce_c_lower_bound and not lower < c:
        raise ParameterError(
            f"stepsize lower bound violated: 8L/(3(r-L)^2) = {lower:.4g} "
            f">= c = {c:.4g}; increase r (about 19.65 L suffices)")
    beta = universal_beta(L, r, c)
    if t_cap is not None:
        beta = min(beta, t_cap)
    return AlgoParams(c=c, alpha=c, beta=beta, mu=beta, r1=r, r2=r)


# ---------------------------------------------------------------------------
# Feasibility scan over (t1, t2) with r = t2 L and c = alpha = 1/(t1 r)


def _descent_coefficients(L, lam, r1, r2, c, alpha, beta, mu):
    """The four iterate coefficients of the aggregated descent estimate
    with kappa = 2 beta; all four positive certifies sufficient descent."""
    Lx, Ly = L, lam * L
    if r1 <= Lx or r2 <= Ly or c <= 0 or alpha <= 0:
        return (-math.inf,) * 4
    sigma1 = (Ly + r1 - Lx) / (r1 - Lx)
    sigma2 = r1 / (r1 - Lx)
    sigma3 = r1 * sigma1 / (r2 - Ly) + sigma2 / sigma1
    sigma5 = r2 / (r2 - Ly)
    L_d = Ly * sigma1 + Ly + r2
    sigma6 = (2 * c * r1 + 1) / (c * (r1 - Lx))
    sigma8 = (1 + alpha * L_d) / (alpha * (r2 - Ly))
    kappa = 2 * beta
    s1 = 1.0 / c - (Lx + r1) / 2 - Ly
    s2 = 1.0 / alpha + (r2 - Ly) / 2 - L_d - Ly * sigma6**2
    s3 = r1 * ((2 - beta) / (2 * beta) - 2 * sigma2 - 1.0 / kappa)
    a = 12 * r1 * kappa * sigma1**2
    coef_x = s1 - (a + s2 + 2 * mu * (2 - mu) * r2) * Ly**2 * alpha**2 * sigma6**2
    coef_y = s2 / 2 - (a + 2 * mu * (2 - mu) * r2) * (1 + sigma8) ** 2
    coef_z = s3 - (mu * (2 - mu) * r2 + 6 * r1 * kappa * sigma1**2) * sigma3**2
    coef_v = (2 - mu) * r2 / (4 * mu) - 6 * r1 * kappa * sigma1**2 * sigma5**2
    return coef_x, coef_y, coef_z, coef_v


def feasible_point(L: float, beta: float, mu: float, t1: float, t2: float) -> bool:
    """Pointwise feasibility predicate of the symmetric scan (lam = 1)."""
    if t1 <= 0 or t2 < 2:
        return False
    r = t2 * L
    c = 1.0 / (t1 * r)
    coefs = _descent_coefficients(L, 1.0, r, r, c, c, beta, mu)
    return bool(all(np.isfinite(coefs)) and all(co > 0 for co in coefs))


@dataclass(frozen=True)
class FeasibilityScan:
    t1: np.ndarray
    t2: np.ndarray
    feasible: np.ndarray  # boolean matrix indexed [i_t1, j_t2]

    def to_rows(self):
        for i, a in enumerate(self.t1):
            for j, b in enumerate(self.t2):
                yield float(a), float(b), bool(self.feasible[i, j])


def feasibility_scan(L: float, beta: float, mu: float,
                     t1_range=(0.0, 100.0), t2_range=(0.0, 100.0),
                     grid_steps: int = 101) -> FeasibilityScan:
    """Mark each (t1, t2) lattice point whose four descent coefficients are
    all positive.  The predicate is pointwise, so the matrix is independent
    of traversal order."""
    t1s = np.linspace(t1_range[0], t1_range[1], grid_steps)
    t2s = np.linspace(t2_range[0], t2_range[1], grid_steps)
    mat = np.zeros((grid_steps, grid_steps), dtype=bool)
    for i, t1 in enumerate(t1s):
        for j, t2 in enumerate(t2s):
            mat[i, j] = feasible_point(L, beta, mu, float(t1), float(t2))
    return FeasibilityScan(t1=t1s, t2=t2s, feasible=mat)


# ---------------------------------------------------------------------------
# Regularity probes


@dataclass(frozen=True)
class RhoScan:
    rho_min: float
    argmin: tuple
    threshold: float  # -1/(2L)


def rho_value(prob: MinimaxProblem, u_star, x: float, y: float) -> float:
    """Weak-MVI ratio <G(u), u - u*> / ||G(u)||^2 at a single point."""
    prob.require_scalar("rho_value")
    xs, ys = float(u_star[0]), float(u_star[1])
    g1 = float(prob.grad_x(x, y))
    g2 = -float(prob.grad_y(x, y))
    denom = g1 * g1 + g2 * g2
    if denom < 1e-24:
        raise ParameterError("||G(u)|| vanishes at the requested point")
    return (g1 * (x - xs) + g2 * (y - ys)) / denom


def weak_mvi_rho(prob: MinimaxProblem, u_star, grid: GridSpec = None) -> RhoScan:
    """Minimize the weak-MVI ratio over the box, skipping near-zeros of G.

    The default scan uses an 801-point axis with one refinement pass; the
    threshold -1/(2L) uses the problem's larger block modulus.
    """
    prob.require_scalar("weak_mvi_rho")
    if grid is None:
        grid = GridSpec(resolution=801, refinements=1)
    xs_, ys_ = float(u_star[0]), float(u_star[1])

    def ratio(X, Y):
        g1 = prob.grad_x(X, Y) + 0.0 * X * Y
        g2 = -(prob.grad_y(X, Y) + 0.0 * X * Y)
        denom = g1 * g1 + g2 * g2
        num = g1 * (X - xs_) + g2 * (Y - ys_)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(denom < 1e-24, np.inf, num / np.maximum(denom, 1e-300))

    bx, by = prob.box_x, prob.box_y
    a, b, val = refine_2d_min(
        ratio, (float(bx.lower[0]), float(bx.upper[0])),
        (float(by.lower[0]), float(by.upper[0])), grid)
    return RhoScan(rho_min=val, argmin=(a, b), threshold=-1.0 / (2 * prob.lip))


def interaction_dominance(prob: MinimaxProblem, x: float, y: float, eta: float):
    """Schur-complement curvature pair at a point (scalar blocks):

        value_x = fxx + fxy (eta - fyy)^-1 fyx
        value_y = -fyy + fyx (eta + fxx)^-1 fxy
    """
    prob.require_scalar("interaction_dominance")
    if prob.second_derivs is None:
        raise UnsupportedProblemError(
            f"problem '{prob.name}' carries no second derivatives")
    fxx, fxy, fyx, fyy = (float(t) for t in prob.second_derivs(x, y))
    inner_x = eta - fyy
    inner_y = eta + fxx
    if abs(inner_x) < 1e-12 or abs(inner_y) < 1e-12:
        raise ParameterError("singular inner term: eta too close to a curvature")
    value_x = fxx + fxy * fyx / inner_x
    value_y = -fyy + fyx * fxy / inner_y
    return value_x, value_y


def kl_ratio_scan(prob: MinimaxProblem, side: str = "dual", theta: float = 0.5,
                  grid: GridSpec = None, gap_floor: float = 1e-12):
    """Grid-certified KL modulus: the infimum over the box of

        residual / gap^theta

    where gap is the inner best-response optimality gap and residual the
    matching block's normal-cone distance.  Points with gap below
    ``gap_floor`` are excluded (the gap^theta guard at exact optima).
    Returns (tau, witness).  The certificate holds on the grid only; it is
    empirical, not a proof.
    """
    prob.require_scalar("kl_ratio_scan")
    prob.require_value("kl_ratio_scan")
    if grid is None:
        grid = GridSpec(resolution=2001, refinements=0)
    n = grid.resolution
    bx, by = prob.box_x, prob.box_y
    xs = np.linspace(bx.lower[0], bx.upper[0], n)
    ys = np.linspace(by.lower[0], by.upper[0], n)
    F = prob.f(xs[:, None], ys[None, :]) + 0.0 * xs[:, None] * ys[None, :]
    if side == "dual":
        gap = F.max(axis=1, keepdims=True) - F
        g = -(prob.grad_y(xs[:, None], ys[None, :]) + 0.0 * xs[:, None])
        res = box_residual_grid(by.lower[0], by.upper[0], ys[None, :], g)
    elif side == "primal":
        gap = F - F.min(axis=0, keepdims=True)
        g = prob.grad_x(xs[:, None], ys[None, :]) + 0.0 * ys[None, :]
        res = box_residual_grid(bx.lower[0], bx.upper[0], xs[:, None], g)
    else:
        raise ParameterError("side must be 'dual' or 'primal'")
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(gap > gap_floor, res / np.maximum(gap, gap_floor) ** theta,
                         np.inf)
    flat = int(np.argmin(ratio))
    i, j = divmod(flat, ratio.shape[1])
    return float(ratio[i, j]), (float(xs[i]), float(ys[j]))

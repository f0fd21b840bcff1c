"""Minimax problem definitions.

A problem is min over x in X of max over y in Y of f(x, y) on box sets,
with analytic gradients and gradient-Lipschitz metadata.  The doubly
regularized objective

    F(x, y, z, v) = f(x, y) + (r1/2)||x - z||^2 - (r2/2)||y - v||^2

is evaluated here as well, together with the registry of closed-form
benchmark problems.  All built-ins are 1-D in x and 1-D in y; their
callables accept scalars or numpy arrays elementwise, so they can be
evaluated on meshgrids by the brute-force oracles.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import UnsupportedProblemError

Array = np.ndarray


def _vector(p, dim: int, what: str) -> Array:
    arr = np.atleast_1d(np.asarray(p, dtype=float))
    if arr.shape != (dim,):
        raise ValueError(f"{what}: expected shape ({dim},), got {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class BoxSet:
    """Axis-aligned box ``{p : lower <= p <= upper}``."""

    lower: Array
    upper: Array

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.shape != upper.shape:
            raise ValueError("lower and upper must have the same shape")
        if np.any(lower > upper):
            raise ValueError("box requires lower[i] <= upper[i]")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.upper - self.lower))

    def project(self, p) -> Array:
        arr = _vector(p, self.dim, "point to project")
        return np.minimum(np.maximum(arr, self.lower), self.upper)

    def contains(self, p, tol: float = 0.0) -> bool:
        arr = _vector(p, self.dim, "point")
        return bool(np.all(arr >= self.lower - tol) and np.all(arr <= self.upper + tol))

    def interior_lattice(self, per_axis: int) -> Array:
        """Strictly interior lattice, ``per_axis`` points per coordinate."""
        axes = [
            lo + (hi - lo) * np.arange(1, per_axis + 1) / (per_axis + 1)
            for lo, hi in zip(self.lower, self.upper)
        ]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def sample(self, rng: np.random.Generator, n: int) -> Array:
        return rng.uniform(self.lower, self.upper, size=(n, self.dim))


def project(box: BoxSet, p) -> Array:
    """Componentwise clamp of ``p`` onto ``box`` (idempotent)."""
    return box.project(p)


@dataclass(frozen=True)
class KLSpec:
    """Kurdyka-Lojasiewicz data: gap^theta <= residual / tau on the box."""

    theta: float
    tau: float
    side: str = "dual"

    def __post_init__(self):
        if not 0.0 < self.theta < 1.0:
            raise ValueError("theta must lie in (0, 1)")
        if self.tau <= 0.0:
            raise ValueError("tau must be positive")
        if self.side not in ("dual", "primal"):
            raise ValueError("side must be 'dual' or 'primal'")


@dataclass(frozen=True, eq=False)
class SmoothedState:
    """Iterate of the doubly smoothed dynamics: decision pair (x, y) plus
    the exponential-average anchors (z, v)."""

    x: Array
    y: Array
    z: Array
    v: Array

    def __post_init__(self):
        for name in ("x", "y", "z", "v"):
            arr = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            object.__setattr__(self, name, arr)

    @classmethod
    def from_xy(cls, x, y) -> "SmoothedState":
        """Anchors initialized to the decision variables (z=x, v=y)."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        return cls(x=x, y=y, z=x.copy(), v=y.copy())

    def close_to(self, other: "SmoothedState", tol: float = 0.0) -> bool:
        return (
            np.all(np.abs(self.x - other.x) <= tol)
            and np.all(np.abs(self.y - other.y) <= tol)
            and np.all(np.abs(self.z - other.z) <= tol)
            and np.all(np.abs(self.v - other.v) <= tol)
        )


@dataclass(frozen=True, eq=False)
class MinimaxProblem:
    """Smooth payoff with analytic gradients on a box product X x Y.

    ``f`` may be ``None`` for problems specified only through their
    gradient field (the registry's "polar_game"); operations that need
    function values reject such problems.  ``lip_x`` and ``lip_y`` are
    gradient-Lipschitz moduli in the summed-distance sense:

        ||grad_x f(x,y) - grad_x f(x',y')|| <= lip_x (||x-x'|| + ||y-y'||)

    and the y-analogue with ``lip_y``.  For 1-D problems every callable
    must broadcast elementwise over numpy arrays.
    """

    name: str
    dim_x: int
    dim_y: int
    box_x: BoxSet
    box_y: BoxSet
    f: Optional[Callable]
    grad_x: Callable
    grad_y: Callable
    lip_x: float
    lip_y: float
    second_derivs: Optional[Callable] = None
    stationary_point: Optional[tuple] = None
    dual_kl: Optional[KLSpec] = None
    dual_concave: bool = False

    def __post_init__(self):
        if self.dim_x < 1 or self.dim_y < 1:
            raise ValueError("dimensions must be positive")
        if self.box_x.dim != self.dim_x or self.box_y.dim != self.dim_y:
            raise ValueError("box dimensions must match dim_x/dim_y")
        if self.lip_x < 0 or self.lip_y < 0:
            raise ValueError("Lipschitz moduli must be nonnegative")

    @property
    def lam(self) -> float:
        """Ratio lip_y / lip_x."""
        return self.lip_y / self.lip_x

    @property
    def lip(self) -> float:
        """Single modulus used by baseline stepsizes and MVI thresholds."""
        return max(self.lip_x, self.lip_y)

    @property
    def has_value(self) -> bool:
        return self.f is not None

    @property
    def is_scalar(self) -> bool:
        return self.dim_x == 1 and self.dim_y == 1

    def require_value(self, operation: str) -> None:
        if self.f is None:
            raise UnsupportedProblemError(
                f"{operation} needs function values, but problem "
                f"'{self.name}' is defined only through its gradient field"
            )

    def require_scalar(self, operation: str) -> None:
        if not self.is_scalar:
            raise UnsupportedProblemError(
                f"{operation} supports only 1-D blocks; problem "
                f"'{self.name}' has dim_x={self.dim_x}, dim_y={self.dim_y}"
            )


# ---------------------------------------------------------------------------
# Regularized objective


def eval_F(prob: MinimaxProblem, r1: float, r2: float, s: SmoothedState) -> float:
    """Doubly regularized value f(x,y) + (r1/2)||x-z||^2 - (r2/2)||y-v||^2."""
    prob.require_value("eval_F")
    quad = 0.5 * r1 * np.sum((s.x - s.z) ** 2) - 0.5 * r2 * np.sum((s.y - s.v) ** 2)
    return float(np.sum(prob.f(*_fargs(prob, s.x, s.y)))) + float(quad)


def grad_F_x(prob: MinimaxProblem, r1: float, r2: float, s: SmoothedState) -> Array:
    g = np.atleast_1d(np.asarray(prob.grad_x(*_fargs(prob, s.x, s.y)), dtype=float))
    return g + r1 * (s.x - s.z)


def grad_F_y(prob: MinimaxProblem, r1: float, r2: float, s: SmoothedState) -> Array:
    g = np.atleast_1d(np.asarray(prob.grad_y(*_fargs(prob, s.x, s.y)), dtype=float))
    return g - r2 * (s.y - s.v)


def _fargs(prob: MinimaxProblem, x, y):
    # 1-D callables are elementwise in scalars; general ones take vectors.
    if prob.is_scalar and np.ndim(x) == 1:
        return x[0], y[0]
    return x, y


# ---------------------------------------------------------------------------
# Normal-cone residual for box constraints (shared by measures and analysis)


def box_residual(box: BoxSet, point: Array, g: Array) -> float:
    """Euclidean distance from 0 to g + N_box(point), computed coordinatewise:
    interior -> |g_i|; at the lower bound -> max(0, -g_i); at the upper
    bound -> max(0, g_i)."""
    point = np.atleast_1d(np.asarray(point, dtype=float))
    g = np.atleast_1d(np.asarray(g, dtype=float))
    at_lower = point <= box.lower
    at_upper = point >= box.upper
    comp = np.abs(g)
    comp = np.where(at_lower, np.maximum(0.0, -g), comp)
    comp = np.where(at_upper, np.maximum(0.0, g), comp)
    comp = np.where(at_lower & at_upper, 0.0, comp)
    return float(np.linalg.norm(comp))


def box_residual_grid(lower: float, upper: float, points: Array, g: Array) -> Array:
    """Vectorized 1-D version of :func:`box_residual` for scan grids."""
    comp = np.abs(g)
    comp = np.where(points <= lower, np.maximum(0.0, -g), comp)
    comp = np.where(points >= upper, np.maximum(0.0, g), comp)
    return comp


# ---------------------------------------------------------------------------
# Built-in benchmark registry

_SIN1_SQ = np.sin(1.0) ** 2

# Grid-certified dual-side KL modulus for the KL-nonconcave example with
# exponent 1/2 (2001^2 scan of residual / gap^theta, stable under grid
# doubling; the witness sits at the (-1, -1) corner).
KL_NONCONCAVE_TAU = 4.899296

# Interior game-stationary point of the forsaken example, solved to 1e-14
# from grad_x = grad_y = 0 (reported in the literature as roughly (0.08, 0.4)).
FORSAKEN_STATIONARY = (0.07802666873846009, 0.41193385136581984)


def _phi6(z):
    return z**2 / 4 - z**4 / 2 + z**6 / 6


def _phi6_d1(z):
    return z / 2 - 2 * z**3 + z**5


def _phi6_d2(z):
    return 0.5 - 6 * z**2 + 5 * z**4


def _forsaken() -> MinimaxProblem:
    return _scalar_problem(
        "forsaken",
        bound=1.5,
        f=lambda x, y: x * (y - 0.45) + _phi6(x) - _phi6(y),
        gx=lambda x, y: (y - 0.45) + _phi6_d1(x),
        gy=lambda x, y: x - _phi6_d1(y),
        second=lambda x, y: (_phi6_d2(x), 1.0 + 0.0 * x, 1.0 + 0.0 * x, -_phi6_d2(y)),
        lip_x=12.3125,
        lip_y=12.3125,
        stationary=FORSAKEN_STATIONARY,
    )


def _bilinear_coupled(a: float) -> MinimaxProblem:
    def g(z):
        return (z + 1) * (z - 1) * (z + 3) * (z - 3)

    def g1(z):
        return 4 * z**3 - 20 * z

    return _scalar_problem(
        f"bilinear_coupled({a:g})",
        bound=4.0,
        f=lambda x, y: g(x) + a * x * y - g(y),
        gx=lambda x, y: g1(x) + a * y,
        gy=lambda x, y: a * x - g1(y),
        second=lambda x, y: (
            12 * x**2 - 20,
            a + 0.0 * x,
            a + 0.0 * x,
            -(12 * y**2 - 20),
        ),
        lip_x=172.0,  # max |g''| on [-4, 4]; also quoted for A=10 in the source text
        lip_y=172.0,
        stationary=(0.0, 0.0),
    )


def _sixth_order() -> MinimaxProblem:
    def parts(x, y):
        w = y - 3 * x + 0.05 * x**3
        u = 4 * x**2 - w**2 - 0.1 * y**4
        s = np.exp(-0.01 * (x**2 + y**2))
        return w, u, s

    def f(x, y):
        _, u, s = parts(x, y)
        return u * s

    def gx(x, y):
        w, u, s = parts(x, y)
        ux = 8 * x - 2 * w * (-3 + 0.15 * x**2)
        return s * (ux - 0.02 * x * u)

    def gy(x, y):
        w, u, s = parts(x, y)
        uy = -2 * w - 0.4 * y**3
        return s * (uy - 0.02 * y * u)

    def second(x, y):
        w, u, s = parts(x, y)
        wx = -3 + 0.15 * x**2
        ux = 8 * x - 2 * w * wx
        uy = -2 * w - 0.4 * y**3
        uxx = 8 - 2 * (wx**2 + w * (0.3 * x))
        uxy = -2 * wx
        uyy = -2 - 1.2 * y**2
        fxx = s * (uxx - 0.04 * x * ux - 0.02 * u + 0.0004 * x**2 * u)
        fxy = s * (uxy - 0.02 * y * ux - 0.02 * x * uy + 0.0004 * x * y * u)
        fyy = s * (uyy - 0.04 * y * uy - 0.02 * u + 0.0004 * y**2 * u)
        return fxx, fxy, fxy, fyy

    return _scalar_problem(
        "sixth_order",
        bound=2.0,
        f=f,
        gx=gx,
        gy=gy,
        second=second,
        lip_x=10.0,
        lip_y=6.5970473,  # grid-certified (1e-3 mesh, refined), rounded up
        stationary=(0.0, 0.0),
    )


def _polar_phi(a, b):
    return a * (-1 + a**2 + b**2) * (-9 + 16 * a**2 + 16 * b**2)


def _polar_phi_da(a, b):
    return 80 * a**4 + 96 * a**2 * b**2 - 75 * a**2 + 16 * b**4 - 25 * b**2 + 9


def _polar_phi_db(a, b):
    return 2 * a * b * (32 * a**2 + 32 * b**2 - 25)


def _polar_game() -> MinimaxProblem:
    # Defined through its gradient field G(u) = [Phi(x,y) - y, Phi(y,x) + x]
    # with G = [grad_x f, -grad_y f]; no scalar payoff exists (the field has
    # an asymmetric Jacobian), so f is unavailable.
    return _scalar_problem(
        "polar_game",
        bound=1.0,
        f=None,
        gx=lambda x, y: _polar_phi(x, y) - y,
        gy=lambda x, y: -(_polar_phi(y, x) + x),
        second=lambda x, y: (
            _polar_phi_da(x, y),
            _polar_phi_db(x, y) - 1.0,
            -_polar_phi_db(y, x) - 1.0,
            -_polar_phi_da(y, x),
        ),
        lip_x=101.0,
        lip_y=101.0,
        stationary=(0.0, 0.0),
    )


def _kl_nonconcave() -> MinimaxProblem:
    return _scalar_problem(
        "kl_nonconcave",
        bound=1.0,
        f=lambda x, y: x**2 + 3 * np.sin(x) ** 2 * np.sin(y) ** 2 - 4 * y**2 - 10 * np.sin(y) ** 2,
        gx=lambda x, y: 2 * x + 3 * np.sin(2 * x) * np.sin(y) ** 2,
        gy=lambda x, y: 3 * np.sin(x) ** 2 * np.sin(2 * y) - 8 * y - 10 * np.sin(2 * y),
        second=lambda x, y: (
            2 + 6 * np.cos(2 * x) * np.sin(y) ** 2,
            3 * np.sin(2 * x) * np.sin(2 * y),
            3 * np.sin(2 * x) * np.sin(2 * y),
            (6 * np.sin(x) ** 2 - 20) * np.cos(2 * y) - 8,
        ),
        lip_x=2 + 6 * _SIN1_SQ,
        lip_y=28.0,
        stationary=(0.0, 0.0),
        dual_kl=KLSpec(theta=0.5, tau=KL_NONCONCAVE_TAU, side="dual"),
    )


def _convex_nonconcave() -> MinimaxProblem:
    return _scalar_problem(
        "convex_nonconcave",
        bound=1.0,
        f=lambda x, y: 2 * x**2 - y**2 + 4 * x * y + 4 * y**3 / 3 - y**4 / 4,
        gx=lambda x, y: 4 * x + 4 * y,
        gy=lambda x, y: -2 * y + 4 * x + 4 * y**2 - y**3,
        second=lambda x, y: (
            4.0 + 0.0 * x,
            4.0 + 0.0 * x,
            4.0 + 0.0 * x,
            -2 + 8 * y - 3 * y**2,
        ),
        lip_x=4.0,
        lip_y=13.0,
        stationary=(0.0, 0.0),
    )


def _wrong_smoothing() -> MinimaxProblem:
    return _scalar_problem(
        "wrong_smoothing",
        bound=1.0,
        f=lambda x, y: 2 * x**2 - y**2 + 4 * x * y**6 + 4 * y**3 / 3 - y**4 / 4,
        gx=lambda x, y: 4 * x + 4 * y**6,
        gy=lambda x, y: -2 * y + 24 * x * y**5 + 4 * y**2 - y**3,
        second=lambda x, y: (
            4.0 + 0.0 * x,
            24 * y**5,
            24 * y**5,
            -2 + 120 * x * y**4 + 8 * y - 3 * y**2,
        ),
        lip_x=24.0,
        lip_y=133.0,
        stationary=(0.0, 0.0),
    )


def _toy_bilinear() -> MinimaxProblem:
    return _scalar_problem(
        "toy_bilinear",
        bound=1.0,
        f=lambda x, y: x * y,
        gx=lambda x, y: y + 0.0 * x,
        gy=lambda x, y: x + 0.0 * y,
        second=lambda x, y: (0.0 * x, 1.0 + 0.0 * x, 1.0 + 0.0 * x, 0.0 * x),
        lip_x=1.0,
        lip_y=1.0,
        stationary=(0.0, 0.0),
    )


def _scalar_problem(name, bound, f, gx, gy, second, lip_x, lip_y,
                    stationary=None, dual_kl=None, dual_concave=False):
    box = BoxSet(np.array([-bound]), np.array([bound]))
    return MinimaxProblem(
        name=name,
        dim_x=1,
        dim_y=1,
        box_x=box,
        box_y=box,
        f=f,
        grad_x=gx,
        grad_y=gy,
        second_derivs=second,
        lip_x=lip_x,
        lip_y=lip_y,
        stationary_point=stationary,
        dual_kl=dual_kl,
        dual_concave=dual_concave,
    )


_REGISTRY: dict[str, Callable[[], MinimaxProblem]] = {
    "forsaken": _forsaken,
    "sixth_order": _sixth_order,
    "polar_game": _polar_game,
    "kl_nonconcave": _kl_nonconcave,
    "convex_nonconcave": _convex_nonconcave,
    "wrong_smoothing": _wrong_smoothing,
    "toy_bilinear": _toy_bilinear,
}

_BILINEAR_RE = re.compile(r"^bilinear_coupled\((?P<a>[-+0-9.eE]+)\)$")


def registry_names() -> list[str]:
    return sorted(_REGISTRY) + ["bilinear_coupled(A)"]


def builtin(name: str) -> MinimaxProblem:
    """Look up a benchmark problem by registry name.

    ``bilinear_coupled`` takes its coupling strength in the name, e.g.
    ``builtin("bilinear_coupled(11)")``.
    """
    name = name.strip()
    match = _BILINEAR_RE.match(name)
    if match:
        return _bilinear_coupled(float(match.group("a")))
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise KeyError(
            f"unknown problem '{name}'; registry: {', '.join(registry_names())}"
        ) from None


def fd_gradient_check(prob: MinimaxProblem, samples: int = 100,
                      step: float = 1e-5, seed: int = 0) -> float:
    """Max relative error of the analytic gradients against central finite
    differences of f at interior sample points.  Deterministic for a seed."""
    prob.require_value("fd_gradient_check")
    rng = np.random.default_rng(seed)
    # keep samples away from the boundary so central differences stay inside
    shrink = 1e-3
    xs = prob.box_x.sample(rng, samples) * (1 - shrink)
    ys = prob.box_y.sample(rng, samples) * (1 - shrink)

    def fval(x, y):
        return float(np.sum(prob.f(*_fargs(prob, x, y))))

    worst = 0.0
    for x0, y0 in zip(xs, ys):
        gx = _vector(prob.grad_x(*_fargs(prob, x0, y0)), prob.dim_x, "grad_x")
        gy = _vector(prob.grad_y(*_fargs(prob, x0, y0)), prob.dim_y, "grad_y")
        fd_x = np.empty_like(gx)
        for i in range(prob.dim_x):
            e = np.zeros_like(x0)
            e[i] = step
            fd_x[i] = (fval(x0 + e, y0) - fval(x0 - e, y0)) / (2 * step)
        fd_y = np.empty_like(gy)
        for i in range(prob.dim_y):
            e = np.zeros_like(y0)
            e[i] = step
            fd_y[i] = (fval(x0, y0 + e) - fval(x0, y0 - e)) / (2 * step)
        scale = max(1.0, float(np.linalg.norm(gx)), float(np.linalg.norm(gy)))
        err = max(np.linalg.norm(fd_x - gx), np.linalg.norm(fd_y - gy)) / scale
        worst = max(worst, float(err))
    return worst

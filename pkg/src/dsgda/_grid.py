"""Dense-grid optimization primitives with window refinement.

Every refinement level re-grids a window of +/- WINDOW cells around the
incumbent at full resolution, so the spacing shrinks by 2*WINDOW/(n-1)
per level.  If an incumbent lands on the edge of a refined window (the
true optimum drifted outside), the window slides until the incumbent is
interior again.  Ties are broken toward the smallest coordinate, which
makes every reduction independent of evaluation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

WINDOW = 10
_MAX_SLIDES = 200


@dataclass(frozen=True)
class GridSpec:
    """Resolution per axis and number of x10-cell refinement passes."""

    resolution: int = 2001
    refinements: int = 2

    def __post_init__(self):
        if self.resolution < 3:
            raise ValueError("resolution must be at least 3")
        if self.refinements < 0:
            raise ValueError("refinements must be nonnegative")

    def doubled(self) -> "GridSpec":
        return GridSpec(2 * self.resolution - 1, self.refinements)


DEFAULT_GRID = GridSpec()


def refine_scalar(fun, lo: float, hi: float, spec: GridSpec, maximize: bool = False):
    """Optimize a vectorized scalar function over [lo, hi].

    Returns (argopt, value).  ``fun`` maps a 1-D array to a 1-D array.
    """
    if hi <= lo:
        v = float(fun(np.array([lo]))[0])
        return lo, v
    pick = np.argmax if maximize else np.argmin
    n = spec.resolution
    cur_lo, cur_hi = lo, hi
    best_x = best_v = None
    for level in range(spec.refinements + 1):
        for _ in range(_MAX_SLIDES):
            xs = np.linspace(cur_lo, cur_hi, n)
            vals = np.asarray(fun(xs), dtype=float)
            i = int(pick(vals))
            slid = _slide(xs[i], i, n, cur_lo, cur_hi, lo, hi)
            if slid is None:
                break
            cur_lo, cur_hi = slid
        best_x, best_v = float(xs[i]), float(vals[i])
        if level < spec.refinements:
            h = (cur_hi - cur_lo) / (n - 1)
            cur_lo = max(lo, best_x - WINDOW * h)
            cur_hi = min(hi, best_x + WINDOW * h)
    return best_x, best_v


def _slide(center, i, n, cur_lo, cur_hi, lo, hi):
    """New window when the incumbent sits on a refined window's edge."""
    half = (cur_hi - cur_lo) / 2
    eps = 1e-15 * max(1.0, abs(lo), abs(hi))
    if i <= 1 and cur_lo > lo + eps:
        return max(lo, center - half), min(hi, center + half)
    if i >= n - 2 and cur_hi < hi - eps:
        return max(lo, center - half), min(hi, center + half)
    return None


def refine_minimax(fun2, out_box, in_box, spec: GridSpec, inner_lip: float,
                   outer_min: bool = True):
    """Optimize ``outer opt_x { inner opt_y fun2(x, y) }`` over two intervals.

    ``fun2(X, Y)`` must broadcast, with X shaped (m, 1) and Y shaped (1, k).
    ``outer_min=True`` computes min over the outer axis of the inner max;
    ``outer_min=False`` the reverse.  ``inner_lip`` bounds how fast the inner
    optimizer moves as the outer variable moves; it widens the inner window
    between refinement levels so the moving inner optimum stays covered.

    Returns (outer_arg, inner_arg, value).
    """
    (olo, ohi), (ilo, ihi) = out_box, in_box
    n = spec.resolution
    inner_reduce = np.max if outer_min else np.min
    inner_pick = np.argmax if outer_min else np.argmin
    outer_pick = np.argmin if outer_min else np.argmax

    cur = [olo, ohi, ilo, ihi]
    best = None
    for level in range(spec.refinements + 1):
        for _ in range(_MAX_SLIDES):
            xs = np.linspace(cur[0], cur[1], n)
            ys = np.linspace(cur[2], cur[3], n)
            m = np.asarray(fun2(xs[:, None], ys[None, :]), dtype=float)
            inner_vals = inner_reduce(m, axis=1)
            i = int(outer_pick(inner_vals))
            j = int(inner_pick(m[i]))
            moved = False
            slid = _slide(xs[i], i, n, cur[0], cur[1], olo, ohi)
            if slid is not None:
                cur[0], cur[1] = slid
                moved = True
            slid = _slide(ys[j], j, n, cur[2], cur[3], ilo, ihi)
            if slid is not None:
                cur[2], cur[3] = slid
                moved = True
            if not moved:
                break
        best = (float(xs[i]), float(ys[j]), float(m[i, j]))
        if level < spec.refinements:
            h_out = (cur[1] - cur[0]) / (n - 1)
            h_in = (cur[3] - cur[2]) / (n - 1)
            out_half = WINDOW * h_out
            in_half = WINDOW * h_in + inner_lip * out_half
            cur = [
                max(olo, best[0] - out_half),
                min(ohi, best[0] + out_half),
                max(ilo, best[1] - in_half),
                min(ihi, best[1] + in_half),
            ]
    x_star, y_coarse, _ = best
    # polish: redo the inner problem at the final outer point so the reported
    # value carries the 1-D refinement accuracy rather than the matrix mesh
    y_star, value = refine_scalar(
        lambda yv: fun2(np.array([[x_star]]), yv[None, :])[0],
        ilo, ihi, spec, maximize=outer_min,
    )
    return x_star, y_star, value


def refine_2d_min(fun2, box_a, box_b, spec: GridSpec, fun_mask=None):
    """Joint minimization over a 2-D box with window refinement.

    ``fun2`` broadcasts like in :func:`refine_minimax`.  ``fun_mask``, when
    given, marks entries to exclude (True = excluded); excluded entries are
    replaced by +inf.  Returns (a, b, value).
    """
    (alo, ahi), (blo, bhi) = box_a, box_b
    n = spec.resolution
    cur = [alo, ahi, blo, bhi]
    best = None
    for level in range(spec.refinements + 1):
        for _ in range(_MAX_SLIDES):
            xs = np.linspace(cur[0], cur[1], n)
            ys = np.linspace(cur[2], cur[3], n)
            m = np.asarray(fun2(xs[:, None], ys[None, :]), dtype=float)
            if fun_mask is not None:
                m = np.where(fun_mask(xs[:, None], ys[None, :]), np.inf, m)
            flat = int(np.argmin(m))
            i, j = divmod(flat, m.shape[1])
            moved = False
            slid = _slide(xs[i], i, n, cur[0], cur[1], alo, ahi)
            if slid is not None:
                cur[0], cur[1] = slid
                moved = True
            slid = _slide(ys[j], j, n, cur[2], cur[3], blo, bhi)
            if slid is not None:
                cur[2], cur[3] = slid
                moved = True
            if not moved:
                break
        best = (float(xs[i]), float(ys[j]), float(m[i, j]))
        if level < spec.refinements:
            h_a = (cur[1] - cur[0]) / (n - 1)
            h_b = (cur[3] - cur[2]) / (n - 1)
            cur = [
                max(alo, best[0] - WINDOW * h_a),
                min(ahi, best[0] + WINDOW * h_a),
                max(blo, best[1] - WINDOW * h_b),
                min(bhi, best[1] + WINDOW * h_b),
            ]
    return best

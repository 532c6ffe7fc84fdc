"""Second-order bivariate dominance conditions.

``H(x, y) = int_0^x int_0^y F`` and ``L(x, y) = int_0^x int_0^y K`` are
integrals of functions that are constant on the cells of the evaluation
lattice, so on each cell they are exactly bilinear.  Corner values are
accumulated as (cell value) x (cell area); no quadrature is involved.

A difference of two such surfaces is again bilinear per cell, and a bilinear
function on a rectangle attains its extrema at the corners.  Checking the
corners of the lattice therefore decides an inequality over the whole
square.  The marginal integrals are piecewise linear and are decided at
their breakpoints the same way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distribution import DEFAULT_TOL, check_same_frame, merge_grids
from .first_order import k_sheet
from .univariate import s_operator, sd_check
from .verdict import DominanceVerdict, Witness, combine


@dataclass(frozen=True, eq=False)
class BilinearSheet:
    """Double integral from the origin of a lattice-cell step function.

    ``V[i, j]`` is the integral over ``[0, xs[i]] x [0, ys[j]]``; ``cell[k, l]``
    is the integrand on ``[xs[k], xs[k+1]) x [ys[l], ys[l+1])``.
    """

    xs: np.ndarray
    ys: np.ndarray
    V: np.ndarray
    cell: np.ndarray

    def coefficients(self):
        """Per-cell ``(value, x_slope, y_slope, cross)`` in local coordinates."""
        dx = np.diff(self.xs)[:, None]
        dy = np.diff(self.ys)[None, :]
        v00 = self.V[:-1, :-1]
        return (
            v00,
            (self.V[1:, :-1] - v00) / dx,
            (self.V[:-1, 1:] - v00) / dy,
            self.cell,
        )

    def evaluate(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        k = np.clip(np.searchsorted(self.xs, x, side="right") - 1, 0, len(self.xs) - 2)
        l = np.clip(np.searchsorted(self.ys, y, side="right") - 1, 0, len(self.ys) - 2)
        a, bx, by, c = self.coefficients()
        u = x - self.xs[k]
        v = y - self.ys[l]
        out = a[k, l] + bx[k, l] * u + by[k, l] * v + c[k, l] * u * v
        return out if np.ndim(out) else float(out)

    def __sub__(self, other):
        return BilinearSheet(self.xs, self.ys, self.V - other.V, self.cell - other.cell)

    def cell_residuals(self):
        """Double difference of ``V`` over each cell minus value x area; zero up to rounding."""
        area = np.diff(self.xs)[:, None] * np.diff(self.ys)[None, :]
        dd = np.diff(np.diff(self.V, axis=0), axis=1)
        return dd - self.cell * area


def integrate_cells(xs, ys, values):
    """Sheet for the step function whose value on cell ``(k, l)`` is ``values[k, l]``."""
    cell = np.asarray(values, dtype=float)[:-1, :-1]
    area = np.diff(xs)[:, None] * np.diff(ys)[None, :]
    V = np.zeros((len(xs), len(ys)))
    V[1:, 1:] = np.cumsum(np.cumsum(cell * area, axis=0), axis=1)
    return BilinearSheet(xs, ys, V, cell)


def _lattice(cdf, grid):
    if grid is None:
        grid = merge_grids(cdf, cdf)
    return grid, *grid.lattice()


def h_surface(cdf, grid=None):
    grid, xs, ys = _lattice(cdf, grid)
    return integrate_cells(xs, ys, cdf.on_lattice(xs, ys))


def l_surface(cdf, grid=None):
    grid, xs, ys = _lattice(cdf, grid)
    return integrate_cells(xs, ys, k_sheet(cdf, grid).K)


def h_marginal_x(cdf):
    """``HX(x) = int_0^x FX`` as a piecewise-linear function."""
    return s_operator(cdf.marginal_x(), 2)


def h_marginal_y(cdf):
    return s_operator(cdf.marginal_y(), 2)


def _pull_inside(fn, point, toward, tol):
    """Move a boundary witness into the open square while the violation persists.

    ``fn`` is continuous, ``fn(point) > tol`` and ``toward`` lies inside the
    square; returns the first point on the segment (halving from ``toward``)
    where ``fn`` still exceeds ``tol``.
    """
    p = np.asarray(point, dtype=float)
    q = np.asarray(toward, dtype=float)
    if np.all((p > 0.0) & (p < 1.0)):
        return p, float(fn(p))
    theta = 1.0
    for _ in range(60):
        r = p + theta * (q - p)
        val = float(fn(r))
        if val > tol and np.all((r > 0.0) & (r < 1.0)):
            return r, val
        theta *= 0.5
    return p, float(fn(p))


def sheet_verdict(diff, family, tol):
    """Verdict for ``diff <= tol`` over the square, ``diff`` a bilinear sheet."""
    V = diff.V
    k = int(np.argmax(V))
    margin = float(V.flat[k])
    holds = margin <= tol
    witness = None
    if not holds:
        i, j = np.unravel_index(k, V.shape)
        ci = min(max(i - 1, 0), len(diff.xs) - 2)
        cj = min(max(j - 1, 0), len(diff.ys) - 2)
        center = (
            0.5 * (diff.xs[ci] + diff.xs[ci + 1]),
            0.5 * (diff.ys[cj] + diff.ys[cj + 1]),
        )
        p, val = _pull_inside(
            lambda r: diff.evaluate(r[0], r[1]), (diff.xs[i], diff.ys[j]), center, tol
        )
        witness = Witness(float(p[0]), float(p[1]), val, family)
    return DominanceVerdict(
        family=family,
        holds=holds,
        margin=margin,
        tolerance=tol,
        witness=witness,
        strict_somewhere=bool(V.min() < -tol),
    )


def _marginal_integral_verdict(m1, m2, family, tol):
    v = sd_check(m1, m2, 2, tol, family=family)
    if v.holds:
        return v
    p1, p2 = s_operator(m1, 2), s_operator(m2, 2)
    z = v.witness.x
    b = np.union1d(p1.breakpoints, p2.breakpoints)
    k = min(max(int(np.searchsorted(b, z, side="left")) - 1, 0), len(b) - 2)
    center = 0.5 * (b[k] + b[k + 1])
    p, val = _pull_inside(lambda r: p1(r[0]) - p2(r[0]), (z,), (center,), tol)
    return DominanceVerdict(
        family=family,
        holds=False,
        margin=v.margin,
        tolerance=tol,
        witness=Witness(float(p[0]), None, val, family),
        strict_somewhere=v.strict_somewhere,
    )


def marginal_integral_verdicts(f1, f2, tol):
    return (
        _marginal_integral_verdict(f1.marginal_x(), f2.marginal_x(), "HX", tol),
        _marginal_integral_verdict(f1.marginal_y(), f2.marginal_y(), "HY", tol),
    )


def check_second_order_submodular(f1, f2, tol=DEFAULT_TOL):
    """``H1X <= H2X``, ``H1Y <= H2Y`` and ``H1 <= H2`` on the closed square."""
    check_same_frame(f1, f2)
    grid = merge_grids(f1, f2)
    hx, hy = marginal_integral_verdicts(f1, f2, tol)
    vh = sheet_verdict(h_surface(f1, grid) - h_surface(f2, grid), "H", tol)
    return combine("second_order_submodular", (hx, hy, vh), tol)


def check_second_order_supermodular(f1, f2, tol=DEFAULT_TOL):
    """``H1X <= H2X``, ``H1Y <= H2Y`` and ``L1 <= L2`` on the closed square."""
    check_same_frame(f1, f2)
    grid = merge_grids(f1, f2)
    hx, hy = marginal_integral_verdicts(f1, f2, tol)
    vl = sheet_verdict(l_surface(f1, grid) - l_surface(f2, grid), "L", tol)
    return combine("second_order_supermodular", (hx, hy, vl), tol)

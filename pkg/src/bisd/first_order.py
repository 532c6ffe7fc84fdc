"""First-order bivariate dominance conditions.

Both conditions are quantified over the closed unit square.  They are
decided on the lattice formed by the union of both grids plus the origin:
a step CDF is constant on every half-open lattice cell
``[xs[k], xs[k+1]) x [ys[l], ys[l+1])``, and so are its marginals and
``K = FX + FY - F``.  The value at the cell's lower-left corner is therefore
the value everywhere in the cell, and a check over the lattice points is a
check over the whole square.

A verdict that holds licenses ``E phi(X1, Y1) >= E phi(X2, Y2)`` for the
matching class of increasing test functions, with ``f1`` the first argument.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distribution import DEFAULT_TOL, check_same_frame, merge_grids
from .verdict import DominanceVerdict, Witness, combine


@dataclass(frozen=True, eq=False)
class KSheet:
    """``K(s, t) = FX(s) + FY(t) - F(s, t)`` at every lattice point."""

    xs: np.ndarray
    ys: np.ndarray
    K: np.ndarray


def k_sheet(cdf, grid=None):
    if grid is None:
        grid = merge_grids(cdf, cdf)
    xs, ys = grid.lattice()
    F = cdf.on_lattice(xs, ys)
    fx = cdf.marginal_x().evaluate(xs)
    fy = cdf.marginal_y().evaluate(ys)
    return KSheet(xs, ys, fx[:, None] + fy[None, :] - F)


def cell_midpoints(coords):
    """A representative point inside each half-open lattice cell.

    The last coordinate (1) is its own degenerate cell.
    """
    mids = np.empty_like(coords)
    mids[:-1] = 0.5 * (coords[:-1] + coords[1:])
    mids[-1] = coords[-1]
    return mids


def step_verdict(diff, xs, ys, family, tol):
    """Verdict for ``diff <= tol`` where ``diff`` is constant on lattice cells.

    ``ys`` is ``None`` for a one-dimensional family.
    """
    k = int(np.argmax(diff))
    margin = float(diff.flat[k])
    holds = margin <= tol
    witness = None
    if not holds:
        if ys is None:
            witness = Witness(float(cell_midpoints(xs)[k]), None, margin, family)
        else:
            i, j = np.unravel_index(k, diff.shape)
            witness = Witness(
                float(cell_midpoints(xs)[i]), float(cell_midpoints(ys)[j]), margin, family
            )
    return DominanceVerdict(
        family=family,
        holds=holds,
        margin=margin,
        tolerance=tol,
        witness=witness,
        strict_somewhere=bool(diff.min() < -tol),
    )


def check_first_order_submodular(f1, f2, tol=DEFAULT_TOL):
    """``F1 <= F2`` everywhere on the square."""
    check_same_frame(f1, f2)
    xs, ys = merge_grids(f1, f2).lattice()
    diff = f1.on_lattice(xs, ys) - f2.on_lattice(xs, ys)
    return step_verdict(diff, xs, ys, "F", tol)


def marginal_verdicts(f1, f2, xs, ys, tol):
    dx = f1.marginal_x().evaluate(xs) - f2.marginal_x().evaluate(xs)
    dy = f1.marginal_y().evaluate(ys) - f2.marginal_y().evaluate(ys)
    return (
        step_verdict(dx, xs, None, "marginal_x", tol),
        step_verdict(dy, ys, None, "marginal_y", tol),
    )


def check_first_order_supermodular(f1, f2, tol=DEFAULT_TOL):
    """``F1X <= F2X``, ``F1Y <= F2Y`` and ``K1 <= K2`` everywhere on the square.

    The families are reported in that order; the first failing one supplies
    the witness.
    """
    check_same_frame(f1, f2)
    grid = merge_grids(f1, f2)
    xs, ys = grid.lattice()
    vx, vy = marginal_verdicts(f1, f2, xs, ys, tol)
    diff = k_sheet(f1, grid).K - k_sheet(f2, grid).K
    vk = step_verdict(diff, xs, ys, "K", tol)
    return combine("first_order_supermodular", (vx, vy, vk), tol)

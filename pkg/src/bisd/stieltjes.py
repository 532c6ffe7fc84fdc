"""Riemann-Stieltjes sums over a step CDF and their rearrangements.

Block convention: with cuts ``0 = x_0 < ... < x_n = 1`` the x-blocks are
``[x_0, x_1]`` and ``(x_{i-1}, x_i]`` for ``i >= 2``; F is taken as zero on
the cut ``x_0`` (the zero boundary) so the first block also collects mass
sitting on the edge ``x = 0``.  Same in y.  Blocks are indexed from 0 here,
block ``i`` spanning cuts ``i`` and ``i + 1``.

Selection points have product form: block ``(i, j)`` is evaluated at
``(sel_x[i], sel_y[j])``.  With the default upper-right selections and cuts
that contain every atom coordinate, a partition sum is the exact expectation.

For an interior cut pair ``(i, j)`` the four-point difference uses the four
blocks that meet at the corner ``(x_i, y_j)``; the identities

    sum = A + B + C + corner                      (interior/border split)
        = -sum K * diff + first-row/col terms + corner   (rearranged form)

hold exactly for every function, distribution and partition, and are what
the tests replay.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distribution import BivariateStepCdf, SampleSet
from .errors import InvalidInputError


def _check_cuts(c, name):
    c = np.asarray(c, dtype=float)
    if c.ndim != 1 or len(c) < 2 or c[0] != 0.0 or c[-1] != 1.0 or np.any(np.diff(c) <= 0):
        raise InvalidInputError(f"{name} must increase strictly from 0 to 1")
    return c


@dataclass(frozen=True, eq=False)
class Partition:
    """Product partition of the unit square with one selection point per block."""

    xcuts: np.ndarray
    ycuts: np.ndarray
    sel_x: np.ndarray
    sel_y: np.ndarray

    def __post_init__(self):
        for cuts, sel, name in ((self.xcuts, self.sel_x, "x"), (self.ycuts, self.sel_y, "y")):
            if len(sel) != len(cuts) - 1:
                raise InvalidInputError(f"need one {name}-selection per block")
            if np.any(sel < cuts[:-1]) or np.any(sel > cuts[1:]):
                raise InvalidInputError(f"{name}-selection outside its block")

    @classmethod
    def from_cuts(cls, xcuts, ycuts=None, sel_x=None, sel_y=None):
        xc = _check_cuts(xcuts, "x-cuts")
        yc = _check_cuts(xcuts if ycuts is None else ycuts, "y-cuts")
        sx = xc[1:].copy() if sel_x is None else np.asarray(sel_x, dtype=float)
        sy = yc[1:].copy() if sel_y is None else np.asarray(sel_y, dtype=float)
        return cls(xc, yc, sx, sy)

    @classmethod
    def uniform(cls, nx, ny=None):
        return cls.from_cuts(np.linspace(0.0, 1.0, nx + 1), np.linspace(0.0, 1.0, (ny or nx) + 1))

    @classmethod
    def random(cls, rng, max_blocks=8, upper_right=False):
        """Random cuts and (unless ``upper_right``) random selection points."""
        def cuts():
            k = int(rng.integers(1, max_blocks + 1))
            return np.concatenate([[0.0], np.sort(rng.uniform(0.0, 1.0, k - 1)), [1.0]])

        xc, yc = cuts(), cuts()
        if upper_right:
            return cls.from_cuts(xc, yc)
        sx = xc[:-1] + rng.uniform(0.0, 1.0, len(xc) - 1) * np.diff(xc)
        sy = yc[:-1] + rng.uniform(0.0, 1.0, len(yc) - 1) * np.diff(yc)
        return cls.from_cuts(xc, yc, np.minimum(sx, xc[1:]), np.minimum(sy, yc[1:]))

    @classmethod
    def atom_aligned(cls, cdf):
        """Cuts at every grid coordinate of ``cdf``, upper-right selections."""
        return cls.from_cuts(np.union1d([0.0], cdf.xs), np.union1d([0.0], cdf.ys))

    @property
    def shape(self):
        return len(self.sel_x), len(self.sel_y)

    def diameter(self):
        return float(np.hypot(np.diff(self.xcuts).max(), np.diff(self.ycuts).max()))


@dataclass(frozen=True)
class SumDecomposition:
    """Interior term ``A``, border terms ``B`` (top row) and ``C`` (right column), corner term."""

    A: float
    B: float
    C: float
    corner: float

    @property
    def total(self):
        return self.A + self.B + self.C + self.corner


def _selected_values(phi, p):
    return np.broadcast_to(phi(p.sel_x[:, None], p.sel_y[None, :]), p.shape).astype(float)


def _cut_cdf(cdf, p):
    Fc = np.array(cdf.on_lattice(p.xcuts, p.ycuts))
    Fc[0, :] = 0.0
    Fc[:, 0] = 0.0
    return Fc


def block_volumes(cdf, p):
    """Quasi-volume of every block; sums to the total mass."""
    return np.diff(np.diff(_cut_cdf(cdf, p), axis=0), axis=1)


def partition_sum(phi, cdf, p):
    return float(np.sum(_selected_values(phi, p) * block_volumes(cdf, p)))


def exact_expectation(phi, dist):
    """``E phi`` for a purely atomic distribution: a weighted sum over atoms."""
    if isinstance(dist, BivariateStepCdf):
        pts, w = dist.atoms, dist.atom_weight
    elif isinstance(dist, SampleSet):
        pts, w = dist.points, dist.weights
    else:
        raise InvalidInputError("expected a SampleSet or BivariateStepCdf")
    vals = np.broadcast_to(phi(pts[:, 0], pts[:, 1]), w.shape)
    return float(np.sum(w * vals))


def _interior_diffs(P):
    """Four-point differences at every interior corner, shape (nx-1, ny-1)."""
    return np.diff(np.diff(P, axis=0), axis=1)


def decompose_sum(phi, cdf, p):
    P = _selected_values(phi, p)
    Fc = _cut_cdf(cdf, p)
    D = _interior_diffs(P)
    A = float(np.sum(Fc[1:-1, 1:-1] * D))
    B = float(np.sum(Fc[1:-1, -1] * -np.diff(P[:, -1])))
    C = float(np.sum(Fc[-1, 1:-1] * -np.diff(P[-1, :])))
    return SumDecomposition(A, B, C, float(P[-1, -1]))


def supermodular_form(phi, cdf, p):
    """The partition sum rewritten with ``K`` in the interior and first-row/column border terms."""
    P = _selected_values(phi, p)
    Fc = _cut_cdf(cdf, p)
    D = _interior_diffs(P)
    K = Fc[1:-1, -1][:, None] + Fc[-1, 1:-1][None, :] - Fc[1:-1, 1:-1]
    return float(
        -np.sum(K * D)
        + np.sum(Fc[1:-1, -1] * -np.diff(P[:, 0]))
        + np.sum(Fc[-1, 1:-1] * -np.diff(P[0, :]))
        + P[-1, -1]
    )


def _phi_at(phi, p, i, j):
    return float(phi(p.sel_x[i], p.sel_y[j]))


def delta_interior(phi, p, i, j):
    """Four-point difference at interior corner ``(x_i, y_j)``, ``1 <= i, j <= n - 1``."""
    nx, ny = p.shape
    if not (1 <= i <= nx - 1 and 1 <= j <= ny - 1):
        raise InvalidInputError(f"corner ({i}, {j}) is not interior")
    return (
        _phi_at(phi, p, i, j) + _phi_at(phi, p, i - 1, j - 1)
        - _phi_at(phi, p, i - 1, j) - _phi_at(phi, p, i, j - 1)
    )


def delta_border_x(phi, p, i, row="last"):
    """Difference across cut ``x_i`` along the top (``row="last"``) or bottom block row."""
    nx, ny = p.shape
    if not 1 <= i <= nx - 1:
        raise InvalidInputError(f"x border index {i} out of range")
    j = ny - 1 if row == "last" else 0
    return _phi_at(phi, p, i - 1, j) - _phi_at(phi, p, i, j)


def delta_border_y(phi, p, j, col="last"):
    """Difference across cut ``y_j`` along the right (``col="last"``) or left block column."""
    nx, ny = p.shape
    if not 1 <= j <= ny - 1:
        raise InvalidInputError(f"y border index {j} out of range")
    i = nx - 1 if col == "last" else 0
    return _phi_at(phi, p, i, j - 1) - _phi_at(phi, p, i, j)


def telescope_check(phi, p, j, axis="y"):
    """Both sides of the telescoping identity for border index ``j``.

    ``axis="y"``: last-column difference across ``y_j`` versus the first-column
    difference minus the sum of interior differences on row ``j``.
    ``axis="x"`` is the transposed identity.
    """
    nx, ny = p.shape
    if axis == "y":
        lhs = delta_border_y(phi, p, j, "last")
        rhs = delta_border_y(phi, p, j, "first") - sum(
            delta_interior(phi, p, i, j) for i in range(1, nx)
        )
    elif axis == "x":
        lhs = delta_border_x(phi, p, j, "last")
        rhs = delta_border_x(phi, p, j, "first") - sum(
            delta_interior(phi, p, j, k) for k in range(1, ny)
        )
    else:
        raise InvalidInputError(f"axis must be 'x' or 'y', got {axis!r}")
    return lhs, rhs


def refinement_errors(phi, cdf, levels=6):
    """``|partition sum - E phi|`` on uniform partitions of side ``2**-k``, ``k = 1..levels``."""
    exact = exact_expectation(phi, cdf)
    return [
        abs(partition_sum(phi, cdf, Partition.uniform(2**k)) - exact)
        for k in range(1, levels + 1)
    ]

"""Discrete bivariate distributions as right-continuous step CDFs.

Every distribution is mapped into the unit square through a :class:`CommonFrame`
shared by all distributions that will be compared.  Inside the square a
distribution is stored on the grid of its own atom coordinates (plus the
closing coordinate 1): ``F[i, j] = P(X <= xs[i], Y <= ys[j])``.

Conventions
-----------
* ``F`` is right-continuous.  Grid index ``-1`` stands for the zero boundary
  below the square, so the block ``(xs[i-1], xs[i]]`` of index ``i = 0``
  includes the left edge ``x = 0``.
* Every array attached to a value is made read-only; values never change
  after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FrameMismatchError, InvalidInputError

DEFAULT_TOL = 1e-9
WEIGHT_SUM_TOL = 1e-12


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Weighted point cloud in source units.

    Use :meth:`from_points` to build one; it validates and normalizes the
    weights.  ``size`` is the number of observations behind the set, which
    is what a bootstrap resample reproduces.
    """

    points: np.ndarray
    weights: np.ndarray
    size: int

    @classmethod
    def from_points(cls, points, weights=None, size=None):
        pts = np.asarray(points, dtype=float)
        if pts.size == 0:
            raise InvalidInputError("sample set is empty")
        pts = pts.reshape(-1, 2)
        if not np.all(np.isfinite(pts)):
            raise InvalidInputError("sample points must be finite")
        if weights is None:
            w = np.ones(len(pts))
        else:
            w = np.asarray(weights, dtype=float).reshape(-1)
        if len(w) != len(pts):
            raise InvalidInputError(
                f"{len(pts)} points but {len(w)} weights"
            )
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise InvalidInputError("weights must be finite and nonnegative")
        total = w.sum()
        if not total > 0:
            raise InvalidInputError("at least one weight must be positive")
        return cls(_frozen(pts), _frozen(w / total), int(size or len(pts)))

    def __len__(self):
        return len(self.points)

    def merged(self):
        """Return the set with duplicate points merged and zero weights dropped.

        Points come back in lexicographic (x, y) order.
        """
        keep = self.weights > 0
        uniq, inverse = np.unique(self.points[keep], axis=0, return_inverse=True)
        w = np.zeros(len(uniq))
        np.add.at(w, inverse.reshape(-1), self.weights[keep])
        return SampleSet(_frozen(uniq), _frozen(w / w.sum()), self.size)


@dataclass(frozen=True)
class CommonFrame:
    """Axis-aligned box mapped affinely onto the unit square."""

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def __post_init__(self):
        if not (self.x_lo < self.x_hi and self.y_lo < self.y_hi):
            raise InvalidInputError(f"degenerate frame {self}")

    def to_unit(self, points):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        u = (pts[:, 0] - self.x_lo) / (self.x_hi - self.x_lo)
        v = (pts[:, 1] - self.y_lo) / (self.y_hi - self.y_lo)
        return np.column_stack([u, v])

    def from_unit(self, points):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        x = self.x_lo + pts[:, 0] * (self.x_hi - self.x_lo)
        y = self.y_lo + pts[:, 1] * (self.y_hi - self.y_lo)
        return np.column_stack([x, y])

    def contains(self, points):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return bool(
            np.all((pts[:, 0] >= self.x_lo) & (pts[:, 0] <= self.x_hi))
            and np.all((pts[:, 1] >= self.y_lo) & (pts[:, 1] <= self.y_hi))
        )

    def as_dict(self):
        return {"x_lo": self.x_lo, "x_hi": self.x_hi, "y_lo": self.y_lo, "y_hi": self.y_hi}


UNIT_FRAME = CommonFrame(0.0, 1.0, 0.0, 1.0)


def _axis_range(values):
    lo, hi = float(values.min()), float(values.max())
    if lo >= 0.0 and hi <= 1.0:
        # already normalized: keep the identity map on this axis
        return 0.0, 1.0
    if lo == hi:
        pad = max(1.0, abs(lo))
        return lo - pad, hi + pad
    return lo, hi


def build_common_frame(a, b=None):
    """Joint bounding box of one or two sample sets.

    An axis whose coordinates already lie in [0, 1] keeps the identity map.
    A constant axis is widened by ``max(1, |value|)`` on each side.
    """
    sets = [a] if b is None else [a, b]
    for s in sets:
        if s is None or len(s) == 0:
            raise InvalidInputError("sample set is empty")
    pts = np.vstack([s.points for s in sets])
    x_lo, x_hi = _axis_range(pts[:, 0])
    y_lo, y_hi = _axis_range(pts[:, 1])
    return CommonFrame(x_lo, x_hi, y_lo, y_hi)


@dataclass(frozen=True, eq=False)
class StepCdf:
    """Univariate right-continuous step CDF on [0, 1].

    ``values[k]`` is the CDF at ``xs[k]``; ``xs`` is strictly increasing and
    ends at 1.  ``axis`` optionally records the source-unit interval the
    unit axis was mapped from.
    """

    xs: np.ndarray
    values: np.ndarray
    axis: tuple | None = None

    @classmethod
    def from_atoms(cls, coords, weights, axis=None):
        c = np.asarray(coords, dtype=float).reshape(-1)
        w = np.asarray(weights, dtype=float).reshape(-1)
        if len(c) == 0 or np.any(c < 0) or np.any(c > 1):
            raise InvalidInputError("atoms must lie in [0, 1]")
        if np.any(w < 0) or not w.sum() > 0:
            raise InvalidInputError("weights must be nonnegative with positive sum")
        xs = np.union1d(c, [1.0])
        mass = np.zeros(len(xs))
        np.add.at(mass, np.searchsorted(xs, c), w / w.sum())
        return cls(_frozen(xs), _frozen(np.cumsum(mass)), axis)

    def evaluate(self, z):
        z = np.asarray(z, dtype=float)
        k = np.searchsorted(self.xs, z, side="right") - 1
        out = np.where(k >= 0, self.values[np.clip(k, 0, None)], 0.0)
        return out if out.ndim else float(out)

    def __call__(self, z):
        return self.evaluate(z)


@dataclass(frozen=True, eq=False)
class BivariateStepCdf:
    """Step CDF of a purely atomic distribution on the unit square.

    Attributes
    ----------
    xs, ys : sorted distinct grid coordinates, each ending at 1.
    F : ``F[i, j] = P(X <= xs[i], Y <= ys[j])``.
    FX, FY : marginal CDFs at ``xs`` and ``ys``; equal to the last column
        and last row of ``F``.
    atom_index : (n, 2) grid indices of the atoms.
    atom_weight : (n,) atom probabilities.
    frame : the frame the source points were mapped through.
    """

    xs: np.ndarray
    ys: np.ndarray
    F: np.ndarray
    FX: np.ndarray
    FY: np.ndarray
    atom_index: np.ndarray
    atom_weight: np.ndarray
    frame: CommonFrame
    _padded: np.ndarray = field(repr=False, default=None)

    @property
    def atoms(self):
        """Atom coordinates in the unit square, shape (n, 2)."""
        return np.column_stack(
            [self.xs[self.atom_index[:, 0]], self.ys[self.atom_index[:, 1]]]
        )

    def _fpad(self):
        if self._padded is None:
            p = np.zeros((len(self.xs) + 1, len(self.ys) + 1))
            p[1:, 1:] = self.F
            p.setflags(write=False)
            object.__setattr__(self, "_padded", p)
        return self._padded

    def floor_x(self, s):
        """Index of the largest grid x <= s, or -1."""
        return np.searchsorted(self.xs, s, side="right") - 1

    def floor_y(self, t):
        return np.searchsorted(self.ys, t, side="right") - 1

    def evaluate(self, s, t):
        """Vectorized right-continuous evaluation (no domain check)."""
        i = self.floor_x(np.asarray(s, dtype=float))
        j = self.floor_y(np.asarray(t, dtype=float))
        out = self._fpad()[i + 1, j + 1]
        return out if np.ndim(out) else float(out)

    def on_lattice(self, xq, yq):
        """Matrix ``F(xq[a], yq[b])`` for two coordinate vectors."""
        i = self.floor_x(np.asarray(xq, dtype=float))
        j = self.floor_y(np.asarray(yq, dtype=float))
        return self._fpad()[np.ix_(i + 1, j + 1)]

    def marginal_x(self):
        return StepCdf(self.xs, self.FX, (self.frame.x_lo, self.frame.x_hi))

    def marginal_y(self):
        return StepCdf(self.ys, self.FY, (self.frame.y_lo, self.frame.y_hi))

    def block_masses(self):
        """Mass of every elementary block ``(xs[i-1], xs[i]] x (ys[j-1], ys[j]]``."""
        p = self._fpad()
        return np.diff(np.diff(p, axis=0), axis=1)


def build_cdf(s, frame=None):
    """Build the step CDF of ``s`` after mapping it through ``frame``."""
    if frame is None:
        frame = build_common_frame(s)
    if not frame.contains(s.points):
        raise InvalidInputError("sample point outside the frame")
    unit = np.clip(frame.to_unit(s.points), 0.0, 1.0)
    m = SampleSet.from_points(unit, s.weights, s.size).merged()
    xs = np.union1d(m.points[:, 0], [1.0])
    ys = np.union1d(m.points[:, 1], [1.0])
    ai = np.searchsorted(xs, m.points[:, 0])
    aj = np.searchsorted(ys, m.points[:, 1])
    mass = np.zeros((len(xs), len(ys)))
    np.add.at(mass, (ai, aj), m.weights)
    F = np.cumsum(np.cumsum(mass, axis=0), axis=1)
    return BivariateStepCdf(
        xs=_frozen(xs),
        ys=_frozen(ys),
        F=_frozen(F),
        FX=_frozen(F[:, -1]),
        FY=_frozen(F[-1, :]),
        atom_index=_frozen(np.column_stack([ai, aj]), dtype=int),
        atom_weight=_frozen(m.weights),
        frame=frame,
    )


def build_pair(a, b):
    """Map two sample sets through their common frame and build both CDFs."""
    frame = build_common_frame(a, b)
    return build_cdf(a, frame), build_cdf(b, frame)


def cdf_from_atoms(atoms, weights=None):
    """Convenience constructor for atoms already inside the unit square."""
    return build_cdf(SampleSet.from_points(atoms, weights), UNIT_FRAME)


def eval_cdf(cdf, s, t):
    """F(s, t) at a single point of the unit square."""
    if not (0.0 <= s <= 1.0 and 0.0 <= t <= 1.0):
        raise InvalidInputError(f"point ({s}, {t}) outside [0, 1]^2")
    return float(cdf.evaluate(s, t))


def quasi_volume(cdf, i_lo, i_hi, j_lo, j_hi):
    """Double difference of F over the grid block ``(xs[i_lo], xs[i_hi]] x (ys[j_lo], ys[j_hi]]``.

    Index -1 denotes the zero boundary.  The result is the atom mass inside
    the half-open block.
    """
    m, n = cdf.F.shape
    if not (-1 <= i_lo < i_hi < m and -1 <= j_lo < j_hi < n):
        raise InvalidInputError(
            f"invalid block indices ({i_lo}, {i_hi}) x ({j_lo}, {j_hi})"
        )
    p = cdf._fpad()
    return float(
        p[i_hi + 1, j_hi + 1] + p[i_lo + 1, j_lo + 1]
        - p[i_hi + 1, j_lo + 1] - p[i_lo + 1, j_hi + 1]
    )


def marginal_x(cdf):
    return cdf.marginal_x()


def marginal_y(cdf):
    return cdf.marginal_y()


@dataclass(frozen=True, eq=False)
class MergedGrid:
    """Union of the coordinate sets of two step CDFs.

    ``a_x[i]`` is the position of ``a.xs[i]`` inside ``xs`` (likewise for the
    other maps), so ``xs[a_x]`` reproduces ``a.xs``.
    """

    xs: np.ndarray
    ys: np.ndarray
    a_x: np.ndarray
    a_y: np.ndarray
    b_x: np.ndarray
    b_y: np.ndarray

    def lattice(self):
        """Grid coordinates with the origin added: the evaluation lattice.

        Both step CDFs are constant on every half-open cell of this lattice.
        """
        return np.union1d(self.xs, [0.0]), np.union1d(self.ys, [0.0])


def check_same_frame(a, b):
    if a.frame != b.frame:
        raise FrameMismatchError(f"frames differ: {a.frame} vs {b.frame}")


def merge_grids(a, b):
    xs = np.union1d(a.xs, b.xs)
    ys = np.union1d(a.ys, b.ys)
    return MergedGrid(
        xs=_frozen(xs),
        ys=_frozen(ys),
        a_x=_frozen(np.searchsorted(xs, a.xs), dtype=int),
        a_y=_frozen(np.searchsorted(ys, a.ys), dtype=int),
        b_x=_frozen(np.searchsorted(xs, b.xs), dtype=int),
        b_y=_frozen(np.searchsorted(ys, b.ys), dtype=int),
    )

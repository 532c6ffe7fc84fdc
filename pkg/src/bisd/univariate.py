"""Univariate dominance operators on step CDFs.

``s_operator(f, 1)`` is the step CDF itself; each further order is the exact
antiderivative from 0 of the previous one, held as a piecewise polynomial
over the CDF's breakpoints.  ``sd_check`` compares two such functions over
the whole of [0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .distribution import DEFAULT_TOL, StepCdf
from .errors import FrameMismatchError, InvalidInputError
from .verdict import DominanceVerdict, Witness

DEFAULT_MAX_DEGREE = 4
SAMPLES_PER_PIECE = 64


@dataclass(frozen=True, eq=False)
class PiecewisePolynomial:
    """Piecewise polynomial on [0, 1].

    Piece ``k`` covers ``[breakpoints[k], breakpoints[k+1])`` and is
    ``sum(coeffs[k, m] * (z - breakpoints[k]) ** m)``.  Evaluation is
    right-continuous; ``terminal`` is the value at ``z = 1``, which differs
    from the last piece's limit when a step function jumps at 1.
    """

    breakpoints: np.ndarray
    coeffs: np.ndarray
    terminal: float
    continuous: bool
    max_degree: int = DEFAULT_MAX_DEGREE

    def __post_init__(self):
        b = self.breakpoints
        if b[0] != 0.0 or b[-1] != 1.0 or np.any(np.diff(b) <= 0):
            raise InvalidInputError("breakpoints must increase strictly from 0 to 1")
        if self.coeffs.shape[0] != len(b) - 1:
            raise InvalidInputError("one coefficient row per piece")
        if self.degree > self.max_degree:
            raise InvalidInputError(
                f"degree {self.degree} exceeds the configured maximum {self.max_degree}"
            )

    @property
    def degree(self):
        return self.coeffs.shape[1] - 1

    def piece_index(self, z):
        k = np.searchsorted(self.breakpoints, z, side="right") - 1
        return np.clip(k, 0, len(self.breakpoints) - 2)

    def evaluate(self, z):
        z = np.asarray(z, dtype=float)
        k = self.piece_index(z)
        t = z - self.breakpoints[k]
        c = self.coeffs[k]
        out = np.zeros_like(t)
        for m in range(self.coeffs.shape[1] - 1, -1, -1):
            out = out * t + c[..., m]
        out = np.where(z >= 1.0, self.terminal, out)
        return out if out.ndim else float(out)

    def __call__(self, z):
        return self.evaluate(z)

    def local_coeffs(self, u):
        """Coefficients of the piece containing ``u``, re-expanded about ``u``."""
        k = int(self.piece_index(u))
        return taylor_shift(self.coeffs[k], u - self.breakpoints[k])

    def antiderivative(self):
        """Exact antiderivative vanishing at 0."""
        c = self.coeffs
        n_pieces, width = c.shape
        lengths = np.diff(self.breakpoints)
        powers = np.arange(1, width + 1)
        integ = c / powers
        piece_totals = (integ * lengths[:, None] ** powers).sum(axis=1)
        start = np.concatenate([[0.0], np.cumsum(piece_totals)])
        out = np.zeros((n_pieces, width + 1))
        out[:, 0] = start[:-1]
        out[:, 1:] = integ
        return PiecewisePolynomial(
            self.breakpoints, out, float(start[-1]), True, self.max_degree
        )


def taylor_shift(c, delta):
    """Coefficients of ``p(t + delta)`` given ascending coefficients of ``p``."""
    n = len(c)
    out = np.zeros(n)
    for k in range(n):
        out[k] = sum(c[m] * comb(m, k) * delta ** (m - k) for m in range(k, n))
    return out


def step_polynomial(f, max_degree=DEFAULT_MAX_DEGREE):
    """The step CDF ``f`` as a degree-0 piecewise polynomial."""
    b = np.union1d([0.0], f.xs)
    values = f.evaluate(b[:-1])
    return PiecewisePolynomial(
        b, values.reshape(-1, 1), float(f.evaluate(1.0)), False, max_degree
    )


def s_operator(f, j, max_degree=DEFAULT_MAX_DEGREE):
    """Order-``j`` integrated CDF: ``j = 1`` is ``f``, each further order integrates from 0."""
    if int(j) != j or j < 1:
        raise InvalidInputError(f"order must be a positive integer, got {j}")
    if j - 1 > max_degree:
        raise InvalidInputError(f"order {j} needs degree {j - 1} > {max_degree}")
    p = step_polynomial(f, max_degree)
    for _ in range(int(j) - 1):
        p = p.antiderivative()
    return p


def _piece_extrema(d, length, exact):
    """Candidate points (local coordinates) for the extrema of ``d`` on ``[0, length]``."""
    deg = len(d) - 1
    while deg > 0 and d[deg] == 0.0:
        deg -= 1
    if deg == 0:
        return np.array([0.0])
    cands = [0.0, length]
    if exact:
        if deg == 2:
            t = -d[1] / (2.0 * d[2])
            if 0.0 < t < length:
                cands.append(t)
    else:
        cands.extend(np.linspace(0.0, length, SAMPLES_PER_PIECE + 2)[1:-1])
    return np.array(cands)


def sd_check(f, g, j, tol=DEFAULT_TOL, max_degree=DEFAULT_MAX_DEGREE, family=None):
    """Order-``j`` dominance of ``f`` over ``g``: ``S_j(z, f) <= S_j(z, g) + tol`` on [0, 1].

    For ``j <= 3`` the difference is at most quadratic per piece and its
    supremum is located exactly; above that it is sampled at
    ``SAMPLES_PER_PIECE`` interior points per piece and the verdict is
    marked approximate.
    """
    if f.axis is not None and g.axis is not None and f.axis != g.axis:
        raise FrameMismatchError(f"axes differ: {f.axis} vs {g.axis}")
    pf = s_operator(f, j, max_degree)
    pg = s_operator(g, j, max_degree)
    return compare_polynomials(pf, pg, tol, family or f"SD{j}", exact=j <= 3)


def compare_polynomials(pf, pg, tol, family, exact=True):
    """Supremum and infimum of ``pf - pg`` over [0, 1]."""
    b = np.union1d(pf.breakpoints, pg.breakpoints)
    best_z, best = 1.0, pf.terminal - pg.terminal
    lowest = best
    for k in range(len(b) - 1):
        u, v = b[k], b[k + 1]
        d = pf.local_coeffs(u) - pg.local_coeffs(u)
        if pf.continuous and pg.continuous:
            ts = _piece_extrema(d, v - u, exact)
        else:
            ts = np.array([0.0])
        vals = np.polynomial.polynomial.polyval(ts, d)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, best_z = float(vals[i]), float(u + ts[i])
        lowest = min(lowest, float(vals.min()))
    holds = best <= tol
    return DominanceVerdict(
        family=family,
        holds=holds,
        margin=best,
        tolerance=tol,
        witness=None if holds else Witness(best_z, None, best, family),
        strict_somewhere=lowest < -tol,
        approximate=not exact,
    )


def sd_hierarchy(f, g, orders=(1, 2, 3), tol=DEFAULT_TOL):
    """Verdicts for several orders at once, keyed by order."""
    return {j: sd_check(f, g, j, tol) for j in orders}


def step_cdf(coords, weights=None):
    """Shorthand for a univariate step CDF from atoms in [0, 1]."""
    w = np.ones(len(np.atleast_1d(coords))) if weights is None else weights
    return StepCdf.from_atoms(coords, w)

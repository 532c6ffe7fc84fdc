"""Bootstrap p-values for the sup statistics behind each condition family.

For a family with pointwise inequality ``lhs <= rhs`` the statistic is
``T = max(lhs - rhs)`` over the merged grid, which is exactly the ``margin``
of the family's verdict.  Each replicate resamples both sample sets with
replacement at their observation counts, keeps the observed frame, and
records the recentred value ``T* - T``.  The p-value against the null of
dominance is ``(1 + #{T* - T >= T}) / (B + 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distribution import DEFAULT_TOL, SampleSet, build_cdf
from .errors import InvalidInputError
from .first_order import check_first_order_submodular, check_first_order_supermodular
from .second_order import check_second_order_submodular, check_second_order_supermodular
from .univariate import sd_check

CHECKERS = {
    (1, "sub"): ("first_order_submodular", check_first_order_submodular),
    (1, "super"): ("first_order_supermodular", check_first_order_supermodular),
    (2, "sub"): ("second_order_submodular", check_second_order_submodular),
    (2, "super"): ("second_order_supermodular", check_second_order_supermodular),
}


def selected_checks(order, cls):
    """``(conclusion, checker)`` pairs for an order and class choice (``"both"`` allowed)."""
    classes = ("sub", "super") if cls == "both" else (cls,)
    try:
        return [CHECKERS[(order, c)] for c in classes]
    except KeyError:
        raise InvalidInputError(f"no checker for order {order!r}, class {cls!r}") from None


def univariate_checks(j):
    """Checks of order ``j`` on each marginal, in the same ``(name, checker)`` form."""
    if j < 1:
        raise InvalidInputError("univariate order must be at least 1")

    def axis_check(axis):
        def run(f1, f2, tol=DEFAULT_TOL):
            pick = (lambda c: c.marginal_x()) if axis == "x" else (lambda c: c.marginal_y())
            return sd_check(
                pick(f1), pick(f2), j, tol, max_degree=max(4, j), family=f"S{j}_{axis}"
            )

        return run

    return [(f"univariate_sd{j}_{a}", axis_check(a)) for a in ("x", "y")]


def family_verdicts(verdict):
    """Per-family verdicts of a checker result."""
    return list(verdict.parts) if verdict.parts else [verdict]


def family_statistics(f1, f2, checks, tol=DEFAULT_TOL):
    """``{family: T}`` over every family used by ``checks``."""
    out = {}
    for _, checker in checks:
        for v in family_verdicts(checker(f1, f2, tol)):
            out.setdefault(v.family, v.margin)
    return out


def resample(s, rng):
    """Draw ``s.size`` observations with replacement from ``s``."""
    counts = rng.multinomial(s.size, s.weights)
    keep = counts > 0
    return SampleSet.from_points(s.points[keep], counts[keep], s.size)


@dataclass(frozen=True)
class PValue:
    family: str
    p: float
    B: int

    def to_dict(self):
        return {"family": self.family, "p": self.p, "B": self.B}


def bootstrap_pvalues(a, b, frame, checks, replicates, seed=0, tol=DEFAULT_TOL):
    """One :class:`PValue` per family, in the order the checks report them."""
    if replicates < 1:
        raise InvalidInputError("bootstrap needs at least one replicate")
    observed = family_statistics(build_cdf(a, frame), build_cdf(b, frame), checks, tol)
    exceed = dict.fromkeys(observed, 0)
    rng = np.random.default_rng(seed)
    for _ in range(replicates):
        fa = build_cdf(resample(a, rng), frame)
        fb = build_cdf(resample(b, rng), frame)
        star = family_statistics(fa, fb, checks, tol)
        for fam, t in observed.items():
            if star[fam] - t >= t:
                exceed[fam] += 1
    return [PValue(fam, (1 + exceed[fam]) / (replicates + 1), replicates) for fam in observed]

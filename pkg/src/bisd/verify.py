"""Randomized campaigns checking that the dominance conditions order expectations.

A campaign repeatedly builds a pair ``(f1, f2)`` with a generator that is
designed to satisfy one set of conditions, confirms the conditions with the
matching checker, and then compares ``E phi`` under both distributions for
test functions drawn from the matching class.  Every comparison where
``E1 < E2 - tol`` is a violation; the expected count is zero.

Trial ``k`` of a campaign with seed ``s`` draws all its randomness from
``SeedSequence([s, k])``, so trials are independent of execution order and
any violation can be replayed from ``(s, k)`` alone.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from .distribution import UNIT_FRAME, SampleSet, build_cdf, cdf_from_atoms
from .errors import InvalidInputError
from .first_order import check_first_order_submodular, check_first_order_supermodular
from .second_order import check_second_order_submodular, check_second_order_supermodular
from .stieltjes import exact_expectation
from .testfuncs import cobb_douglas, cone_combine, modular_complement, neg_complement_power

DEFAULT_TOL = 1e-9

# condition checker and the class of test functions it licenses
CONDITIONS = {
    "first-sub": (check_first_order_submodular, "M-"),
    "first-super": (check_first_order_supermodular, "M+"),
    "second-sub": (check_second_order_submodular, "M--"),
    "second-super": (check_second_order_supermodular, "M++"),
}
DEFAULT_GENERATOR = {
    "first-sub": "monotone_shift",
    "first-super": "et_swap",
    "second-sub": "mean_spread",
    "second-super": "mean_spread",
}
GENERATORS = ("monotone_shift", "et_swap", "mean_spread", "unconstrained")


def gen_random_sampleset(seed, n_atoms):
    """``n_atoms`` uniform points in the unit square with random positive weights."""
    if n_atoms < 1:
        raise InvalidInputError("n_atoms must be at least 1")
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.0, 1.0, size=(n_atoms, 2))
    w = 1.0 - rng.random(n_atoms)  # in (0, 1]
    return SampleSet.from_points(pts, w)


def monotone_shift(s, seed, max_step=0.3):
    """Move every atom up and right by independent random amounts, clamped at 1.

    The shifted distribution has a pointwise smaller CDF.
    """
    rng = np.random.default_rng(seed)
    inc = rng.uniform(0.0, max_step, size=s.points.shape)
    return SampleSet.from_points(np.minimum(s.points + inc, 1.0), s.weights, s.size)


def et_swap(s, seed, eps, count=1):
    """Apply ``count`` correlation-increasing transfers of mass ``eps``.

    Each transfer picks atoms ``(a, d)`` and ``(b, c)`` with ``a < b``,
    ``c < d`` and weight at least ``eps``, and moves ``eps`` from each of them
    to ``(a, c)`` and ``(b, d)``.  Marginals are unchanged and the CDF can
    only grow.  Returns ``(new_set, transfers_done)``; when no pair is
    eligible the input comes back unchanged with ``transfers_done == 0``.
    """
    if eps <= 0:
        raise InvalidInputError("eps must be positive")
    rng = np.random.default_rng(seed)
    m = s.merged()
    mass = {(float(x), float(y)): float(w) for (x, y), w in zip(m.points, m.weights)}
    done = 0
    for _ in range(count):
        keys = sorted(k for k, w in mass.items() if w >= eps - 1e-15)
        pairs = [
            (p, q) for p in keys for q in keys if p[0] < q[0] and p[1] > q[1]
        ]
        if not pairs:
            break
        (a, d), (b, c) = pairs[int(rng.integers(len(pairs)))]
        for key, delta in (((a, d), -eps), ((b, c), -eps), ((a, c), eps), ((b, d), eps)):
            w = mass.get(key, 0.0) + delta
            if w <= 1e-15:
                mass.pop(key, None)
            else:
                mass[key] = w
        done += 1
    if done == 0:
        return s, 0
    keys = sorted(mass)
    return SampleSet.from_points(keys, [mass[k] for k in keys], s.size), done


def mean_spread(s, seed, max_fraction=1.0):
    """Split every atom into four by independent zero-mean spreads in x and y.

    Each coordinate moves by ``+-d`` with equal probability, ``d`` at most
    ``max_fraction`` of the distance to the nearer edge, so the support stays
    in the unit square.  Integrated CDFs of the result dominate the input's.
    """
    rng = np.random.default_rng(seed)
    x, y = s.points[:, 0], s.points[:, 1]
    dx = rng.uniform(0.0, max_fraction, len(x)) * np.minimum(x, 1.0 - x)
    dy = rng.uniform(0.0, max_fraction, len(y)) * np.minimum(y, 1.0 - y)
    pts, ws = [], []
    for sx in (-1.0, 1.0):
        for sy in (-1.0, 1.0):
            pts.append(np.column_stack([x + sx * dx, y + sy * dy]))
            ws.append(s.weights / 4.0)
    pts = np.clip(np.vstack(pts), 0.0, 1.0)
    return SampleSet.from_points(pts, np.concatenate(ws), s.size).merged()


def sample_phi(rng, tag):
    """A random test function from the family matching ``tag``; sometimes a two-term cone combination."""

    def one():
        if tag in ("M+", "M++"):
            return cobb_douglas(rng.uniform(0.05, 1.0), rng.uniform(0.05, 1.0))
        if tag == "M--" or rng.random() < 0.5:
            return neg_complement_power(rng.uniform(1.0, 4.0), rng.uniform(1.0, 4.0))
        return modular_complement(rng.uniform(0.0, 1.0))

    f = one()
    if rng.random() < 0.3:
        g = one()
        if g.tag == f.tag:
            w = rng.uniform(0.0, 1.0, 2) + 1e-3
            f = cone_combine([f, g], w)
    return f


@dataclass(frozen=True)
class CampaignConfig:
    conditions: str = "first-sub"
    generator: str | None = None
    seed: int = 0
    trials: int = 200
    atoms: tuple = (1, 8)
    phis_per_trial: int = 20
    tolerance: float = DEFAULT_TOL
    workers: int = 1

    def __post_init__(self):
        if self.conditions not in CONDITIONS:
            raise InvalidInputError(
                f"unknown conditions {self.conditions!r}; choose from {sorted(CONDITIONS)}"
            )
        if self.generator is not None and self.generator not in GENERATORS:
            raise InvalidInputError(f"unknown generator {self.generator!r}")
        if self.trials < 0:
            raise InvalidInputError("trials must be nonnegative")
        lo, hi = self.atoms
        if not 1 <= lo <= hi:
            raise InvalidInputError("atom counts must satisfy 1 <= min <= max")
        if not self.tolerance > 0:
            raise InvalidInputError("tolerance must be positive")

    @property
    def generator_name(self):
        return self.generator or DEFAULT_GENERATOR[self.conditions]


@dataclass(frozen=True)
class CampaignReport:
    conditions: str
    generator: str
    seed: int
    trials: int
    satisfied: int
    comparisons: int
    min_margin: float | None
    violations: tuple = field(default=())

    @property
    def clean(self):
        return not self.violations

    def to_dict(self):
        d = asdict(self)
        d["violations"] = list(self.violations)
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["violations"] = tuple(d.get("violations", ()))
        return cls(**d)


def _atoms_list(cdf):
    return [[float(x), float(y), float(w)] for (x, y), w in zip(cdf.atoms, cdf.atom_weight)]


def make_pair(generator, rng, n_atoms):
    """Draw a ``(dominating, dominated)`` pair of sample sets."""
    base = gen_random_sampleset(rng.integers(2**63), n_atoms)
    if generator == "monotone_shift":
        return monotone_shift(base, rng.integers(2**63)), base
    if generator == "et_swap":
        eps = rng.uniform(0.1, 0.5) * float(base.weights.min())
        swapped, _ = et_swap(base, rng.integers(2**63), eps, int(rng.integers(1, 4)))
        return swapped, base
    if generator == "mean_spread":
        return base, mean_spread(base, rng.integers(2**63))
    if generator == "unconstrained":
        return base, gen_random_sampleset(rng.integers(2**63), n_atoms)
    raise InvalidInputError(f"unknown generator {generator!r}")


def run_trial(cfg, k):
    """One trial; returns ``(satisfied, comparisons, min_margin, violations)``."""
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, k]))
    lo, hi = cfg.atoms
    a, b = make_pair(cfg.generator_name, rng, int(rng.integers(lo, hi + 1)))
    f1, f2 = build_cdf(a, UNIT_FRAME), build_cdf(b, UNIT_FRAME)
    checker, tag = CONDITIONS[cfg.conditions]
    if not checker(f1, f2, cfg.tolerance).holds:
        return False, 0, None, []
    margins, violations = [], []
    for _ in range(cfg.phis_per_trial):
        phi = sample_phi(rng, tag)
        e1, e2 = exact_expectation(phi, f1), exact_expectation(phi, f2)
        margins.append(e1 - e2)
        if e1 < e2 - cfg.tolerance:
            violations.append(
                {
                    "trial": k,
                    "seed": [cfg.seed, k],
                    "phi": phi.descriptor,
                    "e1": e1,
                    "e2": e2,
                    "f1_atoms": _atoms_list(f1),
                    "f2_atoms": _atoms_list(f2),
                }
            )
    return True, len(margins), (min(margins) if margins else None), violations


def run_campaign(cfg):
    if cfg.workers > 1 and cfg.trials > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(run_trial, [cfg] * cfg.trials, range(cfg.trials)))
    else:
        results = [run_trial(cfg, k) for k in range(cfg.trials)]
    margins = [r[2] for r in results if r[2] is not None]
    return CampaignReport(
        conditions=cfg.conditions,
        generator=cfg.generator_name,
        seed=cfg.seed,
        trials=cfg.trials,
        satisfied=sum(r[0] for r in results),
        comparisons=sum(r[1] for r in results),
        min_margin=min(margins) if margins else None,
        violations=tuple(v for r in results for v in r[3]),
    )


class Counterexample(NamedTuple):
    f1: object
    f2: object
    phi: object
    e1: float
    e2: float


def boundary_counterexample():
    """Pair with ``F1 <= F2`` everywhere whose order flips for the supermodular ``phi = xy``.

    ``f1`` puts half its mass on each of (1, 0) and (0, 1), ``f2`` on (0, 0)
    and (1, 1).  The submodular conclusion holds for this pair, yet
    ``E1[xy] = 0 < 0.5 = E2[xy]``: the supermodular conditions catch it on
    the ``K`` family.
    """
    f1 = cdf_from_atoms([(1.0, 0.0), (0.0, 1.0)], [0.5, 0.5])
    f2 = cdf_from_atoms([(0.0, 0.0), (1.0, 1.0)], [0.5, 0.5])
    phi = cobb_douglas(1.0, 1.0)
    return Counterexample(f1, f2, phi, exact_expectation(phi, f1), exact_expectation(phi, f2))

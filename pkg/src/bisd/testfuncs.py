"""Bivariate test functions with closed-form partial derivatives.

Each :class:`TestFunction` carries its evaluator, every partial derivative up
to total order 4, and a declared modularity class:

======  =====================================================================
M-      mixed second partial <= 0 (submodular)
M+      mixed second partial >= 0 (supermodular)
M--     M- and f_xx, f_yy <= 0, f_xxy, f_xyy >= 0, f_xxyy <= 0
M++     M+ and f_xx, f_yy <= 0, f_xxy, f_xyy <= 0, f_xxyy >= 0
======  =====================================================================

Evaluators use only arithmetic operators so they accept floats, numpy arrays
and ``mpmath`` numbers alike; :func:`classify` relies on the latter to take
fourth-order finite differences without drowning in rounding error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable

import mpmath
import numpy as np

from .errors import InvalidInputError

TAGS = ("M-", "M+", "M--", "M++", "none")
MULTI_INDICES = tuple((m, k - m) for k in range(5) for m in range(k, -1, -1))
SIGN_TOL = 1e-7


def _zero(x, y):
    return 0.0 * x * y


def _fmt(v):
    """Shortest exact text for a parameter, so descriptors rebuild the same function."""
    text = repr(float(v))
    return text[:-2] if text.endswith(".0") else text


def falling(a, m):
    out = 1.0
    for r in range(m):
        out *= a - r
    return out


@dataclass(frozen=True, eq=False)
class TestFunction:
    """Evaluable bivariate function on the unit square.

    ``partials[(m, n)]`` evaluates the derivative taken ``m`` times in x and
    ``n`` times in y; ``(0, 0)`` is the function itself.  ``classes`` lists
    every class the function belongs to, ``tag`` the most specific one.
    """

    __test__ = False  # not a pytest class

    descriptor: str
    partials: dict
    tag: str
    classes: frozenset
    increasing: bool
    concave: bool
    params: tuple = field(default=())

    def __call__(self, x, y):
        return self.partials[(0, 0)](x, y)

    def partial(self, m, n):
        if m + n > 4:
            raise InvalidInputError("partials are available up to total order 4")
        return self.partials[(m, n)]

    def belongs_to(self, tag):
        return tag in self.classes


def _product_partials(gx, gy, scale=1.0):
    """Partials of ``scale * g(x) * h(y)`` from per-axis derivative factories.

    ``gx(m)`` returns ``(coef, fn)`` with ``d^m g = coef * fn``.
    """
    out = {}
    for m, n in MULTI_INDICES:
        cx, fx = gx(m)
        cy, fy = gy(n)
        c = scale * cx * cy
        if c == 0.0:
            out[(m, n)] = _zero
        else:
            out[(m, n)] = (lambda c, fx, fy: lambda x, y: c * fx(x) * fy(y))(c, fx, fy)
    return out


def cobb_douglas(a, b):
    """``x**a * y**b`` for exponents in (0, 1]; supermodular, increasing, concave in each argument."""
    if not (0.0 < a <= 1.0 and 0.0 < b <= 1.0):
        raise InvalidInputError(f"cobb_douglas exponents must lie in (0, 1], got {a}, {b}")

    def power(e):
        return lambda m: (falling(e, m), lambda z: z ** (e - m))

    return TestFunction(
        descriptor=f"cobb_douglas:{_fmt(a)},{_fmt(b)}",
        partials=_product_partials(power(a), power(b)),
        tag="M++",
        classes=frozenset({"M+", "M++"}),
        increasing=True,
        concave=True,
        params=(a, b),
    )


def neg_complement_power(p, q):
    """``-(1 - x)**p * (1 - y)**q`` for ``p, q >= 1``; in M-- and increasing, concave."""
    if not (p >= 1.0 and q >= 1.0):
        raise InvalidInputError(f"neg_complement_power needs p, q >= 1, got {p}, {q}")

    def power(e):
        # d^m/dz^m (1 - z)^e = (-1)^m e(e-1)...(e-m+1) (1 - z)^(e-m)
        return lambda m: ((-1.0) ** m * falling(e, m), lambda z: (1 - z) ** (e - m))

    return TestFunction(
        descriptor=f"neg_complement_power:{_fmt(p)},{_fmt(q)}",
        partials=_product_partials(power(p), power(q), scale=-1.0),
        tag="M--",
        classes=frozenset({"M-", "M--"}),
        increasing=True,
        concave=True,
        params=(p, q),
    )


def modular_complement(lam):
    """``x + y - lam*x*y`` for ``lam`` in [0, 1]; submodular and increasing on the square."""
    if not 0.0 <= lam <= 1.0:
        raise InvalidInputError(f"modular_complement needs lam in [0, 1], got {lam}")
    partials = {mi: _zero for mi in MULTI_INDICES}
    partials[(0, 0)] = lambda x, y: x + y - lam * x * y
    partials[(1, 0)] = lambda x, y: 1 - lam * y + 0.0 * x
    partials[(0, 1)] = lambda x, y: 1 - lam * x + 0.0 * y
    partials[(1, 1)] = lambda x, y: -lam + 0.0 * x * y
    classes = {"M-", "M--"}
    if lam == 0.0:
        classes |= {"M+", "M++"}
    return TestFunction(
        descriptor=f"modular_complement:{_fmt(lam)}",
        partials=partials,
        tag="M-",
        classes=frozenset(classes),
        increasing=True,
        concave=True,
        params=(lam,),
    )


def constant(c):
    partials = {mi: _zero for mi in MULTI_INDICES}
    partials[(0, 0)] = lambda x, y: c + 0.0 * x * y
    return TestFunction(
        descriptor=f"constant:{_fmt(c)}",
        partials=partials,
        tag="none",
        classes=frozenset({"M-", "M+", "M--", "M++"}),
        increasing=True,
        concave=True,
        params=(c,),
    )


def cone_combine(fs, ws):
    """Nonnegative combination of functions sharing one class tag."""
    fs, ws = list(fs), [float(w) for w in ws]
    if not fs or len(fs) != len(ws):
        raise InvalidInputError("need one weight per function")
    tags = {f.tag for f in fs}
    if len(tags) != 1:
        raise InvalidInputError(f"cannot combine mixed class tags {sorted(tags)}")
    if any(w < 0 for w in ws) or not any(w > 0 for w in ws):
        raise InvalidInputError("weights must be nonnegative and not all zero")
    live = [(f, w) for f, w in zip(fs, ws) if w > 0]

    def combined(mi):
        parts = [(w, f.partials[mi]) for f, w in live if f.partials[mi] is not _zero]
        if not parts:
            return _zero
        return lambda x, y: sum(w * g(x, y) for w, g in parts)

    return TestFunction(
        descriptor="+".join(f"{_fmt(w)}*{f.descriptor}" for f, w in live),
        partials={mi: combined(mi) for mi in MULTI_INDICES},
        tag=tags.pop(),
        classes=frozenset.intersection(*(f.classes for f, _ in live)),
        increasing=all(f.increasing for f, _ in live),
        concave=all(f.concave for f, _ in live),
        params=tuple((f.descriptor, w) for f, w in live),
    )


REGISTRY: dict[str, tuple[Callable, int]] = {
    "cobb_douglas": (cobb_douglas, 2),
    "neg_complement_power": (neg_complement_power, 2),
    "modular_complement": (modular_complement, 1),
    "constant": (constant, 1),
}


_NUM = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_CONE_TERM = re.compile(rf"({_NUM})\*([A-Za-z_]+(?::{_NUM}(?:,{_NUM})*)?)(\+|$)")


def resolve(descriptor):
    """Build a function from a descriptor such as ``"cobb_douglas:0.5,0.5"``.

    Cone combinations use the form ``"0.5*cobb_douglas:1,1+2*cobb_douglas:0.5,0.5"``,
    which is also what :func:`cone_combine` writes.
    """
    descriptor = descriptor.strip()
    if "*" not in descriptor:
        return _resolve_single(descriptor)
    fs, ws, pos = [], [], 0
    while pos < len(descriptor):
        m = _CONE_TERM.match(descriptor, pos)
        if m is None or (m.group(3) == "+" and m.end() == len(descriptor)):
            raise InvalidInputError(f"cannot parse cone combination {descriptor!r}")
        ws.append(float(m.group(1)))
        fs.append(_resolve_single(m.group(2)))
        pos = m.end()
    return cone_combine(fs, ws)


def _resolve_single(descriptor):
    name, _, args = descriptor.strip().partition(":")
    if name not in REGISTRY:
        raise InvalidInputError(
            f"unknown test function {name!r}; known: {', '.join(sorted(REGISTRY))}"
        )
    ctor, arity = REGISTRY[name]
    try:
        values = [float(a) for a in args.split(",")] if args else []
    except ValueError:
        raise InvalidInputError(f"bad parameters in {descriptor!r}") from None
    if len(values) != arity:
        raise InvalidInputError(f"{name} takes {arity} parameter(s), got {len(values)}")
    return ctor(*values)


def interior_grid(n):
    return (np.arange(n) + 1.0) / (n + 1.0)


def check_partials(phi, grid_n=33, h=1e-4):
    """Largest scaled mismatch between closed-form partials and central differences.

    Each partial of order k >= 1 is compared with a central difference of a
    closed-form partial of order k - 1 (order-1 partials against the
    evaluator itself), so the chain ties every derivative back to the
    evaluator.  The mismatch is scaled by ``max(1e-5, 1e-3 * |value|)``; a
    result <= 1 means every partial passes.
    """
    g = interior_grid(grid_n)
    x, y = np.meshgrid(g, g, indexing="ij")
    worst = 0.0
    with np.errstate(all="ignore"):
        for m, n in MULTI_INDICES:
            if m + n == 0:
                continue
            if m > 0:
                parent = phi.partials[(m - 1, n)]
                est = (parent(x + h, y) - parent(x - h, y)) / (2 * h)
            else:
                parent = phi.partials[(m, n - 1)]
                est = (parent(x, y + h) - parent(x, y - h)) / (2 * h)
            exact = np.broadcast_to(phi.partials[(m, n)](x, y), x.shape)
            scale = np.maximum(1e-5, 1e-3 * np.abs(exact))
            worst = max(worst, float(np.max(np.abs(est - exact) / scale)))
    return worst


@dataclass(frozen=True)
class ClassReport:
    """Outcome of :func:`classify`.

    ``tags`` holds every class whose sign conditions hold at the sampled
    points; ``strongest`` is the most specific class whose defining
    conditions are not all identically zero (an additive function is weakly
    in every class but establishes none of them).
    """

    tags: frozenset
    strongest: str
    increasing: bool
    concave: bool


def _stencil_partials(f, x, y, h):
    v = {(a, b): f(x + a * h, y + b * h) for a in (-1, 0, 1) for b in (-1, 0, 1)}
    d2x = {b: v[(1, b)] - 2 * v[(0, b)] + v[(-1, b)] for b in (-1, 0, 1)}
    d2y = {a: v[(a, 1)] - 2 * v[(a, 0)] + v[(a, -1)] for a in (-1, 0, 1)}
    return {
        "fx": (v[(1, 0)] - v[(-1, 0)]) / (2 * h),
        "fy": (v[(0, 1)] - v[(0, -1)]) / (2 * h),
        "fxx": d2x[0] / h**2,
        "fyy": d2y[0] / h**2,
        "fxy": (v[(1, 1)] - v[(1, -1)] - v[(-1, 1)] + v[(-1, -1)]) / (4 * h**2),
        "fxxy": (d2x[1] - d2x[-1]) / (2 * h**3),
        "fxyy": (d2y[1] - d2y[-1]) / (2 * h**3),
        "fxxyy": (d2x[1] - 2 * d2x[0] + d2x[-1]) / h**4,
    }


def estimate_partials(phi, grid_n=17, h=1e-4, dps=40):
    """Finite-difference partials at an interior grid, in extended precision.

    Falls back to float64 if the evaluator rejects ``mpmath`` numbers.
    """
    g = interior_grid(grid_n)
    rows = []
    try:
        with mpmath.workdps(dps):
            hm = mpmath.mpf(h)
            for x in g:
                for y in g:
                    est = _stencil_partials(phi, mpmath.mpf(x), mpmath.mpf(y), hm)
                    rows.append({k: float(val) for k, val in est.items()})
    except TypeError:
        rows = [_stencil_partials(phi, x, y, h) for x in g for y in g]
    return {k: np.array([r[k] for r in rows]) for k in rows[0]}


def classify(phi, grid_n=17, h=1e-4, tol=SIGN_TOL):
    """Infer modularity classes and monotone/concave flags from sampled signs."""
    d = estimate_partials(phi, grid_n, h)

    def le0(k):
        return bool(np.all(d[k] <= tol))

    def ge0(k):
        return bool(np.all(d[k] >= -tol))

    def active(keys):
        return any(np.any(np.abs(d[k]) > tol) for k in keys)

    tags = set()
    if le0("fxy"):
        tags.add("M-")
    if ge0("fxy"):
        tags.add("M+")
    concave_own = le0("fxx") and le0("fyy")
    if "M-" in tags and concave_own and ge0("fxxy") and ge0("fxyy") and le0("fxxyy"):
        tags.add("M--")
    if "M+" in tags and concave_own and le0("fxxy") and le0("fxyy") and ge0("fxxyy"):
        tags.add("M++")

    higher = ("fxx", "fyy", "fxxy", "fxyy", "fxxyy")
    strongest = "none"
    for tag, keys in (("M--", higher), ("M++", higher), ("M-", ("fxy",)), ("M+", ("fxy",))):
        if tag in tags and active(keys):
            strongest = tag
            break
    return ClassReport(
        tags=frozenset(tags),
        strongest=strongest,
        increasing=ge0("fx") and ge0("fy"),
        concave=concave_own,
    )

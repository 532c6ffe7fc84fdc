"""Outcome of a dominance check."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Witness:
    """A point where a checked inequality fails and by how much.

    ``y`` is ``None`` for conditions on a single marginal.
    """

    x: float
    y: float | None
    margin: float
    family: str


@dataclass(frozen=True)
class DominanceVerdict:
    """Result of checking ``lhs <= rhs + tolerance`` over the unit square.

    ``margin`` is the supremum of ``lhs - rhs``; ``witness`` is present
    exactly when the check fails.  ``strict_somewhere`` records whether
    ``lhs < rhs - tolerance`` at some point.  ``approximate`` is set when the
    supremum was located by sampling rather than exactly.  Checks made of
    several inequality families keep the per-family verdicts in ``parts``.
    """

    family: str
    holds: bool
    margin: float
    tolerance: float
    witness: Witness | None = None
    strict_somewhere: bool = False
    approximate: bool = False
    parts: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.holds and self.witness is not None:
            raise ValueError("a holding verdict carries no witness")
        if not self.holds and self.witness is None:
            raise ValueError("a failing verdict needs a witness")

    def __bool__(self):
        return self.holds


def combine(family, parts, tolerance):
    """Conjunction of several verdicts; the first failing part supplies the witness."""
    parts = tuple(parts)
    failing = [p for p in parts if not p.holds]
    return DominanceVerdict(
        family=family,
        holds=not failing,
        margin=max(p.margin for p in parts),
        tolerance=tolerance,
        witness=failing[0].witness if failing else None,
        strict_somewhere=any(p.strict_somewhere for p in parts),
        approximate=any(p.approximate for p in parts),
        parts=parts,
    )

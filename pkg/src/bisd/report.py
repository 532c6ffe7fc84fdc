"""Machine-readable condition reports shared by the CLI commands."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .inference import family_verdicts


@dataclass(frozen=True)
class VerdictRecord:
    family: str
    holds: bool
    margin: float
    witness: tuple | None = None  # (x, y), y is None for one-axis families

    @classmethod
    def from_verdict(cls, v):
        w = None if v.witness is None else (v.witness.x, v.witness.y)
        return cls(v.family, bool(v.holds), float(v.margin), w)

    def to_dict(self):
        w = None if self.witness is None else {"x": self.witness[0], "y": self.witness[1]}
        return {"family": self.family, "holds": self.holds, "witness": w, "margin": self.margin}

    @classmethod
    def from_dict(cls, d):
        w = d.get("witness")
        return cls(d["family"], bool(d["holds"]), float(d["margin"]),
                   None if w is None else (w["x"], w["y"]))


@dataclass(frozen=True)
class ConditionReport:
    """Verdicts per condition family plus the conclusions they license.

    A conclusion is listed only if every family it depends on holds.
    """

    command: str
    frame: dict
    tolerance: float
    verdicts: tuple = field(default=())
    conclusions: tuple = field(default=())
    pvalues: tuple | None = None
    seed: int | None = None

    @classmethod
    def from_checks(cls, command, frame, tolerance, results, pvalues=None, seed=None):
        """Build from ``[(conclusion, verdict), ...]``; shared families are listed once."""
        seen, records = set(), []
        for _, verdict in results:
            for v in family_verdicts(verdict):
                if v.family not in seen:
                    seen.add(v.family)
                    records.append(VerdictRecord.from_verdict(v))
        return cls(
            command=command,
            frame=dict(frame),
            tolerance=float(tolerance),
            verdicts=tuple(records),
            conclusions=tuple(name for name, v in results if v.holds),
            pvalues=None if pvalues is None else tuple(p.to_dict() for p in pvalues),
            seed=seed,
        )

    def to_dict(self):
        return {
            "command": self.command,
            "frame": dict(self.frame),
            "tolerance": self.tolerance,
            "verdicts": [r.to_dict() for r in self.verdicts],
            "conclusions": list(self.conclusions),
            "pvalues": None if self.pvalues is None else [dict(p) for p in self.pvalues],
            "seed": self.seed,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        pv = d.get("pvalues")
        return cls(
            command=d["command"],
            frame=dict(d["frame"]),
            tolerance=float(d["tolerance"]),
            verdicts=tuple(VerdictRecord.from_dict(r) for r in d["verdicts"]),
            conclusions=tuple(d["conclusions"]),
            pvalues=None if pv is None else tuple(dict(p) for p in pv),
            seed=d.get("seed"),
        )

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_text(self):
        f = self.frame
        lines = [
            f"frame: x in [{f['x_lo']!r}, {f['x_hi']!r}], y in [{f['y_lo']!r}, {f['y_hi']!r}]",
            f"tolerance: {self.tolerance!r}",
        ]
        for r in self.verdicts:
            line = f"  {r.family:<12} {'holds' if r.holds else 'FAILS':<6} margin {r.margin!r}"
            if r.witness is not None:
                x, y = r.witness
                line += f"  witness x={x!r}" + ("" if y is None else f" y={y!r}")
            lines.append(line)
        if self.pvalues is not None:
            for p in self.pvalues:
                lines.append(f"  p[{p['family']}] = {p['p']!r} (B={p['B']})")
        lines.append("conclusions: " + (", ".join(self.conclusions) or "none"))
        return "\n".join(lines) + "\n"

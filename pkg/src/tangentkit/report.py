"""Check records and machine-readable run reports.

A report is a list of checks sorted by name plus summary counts.  JSON
output has a stable field order and a schema version; wall-time fields
carry the only run-to-run nondeterminism and are excluded from any
determinism comparison.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Check:
    """One verified identity: measured residual against its tolerance."""

    name: str
    anchor: str          # which mathematical identity this instantiates
    value: float         # measured residual (or quantity, see anchor)
    tolerance: float
    passed: bool
    wall_time: float = 0.0

    def to_dict(self, include_time: bool = True) -> dict:
        d = {
            "name": self.name,
            "anchor": self.anchor,
            "value": self.value,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
        if include_time:
            d["wall_time"] = self.wall_time
        return d


def residual_check(name: str, anchor: str, value: float, tolerance: float,
                   wall_time: float = 0.0) -> Check:
    return Check(name, anchor, float(value), float(tolerance),
                 bool(value <= tolerance), wall_time)


@dataclass(frozen=True)
class Report:
    suite: str
    seed: int
    checks: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(
            self, "checks", tuple(sorted(self.checks, key=lambda c: c.name)))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> dict:
        n_pass = sum(1 for c in self.checks if c.passed)
        return {"total": len(self.checks), "passed": n_pass,
                "failed": len(self.checks) - n_pass}

    def to_dict(self, include_time: bool = True) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "summary": self.summary(),
            "checks": [c.to_dict(include_time) for c in self.checks],
        }

    def to_json(self, include_time: bool = True) -> str:
        return json.dumps(self.to_dict(include_time), indent=2)

    def to_text(self) -> str:
        lines = [f"suite {self.suite} (seed {self.seed})"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            lines.append(f"  [{status}] {c.name}: {c.value:.3e} "
                         f"<= {c.tolerance:.1e}  ({c.anchor})")
        s = self.summary()
        lines.append(f"  {s['passed']}/{s['total']} checks passed")
        return "\n".join(lines)


def merge_reports(suite: str, seed: int, reports) -> Report:
    checks = []
    for r in reports:
        checks.extend(r.checks)
    return Report(suite, seed, tuple(checks))

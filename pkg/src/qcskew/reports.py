"""Report containers shared by estimators and verifiers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class BoundCheck:
    """One named inequality or identity with its evaluated sides.

    ``relation`` is one of '<', '<=', '>', '>=', '=='.  ``margin`` is how far
    the check clears: rhs - lhs for upper bounds, lhs - rhs for lower bounds,
    and 0 for identities verified exactly.  ``unit`` marks log-space entries.
    """

    name: str
    lhs: float
    rhs: float
    relation: str
    margin: float
    passed: bool
    unit: str = ""
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "relation": self.relation,
            "margin": self.margin,
            "passed": self.passed,
            "unit": self.unit,
            "note": self.note,
        }


def make_check(name, lhs, rhs, relation, unit="", note="", tol=0.0) -> BoundCheck:
    """Evaluate a float comparison and record its margin."""
    if relation in ("<", "<="):
        margin = rhs - lhs
        passed = lhs < rhs if relation == "<" else lhs <= rhs + tol
    elif relation in (">", ">="):
        margin = lhs - rhs
        passed = lhs > rhs if relation == ">" else lhs >= rhs - tol
    elif relation == "==":
        margin = -abs(lhs - rhs)
        passed = abs(lhs - rhs) <= tol
        if passed:
            margin = 0.0
    else:
        raise ValueError(f"unknown relation {relation!r}")
    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        passed = False
    return BoundCheck(name, float(lhs), float(rhs), relation, float(margin), bool(passed),
                      unit=unit, note=note)


@dataclass
class BoundReport:
    """A titled collection of BoundChecks; passes iff every entry passes."""

    title: str
    checks: list[BoundCheck] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def worst(self) -> BoundCheck | None:
        return min(self.checks, key=lambda c: c.margin) if self.checks else None

    def add(self, *args, **kwargs) -> BoundCheck:
        chk = make_check(*args, **kwargs)
        self.checks.append(chk)
        return chk

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "failures": self.failures,
            "checks": [c.to_dict() for c in self.checks],
            "extras": self.extras,
        }


@dataclass
class DistortionReport:
    """Result of a sampled distortion estimator.

    ``estimate`` always equals the reported extremum of the per-scale values;
    ``witness`` records where it was attained (argmax triangle or circle
    point), ties broken by first encounter in deterministic sample order.
    """

    kind: str
    estimate: float
    witness: dict
    per_scale: list[tuple[float, float]]
    samples: dict
    flags: list[str] = field(default_factory=list)
    dropped_scales: list[float] = field(default_factory=list)

    def scale_values(self) -> list[float]:
        return [v for (_, v) in self.per_scale]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "estimate": self.estimate,
            "witness": self.witness,
            "per_scale": [[r, v] for (r, v) in self.per_scale],
            "samples": self.samples,
            "flags": list(self.flags),
            "dropped_scales": list(self.dropped_scales),
        }

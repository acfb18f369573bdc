"""Uniform pass/fail record for every checked inequality."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one quantitative check.

    The pass rule is always  lhs <= rhs * (1 + tol) + atol  with the
    tolerances recorded in details, so a report can be re-audited from its
    own fields.
    """

    name: str
    lhs: float
    rhs: float
    slack: float
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": _json_safe(self.lhs),
            "rhs": _json_safe(self.rhs),
            "slack": _json_safe(self.slack),
            "pass": self.passed,
            "details": {k: _json_safe(v) for k, v in self.details.items()},
        }


def bound_report(name: str, lhs: float, rhs: float, tol: float,
                 atol: float = 0.0, details: dict | None = None) -> BoundReport:
    """Assemble a BoundReport, applying the single shared pass rule."""
    lhs = float(lhs)
    rhs = float(rhs)
    passed = bool(lhs <= rhs * (1.0 + tol) + atol)
    det = dict(details or {})
    det.setdefault("tol", tol)
    det.setdefault("atol", atol)
    return BoundReport(name=name, lhs=lhs, rhs=rhs, slack=rhs - lhs,
                       passed=passed, details=det)


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    if isinstance(v, complex):
        return [v.real, v.imag]
    if hasattr(v, "item"):
        return _json_safe(v.item())
    return v

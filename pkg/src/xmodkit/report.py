"""Validation reports and the grid checker used by every validator."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

# Witnesses recorded per law; ``ok`` is still exact when more instances fail.
MAX_WITNESSES = 10


@dataclass
class Violation:
    law: str
    assignment: dict[str, Any]
    lhs: Any
    rhs: Any

    def to_dict(self) -> dict:
        return {"law": self.law, "assignment": self.assignment,
                "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class ValidationReport:
    checks: list[str] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)
    not_checked: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def failed(self) -> list[str]:
        seen = []
        for v in self.violations:
            if v.law not in seen:
                seen.append(v.law)
        return seen

    def first(self, law: str) -> Violation | None:
        for v in self.violations:
            if v.law == law:
                return v
        return None

    def add_check(self, law: str) -> None:
        if law not in self.checks:
            self.checks.append(law)

    def fail(self, law: str, assignment: dict, lhs: Any, rhs: Any) -> None:
        self.add_check(law)
        self.violations.append(Violation(law, assignment, lhs, rhs))

    def extend(self, other: "ValidationReport", prefix: str = "") -> "ValidationReport":
        for c in other.checks:
            self.add_check(prefix + c)
        for v in other.violations:
            self.violations.append(Violation(prefix + v.law, v.assignment, v.lhs, v.rhs))
        self.not_checked.extend(prefix + c for c in other.not_checked)
        return self

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": list(self.checks),
            "violations": [v.to_dict() for v in self.violations],
            "not_checked": list(self.not_checked),
        }


def _plain(ref: Callable | None, value):
    if ref is None:
        return int(value)
    return ref(int(value))


def check_grid(report: ValidationReport, law: str, domains: dict, fn: Callable,
               out_ref: Callable | None = None,
               max_witnesses: int = MAX_WITNESSES) -> bool:
    """Check ``lhs == rhs`` over the full product of ``domains``.

    ``domains`` maps a variable name to ``(values, ref)`` where ``values`` is a
    1-d integer array of element indices and ``ref`` turns an index into a
    reportable element (``None`` keeps the raw index).  ``fn`` receives the
    variables as mutually broadcastable arrays (keyword arguments) and returns
    ``(lhs, rhs)`` index arrays.  Returns True when the law holds everywhere.
    """
    report.add_check(law)
    names = list(domains)
    k = len(names)
    arrays = {}
    for pos, name in enumerate(names):
        values = np.asarray(domains[name][0], dtype=np.int64)
        if values.size == 0:
            return True
        shape = [1] * k
        shape[pos] = values.size
        arrays[name] = values.reshape(shape)
    lhs, rhs = fn(**arrays)
    bad = np.asarray(lhs) != np.asarray(rhs)
    if not bad.any():
        return True
    shape = tuple(np.asarray(domains[n][0]).size for n in names)
    bad = np.broadcast_to(bad, shape)
    lhs = np.broadcast_to(lhs, shape)
    rhs = np.broadcast_to(rhs, shape)
    for idx in np.argwhere(bad)[:max_witnesses]:
        idx = tuple(idx)
        assignment = {}
        for pos, name in enumerate(names):
            values, ref = domains[name]
            assignment[name] = _plain(ref, np.asarray(values)[idx[pos]])
        report.fail(law, assignment, _plain(out_ref, lhs[idx]), _plain(out_ref, rhs[idx]))
    return False

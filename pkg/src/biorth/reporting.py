"""Verification report structures shared by the checking layers.

Reports separate the deterministic payload (parameters, check outcomes,
counterexamples) from wall-clock timings, so two runs of the same check on
the same inputs produce byte-identical payloads; timings live under the
single segregated key ``timings_ms``.
"""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction


def jsonable(value):
    """Map exact values (and containers of them) to JSON-stable forms."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return str(value)


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


@dataclass
class CheckResult:
    """Outcome of one named check, with its first counterexample if any."""

    name: str
    passed: bool
    first_failure: dict | None = None
    skipped_reason: str | None = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "pass": self.passed}
        if self.first_failure is not None:
            out["first_failure"] = jsonable(self.first_failure)
        if self.skipped_reason is not None:
            out["skipped"] = True
            out["skipped_reason"] = self.skipped_reason
        return out


@dataclass
class VerificationReport:
    """A batch of checks for one parameter set and truncation order."""

    params: dict[str, str]
    n: int | None
    checks: list[CheckResult] = field(default_factory=list)
    timings_ms: dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def add(self, name: str, passed: bool, first_failure: dict | None = None,
            skipped_reason: str | None = None) -> CheckResult:
        check = CheckResult(name, passed, first_failure, skipped_reason)
        self.checks.append(check)
        return check

    @contextmanager
    def timed(self, name: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self.timings_ms[name] = round((time.perf_counter() - start) * 1000.0, 3)

    def to_dict(self, include_timings: bool = True) -> dict:
        out = {
            "params": dict(self.params),
            "n": self.n,
            "checks": [check.to_dict() for check in self.checks],
        }
        if include_timings:
            out["timings_ms"] = dict(self.timings_ms)
        return out

    def to_json(self, include_timings: bool = True) -> str:
        return canonical_json(self.to_dict(include_timings=include_timings))

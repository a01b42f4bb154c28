"""Check reports shared by every law and theorem check in the package."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any


class DomainError(ValueError):
    """A value lies outside the carrier an operation is defined on."""


class SignatureError(ValueError):
    """A formula or operator is not admissible for a machine signature."""


class ResourceLimitError(RuntimeError):
    """An exploration exceeded its configured state cap."""


def to_jsonable(value: Any) -> Any:
    """Best-effort conversion of check payloads to JSON values.

    Fractions become ``"p/q"`` strings so exact values survive a round trip.
    """
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        return value
    if isinstance(value, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, frozenset, set)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "to_json"):
        return value.to_json()
    return repr(value)


@dataclass
class CheckReport:
    name: str
    instance: str = ""
    passed: bool = True
    witness: Any = None
    breakdown: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    children: list = field(default_factory=list)

    def fail(self, law: str, witness: Any) -> None:
        """Record a violated law; the first witness becomes the report witness."""
        self.passed = False
        self.failures.append({"law": law, "witness": witness})
        if self.witness is None:
            self.witness = {"law": law, "witness": witness}

    def add(self, child: "CheckReport") -> "CheckReport":
        self.children.append(child)
        if not child.passed:
            self.passed = False
            if self.witness is None:
                self.witness = {"check": child.name, "witness": child.witness}
        return child

    def summary_lines(self, indent: int = 0) -> list[str]:
        mark = "PASS" if self.passed else "FAIL"
        line = " " * indent + f"[{mark}] {self.name}"
        if self.instance:
            line += f" ({self.instance})"
        lines = [line]
        if not self.passed and self.witness is not None and not self.children:
            lines.append(" " * (indent + 2) + f"witness: {to_jsonable(self.witness)}")
        for child in self.children:
            lines.extend(child.summary_lines(indent + 2))
        return lines

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "instance": self.instance,
            "passed": self.passed,
            "witness": to_jsonable(self.witness),
            "breakdown": to_jsonable(self.breakdown),
            "failures": to_jsonable(self.failures[:20]),
            "children": [c.to_json() for c in self.children],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def expect_failure(report: CheckReport, label: str) -> CheckReport:
    """Wrap a check that is supposed to fail; passes iff the inner check found a witness."""
    wrapped = CheckReport(f"rejects {label}", instance=report.instance)
    if report.passed:
        wrapped.fail("expected-failure", "the negative example was accepted")
    else:
        wrapped.breakdown = {"witness": to_jsonable(report.witness)}
    return wrapped

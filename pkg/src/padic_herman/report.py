"""Structured pass/fail records with exact witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckRecord:
    name: str
    passed: bool
    inputs: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    note: str = ""

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "passed": self.passed,
            "inputs": self.inputs,
            "witnesses": self.witnesses,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class VerificationReport:
    title: str
    checks: list = field(default_factory=list)
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: CheckRecord) -> CheckRecord:
        self.checks.append(check)
        return check

    def extend(self, other: VerificationReport, prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(
                CheckRecord(prefix + c.name, c.passed, c.inputs, c.witnesses, c.note)
            )

    def check(self, name: str) -> CheckRecord:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "seed": self.seed,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def render_text(self) -> str:
        lines = [f"== {self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            mark = "ok  " if c.passed else "FAIL"
            line = f"  [{mark}] {c.name}"
            if c.note:
                line += f" -- {c.note}"
            lines.append(line)
        return "\n".join(lines)

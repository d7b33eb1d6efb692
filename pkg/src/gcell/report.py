"""Check reports: ordered named results with stable text and JSON renderings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    payload: object = None  # counterexample vertices/edges, replayable

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


@dataclass
class Report:
    system: str
    truncation: str
    checks: list[CheckResult] = field(default_factory=list)

    def add(self, name, passed, detail="", payload=None):
        self.checks.append(CheckResult(name, passed, detail, payload))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def render_text(self) -> str:
        lines = [f"system={self.system} {self.truncation}"]
        for c in self.checks:
            line = f"{c.status} {c.name}"
            if c.detail:
                line += f" -- {c.detail}"
            lines.append(line)
        lines.append(f"overall {self.status}")
        return "\n".join(lines)

    def to_json_obj(self) -> dict:
        return {
            "system": self.system,
            "truncation": self.truncation,
            "checks": [
                {"name": c.name, "status": c.status, "detail": c.detail}
                for c in self.checks
            ],
            "status": self.status,
        }

    def render_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True)

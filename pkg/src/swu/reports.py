"""Verification reports: named checks with pass/fail/unresolved verdicts.

A resource-capped check is reported as "unresolved", never as a failure;
exit-code mapping lives in the CLI.
"""

from __future__ import annotations

from dataclasses import dataclass, field

PASS = "pass"
FAIL = "fail"
UNRESOLVED = "unresolved"


@dataclass
class Check:
    id: str
    verdict: str
    certificate: dict = field(default_factory=dict)
    wall_time_s: float | None = None


@dataclass
class Report:
    suite: str
    parameters: dict
    checks: list[Check] = field(default_factory=list)

    def add(self, check_id: str, ok: bool, certificate: dict | None = None,
            wall_time_s: float | None = None) -> Check:
        check = Check(check_id, PASS if ok else FAIL, certificate or {}, wall_time_s)
        self.checks.append(check)
        return check

    def add_unresolved(self, check_id: str, certificate: dict | None = None,
                       wall_time_s: float | None = None) -> Check:
        check = Check(check_id, UNRESOLVED, certificate or {}, wall_time_s)
        self.checks.append(check)
        return check

    @property
    def ok(self) -> bool:
        return all(c.verdict == PASS for c in self.checks)

    @property
    def failed(self) -> bool:
        return any(c.verdict == FAIL for c in self.checks)

    def exit_code(self) -> int:
        """0 if all pass, 1 on any fail, 2 if only pass/unresolved."""
        if self.failed:
            return 1
        return 0 if self.ok else 2

"""Uniform result objects for executable checks.

Every checker in the package returns a `CheckResult` so the CLI can render
one stable JSON shape: {"check": ..., "pass": ..., "witness": ...} plus
optional clause breakdowns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckResult:
    check: str
    passed: bool
    witness: dict[str, Any] | None = None
    # False when the check's stated precondition failed; such results are
    # input errors, not theorem violations.
    precondition_ok: bool = True
    clauses: tuple["CheckResult", ...] = ()
    info: dict[str, Any] | None = None

    def to_json(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "check": self.check,
            "pass": self.passed,
            "witness": self.witness,
        }
        if not self.precondition_ok:
            data["precondition_violated"] = True
        if self.clauses:
            data["clauses"] = [c.to_json() for c in self.clauses]
        if self.info is not None:
            data["info"] = self.info
        return data


def all_pass(check: str, clauses: list[CheckResult], info: dict | None = None) -> CheckResult:
    """Combine sub-results; the first failing clause supplies the witness."""
    failed = [c for c in clauses if not c.passed]
    return CheckResult(
        check=check,
        passed=not failed,
        witness=failed[0].witness if failed else None,
        precondition_ok=all(c.precondition_ok for c in clauses),
        clauses=tuple(clauses),
        info=info,
    )

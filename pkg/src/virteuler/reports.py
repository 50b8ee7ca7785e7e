"""Structured pass/fail reports returned by every cross-check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
EXPECTED_MISMATCH = "expected-mismatch"


@dataclass
class CheckReport:
    """Outcome of one named check, with per-coordinate records.

    ``status`` is ``pass`` when every record passed, ``fail`` otherwise, unless the
    check documents a known discrepancy, in which case a reproduced mismatch is
    reported as ``expected-mismatch``.
    """

    name: str
    records: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    expect_mismatch: bool = False

    def record(self, where, ok: bool, detail: str = "") -> bool:
        self.records.append({"where": where, "ok": bool(ok), "detail": detail})
        return ok

    @property
    def failures(self) -> list:
        return [r for r in self.records if not r["ok"]]

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def status(self) -> str:
        if self.expect_mismatch:
            return EXPECTED_MISMATCH if self.failures else FAIL
        return PASS if self.passed else FAIL

    @property
    def ok(self) -> bool:
        """True for ``pass`` and for a reproduced ``expected-mismatch``."""
        return self.status != FAIL

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "status": self.status,
            "checked": len(self.records),
            "failures": [{"where": list(r["where"]) if isinstance(r["where"], tuple) else r["where"],
                          "detail": r["detail"]} for r in self.failures],
            "meta": self.meta,
        }

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        head = f"{self.name}: {self.status} ({len(self.records)} checked)"
        lines = [f"  {r['where']}: {r['detail']}" for r in self.failures[:10]]
        return "\n".join([head, *lines])

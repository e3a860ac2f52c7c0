"""Verification report values."""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass(frozen=True)
class ReportEntry:
    id: str
    status: str
    detail: str
    counterexample: Optional[str] = None
    millis: int = 0

    def __post_init__(self):
        if self.status not in (PASS, FAIL, SKIP):
            raise ValueError(f"unknown status {self.status!r}")
        # a failure always says what went wrong
        if self.status == FAIL and self.counterexample is None and "value reported" not in self.detail:
            object.__setattr__(self, "counterexample", "value reported")

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def as_dict(self) -> dict:
        out = {"id": self.id, "status": self.status, "detail": self.detail}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        out["millis"] = self.millis
        return out

    def timed(self, millis: int) -> "ReportEntry":
        return ReportEntry(self.id, self.status, self.detail, self.counterexample, millis)


def entry(check_id: str, ok: bool, detail: str, counterexample=None) -> ReportEntry:
    if counterexample is None:
        cx = None
    elif hasattr(counterexample, "text"):
        cx = counterexample.text()
    else:
        cx = str(counterexample)
    return ReportEntry(check_id, PASS if ok else FAIL, detail, cx)


def timed(fn: Callable[[], list[ReportEntry]]) -> list[ReportEntry]:
    """Run fn and spread its wall time over the entries it returns."""
    t0 = time.perf_counter()
    entries = fn()
    ms = int((time.perf_counter() - t0) * 1000)
    return [e if e.millis else e.timed(ms) for e in entries]


@dataclass
class Report:
    version: str
    fingerprint: str
    entries: list[ReportEntry] = field(default_factory=list)

    def sorted_entries(self) -> list[ReportEntry]:
        return sorted(self.entries, key=lambda e: e.id)

    def summary(self) -> dict:
        counts = {PASS: 0, FAIL: 0, SKIP: 0}
        for e in self.entries:
            counts[e.status] += 1
        return counts

    @property
    def ok(self) -> bool:
        return all(e.status != FAIL for e in self.entries)

    def as_dict(self, with_timing: bool = True) -> dict:
        entries = []
        for e in self.sorted_entries():
            d = e.as_dict()
            if not with_timing:
                d["millis"] = 0
            entries.append(d)
        return {"version": self.version, "fingerprint": self.fingerprint,
                "entries": entries, "summary": self.summary()}

    def to_json(self, with_timing: bool = True) -> str:
        return json.dumps(self.as_dict(with_timing), indent=2, sort_keys=False)

    def to_text(self) -> str:
        lines = []
        for e in self.sorted_entries():
            lines.append(f"{e.status.upper():4}  {e.id:32} {e.millis:>7} ms  {e.detail}")
            if e.counterexample is not None and e.status == FAIL:
                lines.append(f"      counterexample: {e.counterexample}")
        s = self.summary()
        lines.append(f"pass={s[PASS]} fail={s[FAIL]} skip={s[SKIP]}")
        return "\n".join(lines)


def fingerprint_of(texts: list[str]) -> str:
    h = hashlib.sha256()
    for t in texts:
        h.update(t.encode())
        h.update(b"\n")
    return h.hexdigest()[:16]

"""Check outcomes and their aggregation."""
from __future__ import annotations

from dataclasses import dataclass, field

PASS, FAIL, UNVERIFIED = "pass", "fail", "unverified"
_RANK = {PASS: 0, UNVERIFIED: 1, FAIL: 2}


@dataclass
class CheckResult:
    suite: str
    case: str
    status: str
    witness: str | None = None
    duration: float = 0.0  # seconds


@dataclass
class Report:
    cases: list[CheckResult] = field(default_factory=list)
    seed: int = 42
    fuel: int = 10 ** 6
    field: str = ""

    def add(self, suite: str, case: str, ok: bool, witness=None, duration: float = 0.0,
            status: str | None = None) -> CheckResult:
        if status is None:
            status = PASS if ok else FAIL
        if witness is not None and not isinstance(witness, str) and not witness and ok:
            witness = None  # empty diagnostics on passing cases
        res = CheckResult(suite, case, status, None if witness is None else str(witness), duration)
        self.cases.append(res)
        return res

    def extend(self, other: "Report") -> "Report":
        self.cases.extend(other.cases)
        return self

    @property
    def ok(self) -> bool:
        return all(c.status == PASS for c in self.cases)

    @property
    def worst(self) -> str:
        return max((c.status for c in self.cases), key=_RANK.__getitem__, default=PASS)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.cases if c.status != PASS]

    def counts(self) -> dict[str, int]:
        out = {PASS: 0, FAIL: 0, UNVERIFIED: 0}
        for c in self.cases:
            out[c.status] += 1
        return out

    def __str__(self):
        lines = [f"{c.suite}/{c.case}: {c.status}" + (f"  [{c.witness}]" if c.witness else "")
                 for c in self.cases]
        return "\n".join(lines)


"""Pass/fail records emitted by every audit, and their JSON / Markdown rendering."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional

PASS = "pass"
FAIL = "fail"
INFO = "info"


@dataclass
class Finding:
    suite: str
    id: str
    anchor: str
    status: str
    witness: Any = None
    control: bool = False
    seconds: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self, with_timing: bool = False) -> Dict[str, Any]:
        d = {
            "suite": self.suite,
            "id": self.id,
            "anchor": self.anchor,
            "status": self.status,
            "control": self.control,
            "witness": self.witness,
        }
        if with_timing and self.seconds is not None:
            d["seconds"] = round(self.seconds, 3)
        return d

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "Finding":
        return cls(
            suite=d["suite"],
            id=d["id"],
            anchor=d["anchor"],
            status=d["status"],
            witness=d.get("witness"),
            control=d.get("control", False),
            seconds=d.get("seconds"),
        )


def check(suite: str, ident: str, anchor: str, ok: bool, witness: Any = None, control: bool = False) -> Finding:
    """A pass/fail finding; a failing control is downgraded to ``info``."""
    if control:
        status = INFO if not ok else FAIL
    else:
        status = PASS if ok else FAIL
    return Finding(suite, ident, anchor, status, witness, control)


@dataclass
class FindingsReport:
    findings: List[Finding] = field(default_factory=list)
    meta: Dict[str, Any] = field(default_factory=dict)

    def add(self, f: Finding) -> Finding:
        self.findings.append(f)
        return f

    def extend(self, other: "FindingsReport") -> "FindingsReport":
        self.findings.extend(other.findings)
        return self

    def __iter__(self) -> Iterator[Finding]:
        return iter(self.findings)

    def __len__(self) -> int:
        return len(self.findings)

    def failures(self) -> List[Finding]:
        return [f for f in self.findings if f.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failures()

    def by_id(self, ident: str) -> Finding:
        for f in self.findings:
            if f.id == ident:
                return f
        raise KeyError(ident)

    def select(self, prefix: str) -> List[Finding]:
        return [f for f in self.findings if f.id.startswith(prefix)]

    def to_dict(self, with_timing: bool = False) -> Dict[str, Any]:
        return {
            "meta": self.meta,
            "summary": {
                "total": len(self.findings),
                PASS: sum(f.status == PASS for f in self.findings),
                FAIL: sum(f.status == FAIL for f in self.findings),
                INFO: sum(f.status == INFO for f in self.findings),
            },
            "findings": [f.to_dict(with_timing) for f in self.findings],
        }

    def to_json(self, with_timing: bool = False) -> str:
        return json.dumps(self.to_dict(with_timing), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "FindingsReport":
        d = json.loads(text)
        return cls([Finding.from_dict(f) for f in d["findings"]], d.get("meta", {}))

    def to_markdown(self) -> str:
        d = self.to_dict()
        s = d["summary"]
        lines = ["# Verification report", ""]
        for k in sorted(self.meta):
            lines.append(f"- {k}: {self.meta[k]}")
        lines.append(f"- findings: {s['total']} (pass {s[PASS]}, fail {s[FAIL]}, info {s[INFO]})")
        lines.append("")
        lines.append("| suite | id | status | anchor |")
        lines.append("|---|---|---|---|")
        for f in self.findings:
            anchor = f.anchor.replace("|", "\\|")
            lines.append(f"| {f.suite} | {f.id} | {f.status}{' (control)' if f.control else ''} | {anchor} |")
        fails = [f for f in self.findings if f.status != PASS and f.witness is not None]
        if fails:
            lines += ["", "## Witnesses", ""]
            for f in fails:
                lines.append(f"### {f.id}")
                lines.append("```json")
                lines.append(json.dumps(f.witness, sort_keys=True, indent=1, ensure_ascii=False))
                lines.append("```")
        return "\n".join(lines) + "\n"


@contextmanager
def timed(f_holder: list):
    t = time.perf_counter()
    yield
    dt = time.perf_counter() - t
    for f in f_holder:
        f.seconds = dt

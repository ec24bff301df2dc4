"""Check reports: named records, witnesses, stable JSON serialization.

Reports carry no timing data; byte-identical inputs yield byte-identical
serialized reports.  Witness values are expression strings that re-parse in
the presentation they came from.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional


@dataclass
class CheckRecord:
    name: str
    passed: bool
    witness: Optional[dict] = None


@dataclass
class CheckReport:
    suite: str
    subject: str
    degree: Optional[int] = None
    records: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def add(self, name: str, passed: bool, witness: Optional[dict] = None):
        self.records.append(CheckRecord(name, passed, witness))

    def note(self, text: str):
        self.notes.append(text)

    def failures(self):
        return [r for r in self.records if not r.passed]

    def extend(self, other: "CheckReport", prefix: str = ""):
        for r in other.records:
            self.records.append(
                CheckRecord(prefix + r.name, r.passed, r.witness)
            )
        for n in other.notes:
            self.notes.append(prefix + n)

    def to_json_dict(self) -> dict:
        return {
            "suite": self.suite,
            "subject": self.subject,
            "degree": self.degree,
            "passed": self.passed,
            "counts": {
                "checked": len(self.records),
                "failed": len(self.failures()),
            },
            "records": [
                {"name": r.name, "passed": r.passed, "witness": r.witness}
                for r in self.records
            ],
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    def summary_lines(self, verbose: bool = False):
        lines = []
        for r in self.records:
            if verbose or not r.passed:
                status = "ok" if r.passed else "FAIL"
                lines.append(f"  [{status}] {r.name}")
                if not r.passed and r.witness:
                    for k, v in r.witness.items():
                        lines.append(f"         {k}: {v}")
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(
            f"{verdict} {self.suite} {self.subject}"
            + (f" (degree {self.degree})" if self.degree is not None else "")
            + f": {len(self.records) - len(self.failures())}/{len(self.records)} checks"
        )
        return lines

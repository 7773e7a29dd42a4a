"""Verification report rows and their JSON/CSV serialization."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass

from .qfield import format_scalar

# expectation tags
ZERO = "zero"  # residual must vanish
NONZERO = "nonzero"  # some residual in the group must be nonzero
INFO = "info"  # reported, never counted


@dataclass(frozen=True)
class Row:
    suite: str
    prop: str
    subject: str
    indices: tuple
    q: str
    residual: str
    expected: str
    passed: bool
    note: str = ""

    def key(self):
        return (self.suite, self.prop, self.subject, self.indices, self.q)


def row(suite, prop, subject, indices, q, residual, expected, passed=None, note="") -> Row:
    res = residual if isinstance(residual, str) else format_scalar(residual)
    if passed is None:
        if expected == ZERO:
            passed = residual == 0
        elif expected == NONZERO:
            passed = residual != 0
        else:
            passed = True
    return Row(suite, prop, subject, tuple(indices), str(q), res, expected, bool(passed), note)


@dataclass
class Report:
    rows: list
    config: dict

    def sorted_rows(self) -> list:
        return sorted(self.rows, key=lambda r: (r.key(), r.residual))

    def failures(self) -> list:
        return [r for r in self.rows if r.expected != INFO and not r.passed]

    @property
    def ok(self) -> bool:
        return not self.failures()

    def summary(self) -> dict:
        counted = [r for r in self.rows if r.expected != INFO]
        return {
            "rows": len(self.rows),
            "checked": len(counted),
            "passed": sum(r.passed for r in counted),
            "failed": len(counted) - sum(r.passed for r in counted),
            "properties": sorted({f"{r.suite}/{r.prop}" for r in self.rows}),
            "failing_properties": sorted({f"{r.suite}/{r.prop}/{r.subject}" for r in self.failures()}),
        }

    def to_json(self) -> str:
        data = {
            "config": self.config,
            "summary": self.summary(),
            "rows": [dict(asdict(r), indices=list(r.indices)) for r in self.sorted_rows()],
        }
        return json.dumps(data, indent=1, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "property", "subject", "indices", "q", "residual", "expected", "passed", "note"])
        for r in self.sorted_rows():
            w.writerow([r.suite, r.prop, r.subject, " ".join(map(str, r.indices)), r.q,
                        r.residual, r.expected, int(r.passed), r.note])
        return buf.getvalue()

"""Structured pass/fail records for verification runs.

Reports serialise as JSON lines (one record per case plus a trailing
summary record) and optionally as CSV.  Apart from wall-time fields a
report is a deterministic function of its configuration.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field as dfield

PASS, FAIL, SKIP_CAP = "pass", "fail", "skip-cap"


@dataclass(frozen=True)
class CaseRecord:
    suite: str
    identity: str
    config: dict
    seed: int | None
    status: str
    residual: str = ""
    stats: dict | None = None
    wall_ms: float = 0.0

    def to_dict(self) -> dict:
        return {
            "type": "case",
            "suite": self.suite,
            "identity": self.identity,
            "config": self.config,
            "seed": self.seed,
            "status": self.status,
            "residual": self.residual,
            "stats": self.stats,
            "wall_ms": round(self.wall_ms, 3),
        }


@dataclass
class VerificationReport:
    records: list[CaseRecord] = dfield(default_factory=list)

    def add(self, record: CaseRecord) -> None:
        self.records.append(record)

    def extend(self, records) -> None:
        self.records.extend(records)

    @property
    def n_pass(self) -> int:
        return sum(1 for r in self.records if r.status == PASS)

    @property
    def n_fail(self) -> int:
        return sum(1 for r in self.records if r.status == FAIL)

    @property
    def n_skipped(self) -> int:
        return sum(1 for r in self.records if r.status == SKIP_CAP)

    @property
    def all_passed(self) -> bool:
        return self.n_fail == 0

    @property
    def exit_code(self) -> int:
        return 0 if self.all_passed else 1

    def failures(self) -> list[CaseRecord]:
        return [r for r in self.records if r.status == FAIL]

    def summary(self) -> dict:
        return {
            "type": "summary",
            "cases": len(self.records),
            "pass": self.n_pass,
            "fail": self.n_fail,
            "skipped": self.n_skipped,
            "ok": self.all_passed,
        }

    def to_jsonl(self) -> str:
        lines = [json.dumps(r.to_dict(), sort_keys=True) for r in self.records]
        lines.append(json.dumps(self.summary(), sort_keys=True))
        return "\n".join(lines) + "\n"

    def write_jsonl(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_jsonl())

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["suite", "identity", "seed", "status", "residual", "config", "wall_ms"])
            for r in self.records:
                writer.writerow(
                    [
                        r.suite,
                        r.identity,
                        "" if r.seed is None else r.seed,
                        r.status,
                        r.residual,
                        json.dumps(r.config, sort_keys=True),
                        round(r.wall_ms, 3),
                    ]
                )

    def print_summary(self, out=None) -> None:
        import sys

        out = out or sys.stdout
        for r in self.failures():
            print(f"FAIL {r.suite}/{r.identity} seed={r.seed} cfg={r.config}", file=out)
        s = self.summary()
        print(
            f"{s['cases']} cases: {s['pass']} pass, {s['fail']} fail, "
            f"{s['skipped']} skipped -> {'OK' if s['ok'] else 'FAILED'}",
            file=out,
        )

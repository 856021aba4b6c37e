"""Machine-readable verification reports.

One canonical JSON serialization (sorted keys, two-space indent, trailing
newline) so that identical inputs produce byte-identical report files.
Wall-clock time is kept on the in-memory object for the human table but
deliberately excluded from the canonical document.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

SCHEMA = "nordenlab-report/1"


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    anchor: str          # label of the identity being checked, e.g. "eq-12"
    residual: str
    passed: bool
    backend: str
    tolerance: str

    def to_dict(self) -> dict:
        return {
            "id": self.check_id,
            "anchor": self.anchor,
            "residual": self.residual,
            "passed": self.passed,
            "backend": self.backend,
            "tolerance": self.tolerance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CheckRecord":
        return cls(
            check_id=d["id"],
            anchor=d["anchor"],
            residual=d["residual"],
            passed=bool(d["passed"]),
            backend=d["backend"],
            tolerance=d["tolerance"],
        )


@dataclass
class VerificationReport:
    spec_name: str
    scalar_backend: str
    seed: int
    suites: tuple
    checks: tuple
    elapsed_seconds: float = field(default=0.0, compare=False)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> dict:
        total = len(self.checks)
        passed = sum(1 for c in self.checks if c.passed)
        return {"total": total, "passed": passed, "failed": total - passed}

    def to_json(self) -> str:
        doc = {
            "schema": SCHEMA,
            "spec": self.spec_name,
            "backend": self.scalar_backend,
            "seed": self.seed,
            "suites": list(self.suites),
            "checks": [c.to_dict() for c in self.checks],
            "summary": self.summary(),
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        doc = json.loads(text)
        if doc.get("schema") != SCHEMA:
            raise ValueError(f"unknown report schema {doc.get('schema')!r}")
        return cls(
            spec_name=doc["spec"],
            scalar_backend=doc["backend"],
            seed=doc["seed"],
            suites=tuple(doc["suites"]),
            checks=tuple(CheckRecord.from_dict(c) for c in doc["checks"]),
        )

    def human_table(self) -> str:
        width = max((len(c.check_id) for c in self.checks), default=10)
        lines = [
            f"spec: {self.spec_name}   backend: {self.scalar_backend}   seed: {self.seed}",
            f"suites: {', '.join(self.suites)}",
            "-" * (width + 44),
        ]
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(
                f"{c.check_id:<{width}}  {mark}  residual={c.residual}"
                f"  tol={c.tolerance}  [{c.anchor}]"
            )
        s = self.summary()
        lines.append("-" * (width + 44))
        lines.append(
            f"{s['passed']}/{s['total']} checks passed"
            + (f", {s['failed']} FAILED" if s["failed"] else "")
            + f"   ({self.elapsed_seconds:.2f}s)"
        )
        return "\n".join(lines)


def merge_reports(
    spec_name: str, scalar_backend: str, seed: int, parts: Iterable, elapsed: float = 0.0
) -> VerificationReport:
    suites = []
    checks = []
    for suite_name, suite_checks in parts:
        suites.append(suite_name)
        checks.extend(suite_checks)
    return VerificationReport(
        spec_name=spec_name,
        scalar_backend=scalar_backend,
        seed=seed,
        suites=tuple(suites),
        checks=tuple(checks),
        elapsed_seconds=elapsed,
    )

"""Verification report records shared by the check routines and the CLI."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class Report:
    check: str
    order: int | None
    samples: int
    status: str  # "pass" or "fail"
    counterexample: dict | None = None
    details: dict | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {"check": self.check, "order": self.order, "samples": self.samples, "status": self.status}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.details:
            out["details"] = self.details
        return out

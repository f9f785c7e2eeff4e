"""Verification reports: ordered pass/fail entries grouped into sections."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterator


@dataclass
class Check:
    id: str
    passed: bool
    section: str = "checks"
    detail: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"id": self.id, "pass": bool(self.passed), **self.detail}


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)

    def add(self, id: str, passed: bool, section: str = "checks", **detail) -> Check:
        c = Check(id, bool(passed), section, detail)
        self.checks.append(c)
        return c

    def extend(self, other: Report) -> None:
        self.checks.extend(other.checks)

    def __iter__(self) -> Iterator[Check]:
        return iter(self.checks)

    def __getitem__(self, id: str) -> Check:
        for c in self.checks:
            if c.id == id:
                return c
        raise KeyError(id)

    def __contains__(self, id: str) -> bool:
        return any(c.id == id for c in self.checks)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def section(self, name: str) -> list[Check]:
        return [c for c in self.checks if c.section == name]

    def failures(self) -> list[str]:
        return [c.id for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        out: dict[str, list] = {}
        for c in self.checks:
            out.setdefault(c.section, []).append(c.to_dict())
        return out

"""Named exact checks collected into a certificate."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, List


@dataclass(frozen=True)
class Check:
    name: str
    expected: Any
    computed: Any
    passed: bool
    note: str = ""


@dataclass(frozen=True)
class Certificate:
    label: str
    checks: tuple = ()

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed(self) -> list:
        return [c for c in self.checks if not c.passed]

    def merged(self, *others: "Certificate", label: str = None) -> "Certificate":
        checks = list(self.checks)
        for o in others:
            checks.extend(Check(f"{o.label}: {c.name}", c.expected, c.computed, c.passed, c.note) for c in o.checks)
        return Certificate(label or self.label, tuple(checks))


@dataclass
class CertificateBuilder:
    """Accumulates checks; ``build()`` freezes them."""

    label: str
    _checks: List[Check] = field(default_factory=list)

    def equal(self, name: str, expected, computed, note: str = "") -> bool:
        ok = expected == computed
        self._checks.append(Check(name, expected, computed, ok, note))
        return ok

    def holds(self, name: str, relation: str, computed, ok: bool, note: str = "") -> bool:
        self._checks.append(Check(name, relation, computed, bool(ok), note))
        return bool(ok)

    def build(self) -> Certificate:
        return Certificate(self.label, tuple(self._checks))

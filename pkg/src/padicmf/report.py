"""Verdict and check records.

Every decision procedure returns a ``Verdict`` made of named ``Check``
entries.  A check can pass, fail, or be inconclusive (``passed is None``),
and always carries the modulus the comparison was performed under.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool | None
    detail: str = ""
    modulus: str = ""

    def line(self) -> str:
        if self.passed is True:
            word = "pass"
        elif self.passed is False:
            word = "FAIL"
        else:
            word = "inconclusive"
        parts = [f"  - {self.name}: {word}"]
        if self.detail:
            parts.append(f" [{self.detail}]")
        if self.modulus:
            parts.append(f" ({self.modulus})")
        return "".join(parts)


@dataclass
class Verdict:
    name: str
    checks: list[Check] = field(default_factory=list)
    mode: str = ""

    def add(self, name, passed, detail="", modulus=""):
        self.checks.append(Check(name, passed, detail, modulus))

    @property
    def passed(self) -> bool | None:
        if any(c.passed is False for c in self.checks):
            return False
        if any(c.passed is None for c in self.checks):
            return None
        return True

    @property
    def failing(self) -> list[str]:
        return [c.name for c in self.checks if c.passed is False]

    def lines(self) -> list[str]:
        head = {True: "PASS", False: "FAIL", None: "INCONCLUSIVE"}[self.passed]
        out = [f"{self.name}: {head}" + (f" (mode: {self.mode})" if self.mode else "")]
        out.extend(c.line() for c in self.checks)
        return out

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "mode": self.mode,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "detail": c.detail,
                    "modulus": c.modulus,
                }
                for c in self.checks
            ],
        }

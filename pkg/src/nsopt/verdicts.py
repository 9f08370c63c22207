"""Verdict values shared by the condition checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"

OUTCOMES = (PASS, FAIL, INCONCLUSIVE)


@dataclass
class Verdict:
    """Outcome of one optimality-condition check over a direction set.

    A FAIL always carries at least one witness (the direction and estimate
    that conclusively violate the condition).  An INCONCLUSIVE verdict lists
    the estimates whose trends did not resolve.  A PASS over a finite
    direction set is evidence, not proof: the underlying conditions quantify
    over all directions.
    """

    condition_id: str
    outcome: str
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    zero_band: float = 1e-6
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.outcome == PASS

    def to_dict(self) -> dict[str, Any]:
        return {
            "condition_id": self.condition_id,
            "outcome": self.outcome,
            "witnesses": self.witnesses,
            "zero_band": self.zero_band,
            "note": self.note,
        }

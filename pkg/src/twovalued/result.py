from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a property check; truthy iff the property holds.

    ``witness`` is set only on failure and names the offending objects,
    e.g. ``{"P": ..., "Q": ..., "D": ...}``.
    """

    holds: bool
    witness: dict[str, Any] | None = None

    def __bool__(self):
        return self.holds

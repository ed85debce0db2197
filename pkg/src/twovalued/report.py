"""Run reports shared by the CLI commands."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .orders import Universe
from .profiles import Profile, format_profile_inline

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


@dataclass
class Check:
    name: str
    holds: bool
    detail: str = ""


@dataclass
class RunReport:
    command: str
    instance: dict[str, Any] = field(default_factory=dict)
    counts: dict[str, int] = field(default_factory=dict)
    checks: list[Check] = field(default_factory=list)
    witnesses: dict[str, Any] | None = None
    elapsed: float = 0.0

    @property
    def failures(self) -> int:
        return sum(1 for c in self.checks if not c.holds)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.failures == 0 else EXIT_VIOLATION

    def add(self, name: str, holds: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, bool(holds), detail))
        return bool(holds)

    def to_dict(self, timing: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "command": self.command,
            "instance": self.instance,
            "counts": {**self.counts, "failures": self.failures},
            "checks": [{"name": c.name, "holds": c.holds, "detail": c.detail} for c in self.checks],
            "witnesses": self.witnesses,
        }
        # Wall time breaks byte-stable output, so it is opt-in.
        if timing:
            out["elapsed"] = round(self.elapsed, 3)
        return out

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2)

    def to_text(self, timing: bool = False) -> str:
        lines = [f"{self.command}"]
        for key, val in self.instance.items():
            lines.append(f"  {key}: {val}")
        if self.checks:
            width = max(len(c.name) for c in self.checks)
            lines.append("")
            for c in self.checks:
                status = "PASS" if c.holds else "FAIL"
                tail = f"  {c.detail}" if c.detail else ""
                lines.append(f"  {c.name.ljust(width)}  {status}{tail}")
        if self.counts:
            lines.append("")
            for key, val in self.counts.items():
                lines.append(f"  {key}: {val}")
        if self.witnesses:
            lines.append("")
            lines.append("  witness:")
            for key, val in self.witnesses.items():
                lines.append(f"    {key}: {val}")
        if timing:
            lines.append(f"  elapsed: {self.elapsed:.3f}s")
        return "\n".join(lines)


def _coalition(voters) -> str:
    return "{" + " ".join(f"v{v}" for v in sorted(voters)) + "}"


def serialize_witness(witness: dict[str, Any] | None, universe: Universe) -> dict[str, Any] | None:
    """Render profiles and voter sets in the textual formats."""
    if witness is None:
        return None
    out = {}
    for key, val in witness.items():
        if isinstance(val, Profile):
            out[key] = format_profile_inline(val, universe)
        elif isinstance(val, (set, frozenset)) and all(isinstance(v, int) for v in val):
            out[key] = _coalition(val)
        elif isinstance(val, (set, frozenset)):
            out[key] = ", ".join(sorted(_coalition(S) for S in val))
        elif isinstance(val, int) and key == "y":
            out[key] = universe.label(val)
        else:
            out[key] = val if isinstance(val, (int, str, float, bool)) else str(val)
    return out

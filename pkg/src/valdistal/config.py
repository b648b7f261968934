"""Run configuration embedded in every CLI output."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

SCHEMA_VERSION = "valdistal/1"


@dataclass
class Budgets:
    max_grid: int = 5000
    max_family: int = 256
    budget_ms: int = 60_000


@dataclass
class RunConfig:
    command: str
    ctx: str
    seed: int
    budgets: Budgets = field(default_factory=Budgets)
    args: dict = field(default_factory=dict)
    out: str | None = None

    def to_json(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d

    def header_lines(self) -> list[str]:
        return [
            f"# schema: {SCHEMA_VERSION}",
            f"# config: {json.dumps(self.to_json(), sort_keys=True)}",
        ]

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Iterable


def param_hash(command: str, params: dict, seed: int) -> str:
    blob = json.dumps({"command": command, "params": params, "seed": seed},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:20]


@dataclass
class ExperimentRecord:
    command: str
    params: dict[str, Any]
    results: dict[str, Any]
    runtime: float
    version: str
    seed: int = 0
    flags: list[str] = field(default_factory=list)
    hash: str = ""

    def __post_init__(self):
        if not self.hash:
            self.hash = param_hash(self.command, self.params, self.seed)

    @property
    def flagged(self) -> bool:
        return bool(self.flags)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> "ExperimentRecord":
        return cls(**json.loads(line))


class RecordStore:
    """Append-only JSON-lines file, one record per line."""

    def __init__(self, path):
        self.path = Path(path)

    def read(self, command: str | None = None) -> list[ExperimentRecord]:
        if not self.path.exists():
            return []
        out = []
        with self.path.open(encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rec = ExperimentRecord.from_json(line)
                    if command is None or rec.command == command:
                        out.append(rec)
        return out

    def hashes(self) -> set[str]:
        return {r.hash for r in self.read()}

    def append(self, records: Iterable[ExperimentRecord]) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with self.path.open("a", encoding="utf-8") as fh:
            for rec in records:
                fh.write(rec.to_json() + "\n")
            fh.flush()

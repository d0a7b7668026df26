"""Deterministic machine-readable reports."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass
class Report:
    command: str
    status: str = "pass"                       # pass | fail | unknown
    stages: list[dict] = field(default_factory=list)
    determinism_seed: int = 0
    data: dict = field(default_factory=dict)

    def add(self, name: str, outcome: str, witness: Any = None, **extra) -> None:
        stage = {"name": name, "outcome": outcome}
        if witness is not None:
            stage["witness"] = witness
        stage.update(extra)
        self.stages.append(stage)

    def check(self, name: str, ok: bool, witness: Any = None, **extra) -> bool:
        self.add(name, "pass" if ok else "fail", witness, **extra)
        return ok

    def finish(self) -> Report:
        outcomes = {s["outcome"] for s in self.stages}
        if "fail" in outcomes:
            self.status = "fail"
        elif "unknown" in outcomes:
            self.status = "unknown"
        else:
            self.status = "pass"
        return self

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        out = {"command": self.command, "status": self.status, "stages": self.stages,
               "determinism_seed": self.determinism_seed}
        if self.data:
            out["data"] = self.data
        return out

    def to_json(self) -> str:
        return dumps(self.to_dict())

    def to_text(self) -> str:
        lines = [f"{self.command}: {self.status.upper()}"]
        for s in self.stages:
            extra = f"  {compact(s['witness'])}" if "witness" in s else ""
            lines.append(f"  [{s['outcome']}] {s['name']}{extra}")
        return "\n".join(lines) + "\n"


def _plain(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"not serializable: {type(obj).__name__}")


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, default=_plain, ensure_ascii=False) + "\n"


def compact(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=_plain, ensure_ascii=False)

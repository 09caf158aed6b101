"""Result types shared by all kernelization pipelines."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from .graph import AnnotatedBoundariedGraph

REPORT_SCHEMA = 1


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    affected: tuple[int, ...]
    delta: int = 0

    def as_dict(self) -> dict[str, Any]:
        return {"rule": self.rule, "affected": list(self.affected), "delta": self.delta}


@dataclass(frozen=True)
class KernelResult:
    reduced: AnnotatedBoundariedGraph
    delta: int
    trace: tuple[TraceEntry, ...]
    report: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if self.delta != sum(t.delta for t in self.trace):
            raise ValueError("delta must equal the sum of trace contributions")

    def report_json(self) -> str:
        body = dict(self.report)
        body["schema"] = REPORT_SCHEMA
        body["delta"] = self.delta
        body["trace"] = [t.as_dict() for t in self.trace]
        return json.dumps(_jsonable(body), indent=2, sort_keys=True) + "\n"


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return x


def failure_report(expression: str, value: float) -> dict[str, Any]:
    return {"expression": expression, "value": value}

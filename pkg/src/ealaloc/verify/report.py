"""Probe reports and their JSON form."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

SCHEMA_VERSION = 1


class Verdict(str, Enum):
    VERIFIED = "verified"
    COUNTEREXAMPLE = "counterexample"
    INCONCLUSIVE = "inconclusive-budget"


@dataclass
class ProbeReport:
    suite: str
    verdict: Verdict
    trials: int = 0
    seed: int | None = None
    params: dict[str, Any] = field(default_factory=dict)
    witness: dict[str, Any] | None = None
    chain: list[Any] | None = None
    dimension: int | None = None
    details: dict[str, Any] = field(default_factory=dict)
    runtime_ms: int = 0

    @property
    def ok(self) -> bool:
        return self.verdict is Verdict.VERIFIED

    def to_dict(self, *, timing: bool = False) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "verdict": self.verdict.value,
            "trials": self.trials,
            "seed": self.seed,
            "params": self.params,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.chain is not None:
            out["chain"] = self.chain
        if self.dimension is not None:
            out["dimension"] = self.dimension
        if self.details:
            out["details"] = self.details
        # wall-clock time breaks byte-identical reruns, so it is opt-in
        if timing:
            out["runtime_ms"] = self.runtime_ms
        return out

    def to_json(self, *, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing=timing), indent=2, sort_keys=True) + "\n"


class Stopwatch:
    def __enter__(self) -> "Stopwatch":
        self._t0 = time.perf_counter()
        self.ms = 0
        return self

    def __exit__(self, *exc) -> None:
        self.ms = int(round((time.perf_counter() - self._t0) * 1000))

"""Run reports: a versioned JSON document written by the CLI.

Layout (``schema`` 1)::

    {
      "schema": 1,
      "command": "partition" | "baseline",
      "config": {...},                  # echo of the effective settings
      "graph": {"n": int, "edges": int},
      "objective": float | null,        # final OT-cut objective (null for baseline)
      "iterations": int,
      "objectives": [float, ...],       # iterations + 1 values
      "assignment": [int, ...],
      "cluster_sizes": [float, ...],    # measured with the source weights
      "target": [float, ...],
      "metrics": {"ari": float | null, "kl": float | "inf" | null,
                  "cut": float, "ncut": float, "rcut": float},
      "timings": {"total_seconds": float, "per_iter_seconds": [float, ...]}
    }

Everything except ``timings`` is deterministic for fixed inputs and seed.
Documents are written with sorted keys and two-space indentation; floats use
Python's shortest round-trip repr, and a non-finite KL is the string "inf".
"""

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

SCHEMA_VERSION = 1
TIMING_KEYS = ("timings",)

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "command", "config", "graph", "objective",
                 "iterations", "objectives", "assignment", "cluster_sizes",
                 "target", "metrics", "timings"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "command": {"enum": ["partition", "baseline"]},
        "config": {"type": "object"},
        "graph": {
            "type": "object",
            "required": ["n", "edges"],
            "properties": {"n": {"type": "integer", "minimum": 1},
                           "edges": {"type": "integer", "minimum": 0}},
        },
        "objective": {"type": ["number", "null"]},
        "iterations": {"type": "integer", "minimum": 0},
        "objectives": {"type": "array", "items": {"type": "number"}},
        "assignment": {"type": "array",
                       "items": {"type": "integer", "minimum": 0}},
        "cluster_sizes": {"type": "array", "items": {"type": "number"}},
        "target": {"type": "array", "items": {"type": "number"}},
        "metrics": {
            "type": "object",
            "required": ["ari", "kl", "cut", "ncut", "rcut"],
            "additionalProperties": False,
            "properties": {
                "ari": {"type": ["number", "null"]},
                "kl": {"anyOf": [{"type": "number"}, {"const": "inf"},
                                 {"type": "null"}]},
                "cut": {"type": "number"},
                "ncut": {"type": "number"},
                "rcut": {"type": "number"},
            },
        },
        "timings": {
            "type": "object",
            "required": ["total_seconds", "per_iter_seconds"],
            "properties": {
                "total_seconds": {"type": "number"},
                "per_iter_seconds": {"type": "array",
                                     "items": {"type": "number"}},
            },
        },
    },
}


@dataclass
class RunReport:
    command: str
    config: dict
    graph: dict
    objective: Optional[float]
    iterations: int
    objectives: list
    assignment: list
    cluster_sizes: list
    target: list
    metrics: dict
    timings: dict = field(default_factory=lambda: {"total_seconds": 0.0,
                                                   "per_iter_seconds": []})
    schema: int = SCHEMA_VERSION

    def to_dict(self):
        d = asdict(self)
        kl = d["metrics"].get("kl")
        if kl is not None and not math.isfinite(kl):
            d["metrics"]["kl"] = "inf"
        return d

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True,
                          allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, d):
        d = json.loads(json.dumps(d))
        if d.get("schema") != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        if d["metrics"].get("kl") == "inf":
            d["metrics"]["kl"] = math.inf
        return cls(**d)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def strip_timings(doc):
    """Copy of a report dict without the nondeterministic timing block."""
    return {k: v for k, v in doc.items() if k not in TIMING_KEYS}

"""Containers for experiment outcomes, serializable to JSON and CSV."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

__all__ = ["ExperimentResult", "jsonable", "fit_slope", "drift"]


def jsonable(obj):
    """Convert numpy scalars/arrays and complex numbers into JSON-friendly values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": jsonable(obj.real), "im": jsonable(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    return obj


def fit_slope(scales, values) -> float:
    """Least-squares slope of ``log values`` against ``log scales``."""
    v = np.asarray(values, float)
    if np.any(~np.isfinite(v)) or np.any(v <= 0):
        return math.nan
    return float(np.polyfit(np.log(np.asarray(scales, float)), np.log(v), 1)[0])


def drift(values) -> float:
    """``(max - min) / median`` of positive values; inf when any is non-finite."""
    v = np.asarray(values, float)
    if np.any(~np.isfinite(v)) or np.any(v <= 0):
        return math.inf
    return float((v.max() - v.min()) / np.median(v))


@dataclass
class ExperimentResult:
    suite: str
    params: dict
    records: list = field(default_factory=list)  # one dict per (function, scale) cell
    summary: dict = field(default_factory=dict)
    passed: bool = False
    status: str = ""
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return jsonable(asdict(self))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        rows = [jsonable(r) for r in self.records]
        keys = sorted({k for r in rows for k in r})
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in r.items()})
        return buf.getvalue()

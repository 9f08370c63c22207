"""Analysis report assembly and serialization.

Reports are plain dicts rendered to JSON with sorted keys, so two runs with
the same seed produce byte-identical files once timings are stripped.
Infinities are encoded as the strings "inf" / "-inf" (JSON has no literal
for them); `jsonable`/`unjsonable` convert in both directions.
"""

from __future__ import annotations

import hashlib
import json
import math
from importlib import resources
from typing import Any

SCHEMA_VERSION = 1


def jsonable(x: Any) -> Any:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return x


def unjsonable(x: Any) -> Any:
    if x == "inf":
        return math.inf
    if x == "-inf":
        return -math.inf
    if isinstance(x, dict):
        return {k: unjsonable(v) for k, v in x.items()}
    if isinstance(x, list):
        return [unjsonable(v) for v in x]
    return x


def dumps(report: dict) -> str:
    return json.dumps(jsonable(report), indent=2, sort_keys=True) + "\n"


def loads(text: str) -> dict:
    return json.loads(text)


def source_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def schema() -> dict:
    with resources.files("nsopt.schemas").joinpath("report-v1.json").open() as fh:
        return json.load(fh)


def strip_timings(report: dict) -> dict:
    out = dict(report)
    out.pop("timings", None)
    return out


def estimate_row(direction, kind: str, est) -> dict:
    return {
        "direction": [float(c) for c in direction],
        "kind": kind,
        "value": est.value,
        "limit": est.limit,
        "trend": est.trend,
        "stage_infima": list(est.stage_infima),
    }


def csv_table(estimates: list[dict], dim: int) -> str:
    """Per-direction estimate table for plotting."""
    header = [f"d{i + 1}" for i in range(dim)] + ["kind", "value", "trend"]
    lines = [",".join(header)]
    for row in estimates:
        cells = [repr(c) for c in row["direction"]]
        cells += [row["kind"], repr(row["value"]), row["trend"]]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"

"""Rendering of command results as CSV or JSON."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np

from nama.models import Check


@dataclass
class Table:
    """Column-oriented result of one command.

    ``single`` marks a one-record result (such as a match) that JSON renders
    as an object instead of a list.
    """

    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    single: bool = False

    def add(self, *values: Any) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append(list(values))

    def records(self) -> list[dict[str, Any]]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def format_value(value: Any) -> str:
    """CSV cell text: floats with 17 significant digits, booleans as true/false."""
    if isinstance(value, bool | np.bool_):
        return "true" if value else "false"
    if isinstance(value, float | np.floating):
        return format(float(value), ".17g")
    if value is None:
        return ""
    return str(value)


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, list | tuple | np.ndarray):
        return [_jsonable(v) for v in value]
    if isinstance(value, bool | np.bool_):
        return bool(value)
    if isinstance(value, int | np.integer):
        return int(value)
    if isinstance(value, float | np.floating):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def render_json(config: dict[str, Any], table: Table, checks: list[Check] | None = None) -> str:
    """{config, results, checks} document with sorted keys and no timestamps."""
    records = table.records()
    results = records[0] if table.single and records else records
    doc = {
        "config": config,
        "results": results,
        "checks": [c.to_dict() for c in checks or []],
    }
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


def save_output(text: str, out_path: str | Path | None) -> Path | None:
    """Write to out_path; None or "-" means the caller prints to stdout."""
    if out_path is None or str(out_path) == "-":
        return None
    path = Path(out_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path


def format_summary(checks: list[Check]) -> str:
    """One line per check for the terminal."""
    lines = []
    for c in checks:
        mark = "PASS" if c.passed else "FAIL"
        lines.append(f"{mark}  {c.name}: {c.value:.3e} (threshold {c.threshold:.1e})")
    passed = sum(c.passed for c in checks)
    lines.append(f"{passed}/{len(checks)} checks passed")
    return "\n".join(lines)

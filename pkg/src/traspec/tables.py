"""CSV and JSON encoders for result tables.

Floats are written with ``repr``, the shortest string that round-trips, so
both encodings of one table carry identical numbers. Nothing time-dependent
is written; the same table always produces the same bytes.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from typing import Any

from traspec import __version__

GENERATED_BY = f"traspec {__version__}"


def _plain(v: Any) -> Any:
    if hasattr(v, "item"):  # numpy scalar
        v = v.item()
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, float):
        return v
    raise TypeError(f"cannot serialize {type(v).__name__}")


def format_value(v: Any) -> str:
    v = _plain(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


@dataclass
class Table:
    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values, table has {len(self.columns)} columns")
        self.rows.append([_plain(v) for v in values])

    def to_json(self) -> str:
        meta = {"generated_by": GENERATED_BY, **{k: _plain(v) for k, v in self.metadata.items()}}
        doc = {"metadata": meta, "columns": list(self.columns), "rows": self.rows}
        return json.dumps(doc, indent=1, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write(f"# generated_by: {GENERATED_BY}\n")
        for k, v in self.metadata.items():
            out.write(f"# {k}: {format_value(v)}\n")
        out.write(",".join(self.columns) + "\n")
        for row in self.rows:
            out.write(",".join(format_value(v) for v in row) + "\n")
        return out.getvalue()

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        raise ValueError(f"unknown format {fmt!r}")


def read_csv(text: str) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Split CSV text written by :meth:`Table.to_csv` into metadata, header and rows."""
    meta = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        key, _, value = lines[i][1:].strip().partition(": ")
        meta[key] = value
        i += 1
    header = lines[i].split(",")
    rows = [line.split(",") for line in lines[i + 1 :] if line]
    return meta, header, rows

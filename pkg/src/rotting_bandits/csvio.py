"""Versioned CSV artifacts.

Every file starts with ``# schema=1`` followed by ``# key=value`` comment
lines embedding the fully-resolved configuration and library version, then
an RFC-4180-style quoted table.  Floats are serialized with 17 significant
digits so values round-trip exactly; within a schema version columns never
reorder.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Iterable, Mapping, Sequence

SCHEMA_VERSION = 1

RUNS_COLUMNS = (
    "algorithm",
    "T",
    "rho",
    "rep",
    "seed",
    "final_regret",
    "arms_sampled",
    "wall_ms",
)
CURVES_COLUMNS = ("algorithm", "T", "rho", "rep", "t", "cum_regret")
SUMMARY_COLUMNS = ("algorithm", "T", "rho", "mean_regret", "ci95")


def format_value(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render_table(
    meta: Mapping[str, object],
    columns: Sequence[str],
    rows: Iterable[Sequence],
) -> str:
    buf = io.StringIO()
    buf.write(f"# schema={SCHEMA_VERSION}\n")
    for key, value in meta.items():
        buf.write(f"# {key}={format_value(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def write_table(
    path: str | Path,
    meta: Mapping[str, object],
    columns: Sequence[str],
    rows: Iterable[Sequence],
) -> None:
    Path(path).write_text(render_table(meta, columns, rows), encoding="utf-8")


def read_table(path: str | Path) -> tuple[dict[str, str], list[dict[str, str]]]:
    """Parse a schema=1 file into (meta, rows-as-dicts).

    Raises ValueError on a missing or mismatched schema line.
    """
    text = Path(path).read_text(encoding="utf-8")
    meta: dict[str, str] = {}
    lines = text.splitlines()
    i = 0
    while i < len(lines) and lines[i].startswith("#"):
        body = lines[i][1:].strip()
        if "=" in body:
            key, _, value = body.partition("=")
            meta[key.strip()] = value.strip()
        i += 1
    if meta.get("schema") != str(SCHEMA_VERSION):
        raise ValueError(
            f"{path}: expected '# schema={SCHEMA_VERSION}' header, "
            f"got schema={meta.get('schema')!r}"
        )
    reader = csv.reader(io.StringIO("\n".join(lines[i:])))
    table = list(reader)
    if not table:
        return meta, []
    header = table[0]
    return meta, [dict(zip(header, row)) for row in table[1:] if row]

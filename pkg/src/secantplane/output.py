"""Text, CSV and JSON writers.

Floats are written with ``repr``, the shortest string that reads back to the
same double, so CSV and JSON output can be re-ingested bit-exactly.  JSON has
no NaN, so non-finite values become ``null``.
"""

from __future__ import annotations

import csv
import json
import math
from typing import IO, Any, Iterable, Sequence


def fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def write_json(obj: Any, out: IO[str]) -> None:
    json.dump(_jsonable(obj), out, indent=2, allow_nan=False)
    out.write("\n")


def write_csv(rows: Iterable[dict], fields: Sequence[str], out: IO[str]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([fmt(row[f]) for f in fields])


def write_table(rows: Sequence[dict], fields: Sequence[str], out: IO[str]) -> None:
    """Fixed-width table for humans (values rounded to 10 significant digits)."""

    def cell(v: Any) -> str:
        if isinstance(v, float):
            return f"{v:.10g}"
        return fmt(v)

    cells = [[cell(r[f]) for f in fields] for r in rows]
    widths = [max([len(f)] + [len(c[i]) for c in cells]) for i, f in enumerate(fields)]
    out.write("  ".join(f.rjust(w) for f, w in zip(fields, widths)).rstrip() + "\n")
    for c in cells:
        out.write("  ".join(v.rjust(w) for v, w in zip(c, widths)).rstrip() + "\n")


def read_csv(text_or_lines: Iterable[str]) -> list[dict[str, str]]:
    return list(csv.DictReader(text_or_lines))

"""CSV and plain-text rendering of sweep tables."""

from __future__ import annotations

import csv
import io
import math
import sys
from pathlib import Path
from typing import IO, Sequence

from .sweep import SweepRow

CSV_HEADER = (
    "axis", "ee", "aee", "iee", "iree_numeric", "iree_closed", "se", "de",
    "xi_numeric", "xi_closed", "c_tot", "d_tot", "p_tot", "clamped",
)
SUMMARY_METRICS = ("ee", "aee", "iee", "iree_numeric", "iree_closed", "se", "de")


def _fmt(x: float | None) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "nan"
    return f"{x:.9g}"


def row_values(row: SweepRow) -> dict[str, float | bool | None]:
    """Flat column mapping for one sweep row; failed rows map to ``None``."""
    base = row.numeric or row.closed
    out: dict[str, float | bool | None] = {name: None for name in CSV_HEADER}
    out["axis"] = row.axis
    if row.failed or base is None:
        return out
    for name in ("ee", "aee", "iee", "se", "de", "c_tot", "d_tot", "p_tot"):
        out[name] = getattr(base, name)
    if row.numeric is not None:
        out["iree_numeric"] = row.numeric.iree
        out["xi_numeric"] = row.numeric.xi
    if row.closed is not None:
        out["iree_closed"] = row.closed.iree
        out["xi_closed"] = row.closed.xi
        out["clamped"] = row.closed.clamped
    else:
        out["clamped"] = False
    return out


def write_csv(rows: Sequence[SweepRow], out: IO[str]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        vals = row_values(row)
        cells = []
        for name in CSV_HEADER:
            v = vals[name]
            if name == "clamped":
                cells.append("nan" if v is None else str(bool(v)).lower())
            else:
                cells.append(_fmt(v))
        writer.writerow(cells)


def write_summary(rows: Sequence[SweepRow], out: IO[str], axis_label: str = "axis") -> None:
    ok = [r for r in rows if not r.failed]
    out.write(f"{len(rows)} sweep points, {len(rows) - len(ok)} failed\n")
    for r in rows:
        if r.failed:
            out.write(f"  failed at {axis_label}={_fmt(r.axis)}: {r.error}\n")
    if not ok:
        return
    table = [row_values(r) for r in ok]
    for name in SUMMARY_METRICS:
        candidates = [t for t in table if t[name] is not None]
        if not candidates:
            continue
        best = max(candidates, key=lambda t: t[name])
        out.write(f"  best {name:<13} = {_fmt(best[name]):>16} at {axis_label}={_fmt(best['axis'])}\n")


def emit_report(
    rows: Sequence[SweepRow],
    fmt: str = "csv",
    out: str | Path | IO[str] | None = None,
    axis_label: str = "axis",
) -> None:
    """Render ``rows`` as ``csv`` or ``human-summary`` to a path or stream (stdout by default)."""
    if not rows:
        raise ValueError("cannot report an empty table")
    if fmt not in ("csv", "human-summary"):
        raise ValueError(f"unknown report format {fmt!r}")
    buf = io.StringIO()
    if fmt == "csv":
        write_csv(rows, buf)
    else:
        write_summary(rows, buf, axis_label)
    if out is None:
        sys.stdout.write(buf.getvalue())
    elif hasattr(out, "write"):
        out.write(buf.getvalue())
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())


def read_csv(source: str | Path | IO[str]) -> list[dict[str, float | bool]]:
    """Parse a report CSV back into typed rows."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    rows = []
    for rec in reader:
        parsed: dict[str, float | bool] = {}
        for name, cell in rec.items():
            if name == "clamped":
                parsed[name] = cell == "true"
            else:
                parsed[name] = float(cell)
        rows.append(parsed)
    return rows

"""Report rendering: aligned tables, CSV, and JSON.

Display rounding lives here and only here: threshold and savings ratios are
shown to 2 decimals, fabric scales to 1 decimal. Machine formats carry the
untouched engine output next to the display cells, so nothing downstream
ever has to re-derive a number from its rounded form.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .engine import SweepResult

# Column kinds map to display formatting; raw values are emitted as-is.
_FORMATS = {
    "ratio": lambda v: f"{v:.2f}",  # CDC and savings factors
    "scale": lambda v: f"{v:.1f}",  # fabric scaling n'
    "num": lambda v: f"{v:g}",
    "int": lambda v: str(int(v)),
    "plain": str,
}

MISSING_CELL = "-"


@dataclass(frozen=True)
class Column:
    header: str
    key: str
    kind: str = "plain"

    @property
    def numeric(self) -> bool:
        return self.kind in ("ratio", "scale", "num")


@dataclass(frozen=True)
class RenderedReport:
    """Formatted rows plus the lossless numeric payload they came from."""

    title: str
    columns: tuple[Column, ...]
    records: tuple[Mapping[str, object], ...]
    footnotes: tuple[str, ...] = ()

    def cell(self, record: Mapping[str, object], column: Column) -> str:
        value = record.get(column.key)
        if value is None:
            return MISSING_CELL
        return _FORMATS[column.kind](value)

    @property
    def headers(self) -> tuple[str, ...]:
        return tuple(c.header for c in self.columns)

    @property
    def rows(self) -> tuple[tuple[str, ...], ...]:
        return tuple(tuple(self.cell(r, c) for c in self.columns) for r in self.records)


def _raw_cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_table(report: RenderedReport, format: str = "table") -> str:
    """Render a report; identical input yields byte-identical output."""
    if format == "table":
        widths = [len(h) for h in report.headers]
        rows = report.rows
        for row in rows:
            widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
        lines = []
        if report.title:
            lines.append(report.title)
        lines.append("  ".join(h.ljust(w) for h, w in zip(report.headers, widths)).rstrip())
        lines.append("  ".join("-" * w for w in widths))
        for row in rows:
            lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip())
        for note in report.footnotes:
            lines.append(f"note: {note}")
        return "\n".join(lines) + "\n"
    if format == "csv":
        buf = io.StringIO()
        for note in report.footnotes:
            buf.write(f"# {note}\n")
        writer = csv.writer(buf, lineterminator="\n")
        exact = [c for c in report.columns if c.numeric]
        writer.writerow(list(report.headers) + [f"{c.header}_exact" for c in exact])
        for record, row in zip(report.records, report.rows):
            writer.writerow(list(row) + [_raw_cell(record.get(c.key)) for c in exact])
        return buf.getvalue()
    if format == "json":
        doc = {
            "title": report.title,
            "columns": list(report.headers),
            "records": [dict(r) for r in report.records],
            "footnotes": list(report.footnotes),
        }
        return json.dumps(doc, indent=2) + "\n"
    raise ValueError(f"unknown report format: {format!r}")


def emit_curve_csv(sweeps: Sequence[SweepResult]) -> str:
    """Long-format CSV of sweep curves: one row per sampled point."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["series", "parameter", "value"])
    for sweep in sweeps:
        label = series_label(sweep)
        for parameter, value in sweep.samples:
            writer.writerow([label, repr(parameter), repr(value)])
    return buf.getvalue()


def series_label(sweep: SweepResult) -> str:
    meta = sweep.metadata
    if "scenario" in meta:
        return str(meta["scenario"])
    if "area" in meta and "energy" in meta:
        return f"A={meta['area']:g},E={meta['energy']:g}"
    return sweep.axis_name


def estimated_inputs_footnote(names: Sequence[str]) -> str | None:
    if not names:
        return None
    return "estimated inputs: utilization values for " + ", ".join(names) + " are constrained estimates"


def sweep_report(sweeps: Sequence[SweepResult], value_header: str = "cdc") -> RenderedReport:
    """Long-format report over one or more sweep curves."""
    records = []
    estimated: list[str] = []
    for sweep in sweeps:
        label = series_label(sweep)
        for name in sweep.metadata.get("estimated_kernels", ()):
            if name not in estimated:
                estimated.append(name)
        for parameter, value in sweep.samples:
            records.append(
                {
                    "series": label,
                    sweep.axis_name: parameter,
                    value_header: value,
                    "n": sweep.metadata.get("n"),
                    "scale": sweep.metadata.get("scale"),
                }
            )
    axis = sweeps[0].axis_name if sweeps else "parameter"
    columns = (
        Column("series", "series"),
        Column(axis, axis, "num"),
        Column(value_header, value_header, "ratio"),
        Column("n", "n", "int"),
        Column("n_prime", "scale", "scale"),
    )
    note = estimated_inputs_footnote(sorted(estimated))
    return RenderedReport(
        title="",
        columns=columns,
        records=tuple(records),
        footnotes=(note,) if note else (),
    )

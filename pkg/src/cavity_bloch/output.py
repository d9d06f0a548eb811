"""Result envelopes and exporters (CSV, JSON, SVG scatter).

Every emitted file names its units in the header; the CSV payload carries no
timestamp so identical runs produce byte-identical files.
"""

import datetime
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import CavityBlochError

SCHEMA_VERSION = "0.1.0"
SVG_WIDTH = 1200
SVG_HEIGHT = 900


@dataclass
class TablePayload:
    """Column-oriented payload: names like 'energy[eV]' with unit brackets."""

    columns: list
    rows: list
    kind: str = "table"

    def to_jsonable(self):
        return {"kind": self.kind, "columns": self.columns, "rows": self.rows}


@dataclass
class ScalarPayload:
    """Named scalar results; each key carries its unit in brackets."""

    values: dict
    kind: str = "scalars"

    def to_jsonable(self):
        return {"kind": self.kind, "values": self.values}


@dataclass
class ResultEnvelope:
    config_text: str
    command: str
    payload: object
    seed: int = 0
    produced_at: str = ""
    schema_version: str = SCHEMA_VERSION

    def __post_init__(self):
        if not self.produced_at:
            self.produced_at = datetime.datetime.now(datetime.timezone.utc).isoformat()

    def to_jsonable(self):
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "config_echo": self.config_text,
            "seed": self.seed,
            "produced_at": self.produced_at,
            "payload": self.payload.to_jsonable(),
        }


def _table_of(payload):
    if isinstance(payload, TablePayload):
        return payload
    if isinstance(payload, ScalarPayload):
        return TablePayload(
            columns=["quantity[name]", "value[mixed]"],
            rows=[[k, v] for k, v in payload.values.items()],
        )
    raise CavityBlochError(f"cannot tabulate payload of type {type(payload).__name__}")


def _format_cell(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(envelope, path):
    """Deterministic CSV: header row with units, one row per record."""
    table = _table_of(envelope.payload)
    lines = [",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(_format_cell(v) for v in row))
    text = "\n".join(lines) + "\n"
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as exc:
        raise CavityBlochError(f"cannot write CSV to {path}: {exc}") from exc
    return path


def write_json(envelope, path):
    try:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(envelope.to_jsonable(), handle, indent=1, sort_keys=True)
            handle.write("\n")
    except OSError as exc:
        raise CavityBlochError(f"cannot write JSON to {path}: {exc}") from exc
    return path


def _scatter_columns(table):
    """Pick the (x, y) columns for the scatter: last two numeric columns."""
    numeric = [
        idx
        for idx in range(len(table.columns))
        if table.rows and isinstance(table.rows[0][idx], (int, float))
    ]
    if len(numeric) < 2:
        raise CavityBlochError("scatter export needs at least two numeric columns")
    return numeric[0], numeric[-1]


def write_svg_scatter(envelope, path, window=None):
    """Fixed-canvas (1200x900) point-cloud SVG with unit-labelled axes.

    `window` optionally restricts the plotted y range (full data always lives
    in the CSV/JSON exports, never here).
    """
    table = _table_of(envelope.payload)
    if not table.rows:
        raise CavityBlochError("nothing to plot")
    ix, iy = _scatter_columns(table)
    x = np.array([row[ix] for row in table.rows], dtype=float)
    y = np.array([row[iy] for row in table.rows], dtype=float)
    if window is not None:
        lo, hi = window
        keep = np.ones_like(y, dtype=bool)
        if lo is not None:
            keep &= y >= lo
        if hi is not None:
            keep &= y <= hi
        x, y = x[keep], y[keep]
        if x.size == 0:
            raise CavityBlochError("plot window excludes every point")
    pad = 60
    x0, x1 = float(x.min()), float(x.max())
    y0, y1 = float(y.min()), float(y.max())
    xspan = x1 - x0 or 1.0
    yspan = y1 - y0 or 1.0

    def sx(v):
        return pad + (v - x0) / xspan * (SVG_WIDTH - 2 * pad)

    def sy(v):
        return SVG_HEIGHT - pad - (v - y0) / yspan * (SVG_HEIGHT - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<text x="{SVG_WIDTH // 2}" y="{SVG_HEIGHT - 15}" text-anchor="middle" '
        f'font-size="16">{table.columns[ix]}</text>',
        f'<text x="20" y="{SVG_HEIGHT // 2}" text-anchor="middle" font-size="16" '
        f'transform="rotate(-90 20 {SVG_HEIGHT // 2})">{table.columns[iy]}</text>',
        f'<line x1="{pad}" y1="{SVG_HEIGHT - pad}" x2="{SVG_WIDTH - pad}" '
        f'y2="{SVG_HEIGHT - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{SVG_HEIGHT - pad}" stroke="black"/>',
        f'<text x="{pad}" y="{SVG_HEIGHT - pad + 20}" font-size="12">{x0:.6g}</text>',
        f'<text x="{SVG_WIDTH - pad}" y="{SVG_HEIGHT - pad + 20}" text-anchor="end" '
        f'font-size="12">{x1:.6g}</text>',
        f'<text x="{pad - 5}" y="{SVG_HEIGHT - pad}" text-anchor="end" '
        f'font-size="12">{y0:.6g}</text>',
        f'<text x="{pad - 5}" y="{pad + 5}" text-anchor="end" font-size="12">{y1:.6g}</text>',
    ]
    for xi, yi in zip(x, y):
        if math.isfinite(xi) and math.isfinite(yi):
            parts.append(f'<circle cx="{sx(xi):.2f}" cy="{sy(yi):.2f}" r="1" fill="black"/>')
    parts.append("</svg>")
    text = "\n".join(parts) + "\n"
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    except OSError as exc:
        raise CavityBlochError(f"cannot write SVG to {path}: {exc}") from exc
    return path


def export(envelope, path, fmt, window=None):
    """Write the envelope in one of the supported formats; returns the path."""
    if fmt == "csv":
        return write_csv(envelope, path)
    if fmt == "json":
        return write_json(envelope, path)
    if fmt == "svg-scatter":
        return write_svg_scatter(envelope, path, window=window)
    raise CavityBlochError(f"unknown export format {fmt!r}")

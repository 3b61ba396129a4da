"""Scan results, CSV emission and optional SVG line plots."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .units import UNIT_BANNER

FLAG_COLUMN = "flag"


@dataclass
class ScanResult:
    """Rows in deterministic grid order plus ``# key: value`` metadata."""

    columns: list
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def column(self, name):
        """Numeric column as a float array; blank cells become NaN."""
        i = self.columns.index(name)
        return np.array([math.nan if r[i] is None else r[i] for r in self.rows], dtype=float)

    def text_column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]


def finite_row(values: dict, columns, flags=()):
    """Order ``values`` by ``columns``; non-finite numbers are blanked and flagged.

    The flag column lists every reason, separated by ``;``.
    """
    reasons = [f for f in flags if f]
    row = []
    for name in columns:
        if name == FLAG_COLUMN:
            row.append(None)
            continue
        v = values.get(name)
        if isinstance(v, (float, np.floating)) and not math.isfinite(v):
            reasons.append(f"nonfinite:{name}")
            v = None
        row.append(v)
    if FLAG_COLUMN in columns:
        row[columns.index(FLAG_COLUMN)] = ";".join(reasons)
    return tuple(row)


def format_cell(value, precision):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        text = f"{float(value):.{precision}g}"
        return "0" if text == "-0" else text
    return str(value)


def render_csv(result: ScanResult, precision=12, version="", config_hash=""):
    """RFC-4180 text (CRLF line ends) with ``#`` metadata lines before the header."""
    buf = io.StringIO(newline="")
    meta = {"generator": f"qhe-spectro {version}".strip(), "config-sha256": config_hash,
            "units": UNIT_BANNER.removeprefix("units: "), **result.metadata}
    for key, value in meta.items():
        buf.write(f"# {key}: {value}\r\n")
    writer = csv.writer(buf, lineterminator="\r\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([format_cell(v, precision) for v in row])
    return buf.getvalue()


def read_csv(text):
    """Inverse of :func:`render_csv`: returns ``(metadata, columns, rows of str)``."""
    meta, body = {}, []
    for line in text.splitlines(keepends=True):
        if line.startswith("#") and not body:
            key, _, value = line[1:].strip().partition(": ")
            meta[key] = value
        else:
            body.append(line)
    rows = list(csv.reader(body))
    return meta, rows[0], rows[1:]


def write_svg(path, x, series: dict, xlabel, ylabel, title=""):
    """Line plot of ``series`` against ``x``. Needs matplotlib (the ``plot`` extra)."""
    try:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as exc:
        raise RuntimeError("SVG output needs matplotlib: pip install 'qhe-spectro[plot]'") from exc
    matplotlib.rcParams["svg.hashsalt"] = "qhe-spectro"
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, y in series.items():
        ax.plot(x, y, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)

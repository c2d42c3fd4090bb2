"""CSV-to-SVG rendering for the simulation figures."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .specs import FIGURE_SPECS, FigureSpec  # noqa: E402

# keep text as text in the SVG so labels stay searchable
matplotlib.rcParams["svg.fonttype"] = "none"


class RenderError(Exception):
    """Unusable input; the message names the offending file or column."""


def load_table(path: str | Path) -> dict[str, list[float]]:
    """Read a harness CSV into per-column float lists.

    Empty cells are recorded as ``nan`` so partially populated columns
    (disabled theories, periodic flags) still line up with the time axis.
    """
    path = Path(path)
    if not path.is_file():
        raise RenderError(f"input CSV not found: {path}")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise RenderError(f"input CSV has no header: {path}")
        columns: dict[str, list[float]] = {name: [] for name in reader.fieldnames}
        for row in reader:
            for name in reader.fieldnames:
                cell = row.get(name) or ""
                columns[name].append(float(cell) if cell != "" else float("nan"))
    if not next(iter(columns.values()), []):
        raise RenderError(f"input CSV has no data rows: {path}")
    return columns


def render(spec: FigureSpec, in_dir: str | Path, out_dir: str | Path) -> Path:
    """Draw one figure from its CSV; returns the written SVG path.

    The input is read-only; nothing is written unless every referenced
    column exists and carries data.
    """
    in_path = Path(in_dir) / spec.input_csv
    table = load_table(in_path)
    for column in spec.columns_used():
        if column not in table:
            raise RenderError(f"column {column!r} missing from {in_path}")

    x = table[spec.x_column]
    fig, ax = plt.subplots(figsize=(7, 4))
    try:
        for series in spec.series:
            y = table[series.column]
            style = {"linewidth": 0.8, "alpha": 0.45} if series.thin else {"linewidth": 1.6}
            if len(x) <= 30 and spec.x_column != "t":
                style["marker"] = "o"
                style["markersize"] = 3.5
            (line,) = ax.plot(x, y, label=series.label, **style)
            if series.band_column is not None:
                half = table[series.band_column]
                lo = [a - b for a, b in zip(y, half)]
                hi = [a + b for a, b in zip(y, half)]
                ax.fill_between(x, lo, hi, color=line.get_color(), alpha=0.15, linewidth=0)
        ax.set_xlabel(spec.x_label)
        ax.set_ylabel(spec.y_label)
        ax.set_title(spec.figure_id)
        ax.legend(fontsize=8)
        ax.grid(True, alpha=0.3)
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        out_path = out_dir / spec.output_name
        fig.savefig(out_path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return out_path


def render_all(in_dir: str | Path, out_dir: str | Path) -> list[Path]:
    """Driver: render every known figure id in registry order."""
    return [render(spec, in_dir, out_dir) for spec in FIGURE_SPECS.values()]

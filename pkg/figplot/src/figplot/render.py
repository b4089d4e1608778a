"""Render figure-reproduction CSVs as grouped bar charts.

Input files are the ``event,<model>...`` count CSVs written by
``bosoncert reproduce``: one row per enumerable output event (dash-joined
occupation pattern), one column of raw counts per model.  Rendering is a pure
function of the CSV contents: no statistics are computed and nothing is
re-sampled; charts show raw counts.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

#: Panel grid per figure id: two side-by-side panels for figure 1 (the two
#: input states), a 2x2 grid of per-matrix panels for figures 2-4.
LAYOUTS = {1: (1, 2), 2: (2, 2), 3: (2, 2), 4: (2, 2)}

_PANEL_FILES = {
    1: ("fig1_panel_a.csv", "fig1_panel_b.csv"),
    2: tuple(f"fig2_matrix{i}.csv" for i in range(1, 5)),
    3: tuple(f"fig3_matrix{i}.csv" for i in range(1, 5)),
    4: tuple(f"fig4_matrix{i}.csv" for i in range(1, 5)),
}


class MissingColumnError(ValueError):
    """A CSV lacks the event column or any model column."""


@dataclass(frozen=True)
class FigureSpec:
    """One render job: which figure, which CSVs, panel grid, output image."""

    figure: int
    csv_paths: tuple[Path, ...]
    layout: tuple[int, int]
    out_path: Path

    def __post_init__(self) -> None:
        if self.figure not in LAYOUTS:
            raise ValueError(f"unknown figure id {self.figure}; known: {sorted(LAYOUTS)}")
        missing = [str(p) for p in self.csv_paths if not Path(p).is_file()]
        if missing:
            raise FileNotFoundError(f"missing figure CSVs: {', '.join(missing)}")


def figure_spec(figure: int, indir, out_path) -> FigureSpec:
    """Locate the expected CSVs for a figure inside a reproduction directory."""
    if figure not in _PANEL_FILES:
        raise ValueError(f"unknown figure id {figure}; known: {sorted(_PANEL_FILES)}")
    indir = Path(indir)
    paths = tuple(indir / name for name in _PANEL_FILES[figure])
    return FigureSpec(figure, paths, LAYOUTS[figure], Path(out_path))


def read_counts(path) -> tuple[list[str], list[str], list[list[float]]]:
    """Parse one panel CSV into (model names, event labels, per-model counts).

    Events are returned in lexicographic order of their occupation patterns
    regardless of file order.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "event" or len(header) < 2:
            raise MissingColumnError(
                f"{path}: expected header 'event,<model>...', got {header}"
            )
        models = header[1:]
        rows: list[tuple[tuple[int, ...], list[float]]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise MissingColumnError(
                    f"{path}:{lineno}: expected {len(header)} fields, got {len(row)}"
                )
            try:
                key = tuple(int(v) for v in row[0].split("-"))
                values = [float(v) for v in row[1:]]
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
            rows.append((key, values))
    rows.sort(key=lambda kv: kv[0])
    events = ["-".join(str(v) for v in key) for key, _ in rows]
    series = [[values[i] for _, values in rows] for i in range(len(models))]
    return models, events, series


def render(spec: FigureSpec):
    """Draw the grouped bar panels and write the image; returns the Figure."""
    nrows, ncols = spec.layout
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(7.0 * ncols, 4.5 * nrows), squeeze=False
    )
    flat_axes = [ax for row in axes for ax in row]
    for ax in flat_axes[len(spec.csv_paths):]:
        ax.set_axis_off()
    for ax, path in zip(flat_axes, spec.csv_paths):
        models, events, series = read_counts(path)
        positions = range(len(events))
        width = 0.8 / max(len(models), 1)
        for index, (model, counts) in enumerate(zip(models, series)):
            offsets = [p + (index - (len(models) - 1) / 2) * width for p in positions]
            ax.bar(offsets, counts, width=width, label=model)
        ax.set_xticks(list(positions))
        ax.set_xticklabels(events, rotation=90, fontsize=6)
        ax.set_ylabel("counts")
        ax.set_title(Path(path).stem)
        ax.legend(fontsize=8)
    fig.tight_layout()
    spec.out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.out_path)
    plt.close(fig)
    return fig

"""Grouped bar charts for bosoncert figure-reproduction CSVs."""

__version__ = "0.1.0"

from .render import FigureSpec, MissingColumnError, figure_spec, read_counts, render

__all__ = [
    "FigureSpec",
    "MissingColumnError",
    "figure_spec",
    "read_counts",
    "render",
]

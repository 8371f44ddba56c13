"""Line charts of schedulability ratios from experiment CSVs."""

from .render import EmptyCsv, MissingColumn, PlotSpec, build_figure, load_rows, render

__all__ = ["EmptyCsv", "MissingColumn", "PlotSpec", "build_figure", "load_rows", "render"]

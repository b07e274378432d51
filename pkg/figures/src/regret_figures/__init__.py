"""Benchmark regret panel rendering from schema=1 summary CSVs."""

__version__ = "0.1.0"

from .render import DataError, PanelSpec, build_figure, main, read_summary, render_panel

__all__ = [
    "__version__",
    "DataError",
    "PanelSpec",
    "build_figure",
    "main",
    "read_summary",
    "render_panel",
]

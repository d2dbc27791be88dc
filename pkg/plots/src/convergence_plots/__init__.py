"""Log-log convergence figures from sweep CSVs."""

from .render import CSV_HEADER, PlotDataError, PlotRequest, render_convergence

__all__ = ["CSV_HEADER", "PlotDataError", "PlotRequest", "render_convergence"]
__version__ = "0.1.0"

"""Batch figure rendering for gplink CSV outputs.

Reads the harness CSVs (documented, versioned headers) and renders static
vector figures: the six-panel sliding-window forecast narrative and the
achieved-vs-target outage plot. Every plotted number comes straight from a
CSV cell; no simulation logic lives here.
"""

__version__ = "0.1.0"

from gplink_figs.data import (
    CsvFormatError,
    load_outage_table,
    load_panels,
    load_prior,
)
from gplink_figs.outage_plot import FigureSpec as OutageFigureSpec
from gplink_figs.outage_plot import build_outage_figure, render_outage_plot
from gplink_figs.prediction_panels import FigureSpec as PanelsFigureSpec
from gplink_figs.prediction_panels import (
    build_prediction_figure,
    render_prediction_panels,
)

__all__ = [
    "CsvFormatError",
    "OutageFigureSpec",
    "PanelsFigureSpec",
    "build_outage_figure",
    "build_prediction_figure",
    "load_outage_table",
    "load_panels",
    "load_prior",
    "render_outage_plot",
    "render_prediction_panels",
]

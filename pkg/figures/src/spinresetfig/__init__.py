"""Figure scripts for the spin-chain reset CSV outputs.

This package consumes CSV files and their JSON manifests only; it never
recomputes any physics and has no dependency on the simulation package.
"""

from .plot import (
    EmptyData,
    FigureError,
    MissingColumn,
    NonRectangularGrid,
    PlotSpec,
    plot_curve,
    plot_heatmap,
    sample_csv_path,
)

__version__ = "1.0.0"

__all__ = [
    "EmptyData",
    "FigureError",
    "MissingColumn",
    "NonRectangularGrid",
    "PlotSpec",
    "plot_curve",
    "plot_heatmap",
    "sample_csv_path",
    "__version__",
]

"""Post-processing figures for slowshot experiment CSVs.

Strictly downstream of the CSV artifacts: nothing here simulates anything,
it only reads the per-replica sample files the experiment CLI writes and
renders the standard figure set (ECDF overlays against closed-form CDFs,
QQ plots, uniformity decay profiles, 2-d rank scatters).
"""

from slowshot_plots.figures import FigureSpec, render

__all__ = ["FigureSpec", "render"]

__version__ = "0.1.0"

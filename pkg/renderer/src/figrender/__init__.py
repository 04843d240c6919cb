"""figrender: standalone renderer for brightdark CLI outputs."""

__version__ = "0.1.0"

from .render import FigureSpec, RenderReport, render, read_csv

__all__ = ["FigureSpec", "RenderReport", "render", "read_csv"]

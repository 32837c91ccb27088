"""CSV -> figure renderer for fermidce output."""

from .render import PlotSpec, SchemaError, build_figure, render

__version__ = "0.1.0"

__all__ = ["PlotSpec", "SchemaError", "build_figure", "render", "__version__"]

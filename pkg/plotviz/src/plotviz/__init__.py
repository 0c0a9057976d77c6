"""Figure renderer for decomposition export bundles."""

from .render import (
    PlotSpec,
    RenderedFigure,
    load_bundle,
    render_force_plot,
    render_main_effects,
)

__version__ = "0.1.0"

__all__ = [
    "PlotSpec",
    "RenderedFigure",
    "load_bundle",
    "render_force_plot",
    "render_main_effects",
]

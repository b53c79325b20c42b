"""Image renderers for the subdom figure tables."""

from .render import FigureJob, RenderResult, SchemaError, render, render_cli

__version__ = "0.1.0"

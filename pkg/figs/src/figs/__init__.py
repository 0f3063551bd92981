"""Figure rendering for benchmark-harness CSV outputs.

Reads the sweep CSVs (and the coherence / coefficient profile dumps) the
benchmark CLI emits and renders the corresponding figure layouts.  The
plotter never recomputes statistics; it only displays what the CSVs hold.
"""

__version__ = "0.1.0"

from .render import FigureSpec, RenderError, load_spec, render

__all__ = ["FigureSpec", "RenderError", "load_spec", "render", "__version__"]

"""Figure rendering for iotrust simulation output.

Reads the CSV tables written by the simulator's ``figure`` command and draws
one labelled SVG per figure id. This package never recomputes scores; the
CSVs are the single source of numbers.
"""

__version__ = "0.1.0"

from .render import RenderError, load_table, render, render_all  # noqa: F401
from .specs import FIGURE_SPECS, FigureSpec, SeriesSpec  # noqa: F401

"""Figure rendering for the pinned-billiards simulator's CSV tables."""

from .errors import FigureError, MissingFileError, SchemaMismatchError
from .render import KINDS, render
from .tables import Table, read_table

__version__ = "0.1.0"

__all__ = [
    "FigureError", "MissingFileError", "SchemaMismatchError",
    "KINDS", "render", "Table", "read_table", "__version__",
]

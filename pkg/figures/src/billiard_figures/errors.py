class FigureError(Exception):
    """Base class for figure generation failures."""


class MissingFileError(FigureError):
    """An input table path does not exist."""


class SchemaMismatchError(FigureError):
    """A table's header or contents do not fit the requested figure kind."""

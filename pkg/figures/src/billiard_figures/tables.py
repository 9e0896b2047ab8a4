"""Reading the simulator's delimited text tables.

Tables are comma-separated with a header row, optionally preceded by a
single metadata line of the form ``# key=value key=value ...``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import MissingFileError, SchemaMismatchError


@dataclass
class Table:
    path: Path
    header: list[str]
    meta: dict[str, str] = field(default_factory=dict)
    columns: dict[str, np.ndarray] = field(default_factory=dict)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    @property
    def n_rows(self) -> int:
        return 0 if not self.header else len(self.columns[self.header[0]])

    def meta_float(self, key: str) -> float:
        try:
            return float(self.meta[key])
        except KeyError:
            raise SchemaMismatchError(f"{self.path}: missing {key!r} in metadata")
        except ValueError:
            raise SchemaMismatchError(
                f"{self.path}: metadata {key!r} is not numeric")


def read_table(path: str | Path) -> Table:
    path = Path(path)
    if not path.exists():
        raise MissingFileError(f"no such table: {path}")
    lines = path.read_text().splitlines()
    meta: dict[str, str] = {}
    if lines and lines[0].startswith("# "):
        for pair in lines.pop(0)[2:].split(" "):
            key, _, value = pair.partition("=")
            meta[key] = value
    if not lines:
        raise SchemaMismatchError(f"{path}: empty table, no header row")
    header = lines[0].split(",")
    raw: list[list[str]] = []
    for ln, line in enumerate(lines[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise SchemaMismatchError(
                f"{path}:{ln}: {len(cells)} cells for {len(header)} columns")
        raw.append(cells)
    columns: dict[str, np.ndarray] = {}
    for k, name in enumerate(header):
        cells = [row[k] for row in raw]
        try:
            columns[name] = np.array([float(c) for c in cells])
        except ValueError:
            columns[name] = np.array(cells, dtype=object)
    return Table(path=path, header=header, meta=meta, columns=columns)


def require_columns(table: Table, names: list[str], kind: str) -> None:
    missing = [n for n in names if n not in table.columns]
    if missing:
        raise SchemaMismatchError(
            f"{table.path}: {kind} needs columns {names}, missing {missing} "
            f"(found {table.header})")
    if table.n_rows == 0:
        raise SchemaMismatchError(f"{table.path}: {kind} needs at least one row")

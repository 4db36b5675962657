from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = ["CurveTable", "NonFiniteValueError"]


class NonFiniteValueError(ValueError):
    pass


@dataclass
class CurveTable:
    """Ordered numeric columns of equal length, written as CSV."""

    columns: dict[str, np.ndarray] = field(default_factory=dict)

    def add(self, name: str, values) -> None:
        if name in self.columns:
            raise ValueError(f"duplicate column name {name!r}")
        arr = np.asarray(values, dtype=float).ravel()
        if self.columns and arr.size != self.row_count:
            raise ValueError(f"column {name!r} has {arr.size} rows, table has {self.row_count}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteValueError(f"column {name!r} contains NaN or Inf")
        self.columns[name] = arr

    @property
    def row_count(self) -> int:
        return next(iter(self.columns.values())).size if self.columns else 0

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def write_csv(self, stream) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(self.names)
        cols = list(self.columns.values())
        for i in range(self.row_count):
            writer.writerow([f"{c[i]:.16e}" for c in cols])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()

    @classmethod
    def read_csv(cls, text: str) -> "CurveTable":
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], rows[1:]
        table = cls()
        for j, name in enumerate(header):
            table.add(name, [float(r[j]) for r in body])
        return table


def format_param(value: float) -> str:
    """Short, stable rendering of a parameter value for column names."""
    if float(value).is_integer() and abs(value) < 1e15:
        return str(int(value))
    return f"{value:g}" if math.isfinite(value) else str(value)

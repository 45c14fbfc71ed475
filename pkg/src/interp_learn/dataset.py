"""Labeled samples and their CSV representation."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class LabeledDataset:
    """``n`` points in ``R^d`` with real labels (``{0, 1}`` for binary problems)."""

    points: np.ndarray
    labels: np.ndarray
    binary: bool = False

    def __post_init__(self):
        X = np.asarray(self.points, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        y = np.asarray(self.labels, dtype=float).reshape(-1)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise ValueError(f"points must be a non-empty (n, d) array, got {X.shape}")
        if y.shape[0] != X.shape[0]:
            raise ValueError(f"{X.shape[0]} points but {y.shape[0]} labels")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise ValueError("dataset entries must be finite")
        if self.binary and not np.all((y == 0) | (y == 1)):
            raise ValueError("binary dataset labels must be 0 or 1")
        object.__setattr__(self, "points", X)
        object.__setattr__(self, "labels", y)

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    def to_csv(self, path=None):
        """Write ``x0,...,x{d-1},y`` rows; returns the text when ``path`` is None."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"x{j}" for j in range(self.dim)] + ["y"])
        for x, y in zip(self.points, self.labels):
            w.writerow([repr(float(v)) for v in x] + [repr(float(y))])
        text = buf.getvalue()
        if path is None:
            return text
        Path(path).write_text(text)
        return None

    @classmethod
    def from_csv(cls, path_or_text, binary=None):
        text = _read_text(path_or_text)
        header, rows = _parse_csv(text)
        if not header or header[-1] != "y":
            raise ValueError("dataset CSV must end with a 'y' column")
        arr = np.array(rows, dtype=float).reshape(len(rows), len(header))
        X, y = arr[:, :-1], arr[:, -1]
        if binary is None:
            binary = bool(np.all((y == 0) | (y == 1)))
        return cls(X, y, binary)


def read_points_csv(path_or_text):
    """Query points from a CSV with an ``x0,...`` header (a trailing ``y`` is ignored)."""
    header, rows = _parse_csv(_read_text(path_or_text))
    arr = np.array(rows, dtype=float).reshape(len(rows), len(header))
    if header and header[-1] == "y":
        arr = arr[:, :-1]
    return arr


def _read_text(path_or_text):
    if isinstance(path_or_text, Path) or (
        isinstance(path_or_text, str) and "\n" not in path_or_text
    ):
        return Path(path_or_text).read_text()
    return path_or_text


def _parse_csv(text):
    reader = csv.reader(io.StringIO(text))
    header = [h.strip() for h in next(reader)]
    rows = [[float(v) for v in row] for row in reader if row]
    return header, rows

"""Error metric and correlation reporting."""

from __future__ import annotations

import csv
import dataclasses
from pathlib import Path

import numpy as np

from ..errors import DomainError
from ..validation import check_vector
from .data import TabularDataset


def mae(y, yhat) -> float:
    """Mean absolute error between true and predicted values."""
    y = check_vector(y, "y")
    yhat = check_vector(yhat, "yhat")
    if y.size != yhat.size:
        raise DomainError(f"length mismatch: y has {y.size}, yhat has {yhat.size}")
    return float(np.abs(y - yhat).mean())


@dataclasses.dataclass
class CorrelationMatrix:
    """Pearson matrix with an explicit mask for undefined entries.

    ``defined[i, j]`` is False where either column has zero variance; the
    corresponding value is 0.0 and must not be interpreted.
    """

    names: tuple[str, ...]
    values: np.ndarray
    defined: np.ndarray

    def get(self, a: str, b: str) -> float | None:
        i, j = self.names.index(a), self.names.index(b)
        return float(self.values[i, j]) if self.defined[i, j] else None

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["column", *self.names])
            for i, name in enumerate(self.names):
                row = [
                    f"{self.values[i, j]:.6f}" if self.defined[i, j] else "undefined"
                    for j in range(len(self.names))
                ]
                writer.writerow([name, *row])


def correlation_matrix(data: TabularDataset, include_targets: bool = True) -> CorrelationMatrix:
    """Pearson correlations between feature (and optionally target) columns."""
    if data.n_rows < 2:
        raise DomainError("correlation needs at least 2 rows")
    if include_targets:
        columns = np.hstack([data.features, data.targets])
        names = data.feature_names + data.target_names
    else:
        columns = data.features
        names = data.feature_names

    centered = columns - columns.mean(axis=0)
    norms = np.sqrt((centered**2).sum(axis=0))
    nonzero = norms > 0.0
    safe = np.where(nonzero, norms, 1.0)
    unit = centered / safe
    values = unit.T @ unit
    defined = np.outer(nonzero, nonzero)

    values = np.clip(values, -1.0, 1.0)
    values[~defined] = 0.0
    np.fill_diagonal(values, 1.0)  # a column moves perfectly with itself
    np.fill_diagonal(defined, True)
    return CorrelationMatrix(names=tuple(names), values=values, defined=defined)

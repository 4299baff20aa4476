"""Feature standardization with population statistics."""

from __future__ import annotations

import dataclasses

import numpy as np

from ..base import ParamsMixin, check_fitted
from ..errors import DomainError
from ..validation import check_matrix
from .data import TabularDataset


@dataclasses.dataclass(frozen=True)
class ScalerParams:
    """Per-feature mean/std captured at fit time; constant columns flagged."""

    means: np.ndarray
    stds: np.ndarray
    constant: np.ndarray

    def __post_init__(self):
        if not (len(self.means) == len(self.stds) == len(self.constant)):
            raise DomainError("scaler parameter arrays must have equal length")
        if (np.asarray(self.stds) < 0).any():
            raise DomainError("stds must be non-negative")


class StandardScaler(ParamsMixin):
    """Center to mean 0 and scale to unit *population* std (divide by N).

    Constant columns are flagged and mapped to 0 instead of dividing by a
    zero std; ``inverse_transform`` restores them exactly, so the
    round-trip is lossless for every column.
    """

    def fit(self, X) -> "StandardScaler":
        X = check_matrix(X, "X")
        if X.shape[0] < 2:
            raise DomainError("standardization needs at least 2 rows")
        means = X.mean(axis=0)
        stds = X.std(axis=0)  # population convention
        constant = stds == 0.0
        self.params_ = ScalerParams(means=means, stds=stds, constant=constant)
        return self

    def transform(self, X) -> np.ndarray:
        check_fitted(self, "params_")
        p = self.params_
        X = check_matrix(X, "X", n_columns=len(p.means))
        safe = np.where(p.constant, 1.0, p.stds)
        return (X - p.means) / safe

    def fit_transform(self, X) -> np.ndarray:
        return self.fit(X).transform(X)

    def inverse_transform(self, Z) -> np.ndarray:
        check_fitted(self, "params_")
        p = self.params_
        Z = check_matrix(Z, "Z", n_columns=len(p.means))
        safe = np.where(p.constant, 1.0, p.stds)
        return Z * safe + p.means


def standardize(data: TabularDataset) -> tuple[TabularDataset, ScalerParams]:
    """Standardize a dataset's features, returning the fitted parameters."""
    scaler = StandardScaler().fit(data.features)
    return data.with_features(scaler.transform(data.features)), scaler.params_

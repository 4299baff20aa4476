"""k-nearest-neighbors regression on standardized features."""

from __future__ import annotations

import numpy as np

from ..base import ParamsMixin, check_fitted
from ..errors import DomainError
from ..validation import check_matrix, check_vector
from .scaler import ScalerParams


class KNNRegressor(ParamsMixin):
    """Uniform-weight KNN with Euclidean distance.

    Expects features already standardized (the harness owns scaling and
    records the scaler on the model). Distance ties are broken by lower
    training-row index, which makes predictions fully deterministic.
    """

    def __init__(self, n_neighbors: int = 5):
        self.n_neighbors = n_neighbors

    def fit(self, X, y, scaler_params: ScalerParams | None = None) -> "KNNRegressor":
        X = check_matrix(X, "X")
        y = check_vector(y, "y", length=X.shape[0])
        k = self.n_neighbors
        if not isinstance(k, int) or k < 1:
            raise DomainError(f"n_neighbors={k!r} must be a positive integer")
        if k > X.shape[0]:
            raise DomainError(f"n_neighbors={k} exceeds {X.shape[0]} training rows")
        self.X_ = X
        self.y_ = y
        self.scaler_params_ = scaler_params
        return self

    def predict(self, X) -> np.ndarray:
        check_fitted(self, "X_")
        X = check_matrix(X, "X", n_columns=self.X_.shape[1])
        out = np.empty(X.shape[0])
        # chunked so the (queries x train) distance matrix stays small
        for start in range(0, X.shape[0], 512):
            chunk = X[start : start + 512]
            d2 = ((chunk[:, None, :] - self.X_[None, :, :]) ** 2).sum(axis=2)
            # squared distances suffice for ranking; stable argsort keeps
            # the lower-index tie rule
            neighbor_idx = np.argsort(d2, axis=1, kind="stable")[:, : self.n_neighbors]
            out[start : start + 512] = self.y_[neighbor_idx].mean(axis=1)
        return out

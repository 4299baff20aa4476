"""CART regression trees and a bagged random forest, from scratch.

Splits minimize within-node variance (equivalently squared error), found
by an O(N log N) cumulative-sum scan per candidate feature. The forest
bootstraps rows per tree and subsamples ceil(F/3) candidate features at
every split, the common regression default. Everything is driven by one
seeded generator, so a fixed seed reproduces the ensemble exactly.
"""

from __future__ import annotations

import math

import numpy as np

from ..base import ParamsMixin, check_fitted
from ..errors import DomainError
from ..validation import check_matrix, check_vector
from .scaler import ScalerParams


class _Node:
    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, value: float):
        self.feature = -1
        self.threshold = 0.0
        self.left = None
        self.right = None
        self.value = value

    @property
    def is_leaf(self) -> bool:
        return self.left is None


def _best_split(X, y, feature_indices, min_leaf):
    """Return (feature, threshold, gain) for the best variance-reducing split."""
    n = y.size
    total_sum = y.sum()
    total_sq = (y * y).sum()
    parent_sse = total_sq - total_sum * total_sum / n

    best = (None, 0.0, 1e-12)  # feature, threshold, required gain floor
    for j in feature_indices:
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        ys = y[order]
        csum = np.cumsum(ys)
        csq = np.cumsum(ys * ys)
        # split after position i (1-based count on the left)
        for i in range(min_leaf, n - min_leaf + 1):
            if i < n and xs[i - 1] == xs[i]:
                continue  # cannot separate equal values
            if i == n:
                break
            left_sse = csq[i - 1] - csum[i - 1] ** 2 / i
            right_n = n - i
            right_sum = total_sum - csum[i - 1]
            right_sse = (total_sq - csq[i - 1]) - right_sum**2 / right_n
            gain = parent_sse - left_sse - right_sse
            if gain > best[2]:
                best = (j, (xs[i - 1] + xs[i]) / 2.0, gain)
    return best


class DecisionTreeRegressor(ParamsMixin):
    """Single CART regression tree; deterministic given (data, rng state)."""

    def __init__(
        self,
        max_depth: int | None = None,
        min_samples_leaf: int = 1,
        max_features: int | None = None,
    ):
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features

    def fit(self, X, y, rng: np.random.Generator | None = None) -> "DecisionTreeRegressor":
        X = check_matrix(X, "X")
        y = check_vector(y, "y", length=X.shape[0])
        if self.min_samples_leaf < 1:
            raise DomainError(f"min_samples_leaf={self.min_samples_leaf} must be >= 1")
        rng = rng if rng is not None else np.random.default_rng()
        self.n_features_ = X.shape[1]
        self.root_ = self._build(X, y, depth=0, rng=rng)
        return self

    def _build(self, X, y, depth, rng) -> _Node:
        node = _Node(value=float(y.mean()))
        if y.size < 2 * self.min_samples_leaf:
            return node
        if self.max_depth is not None and depth >= self.max_depth:
            return node
        if np.all(y == y[0]):
            return node

        n_features = X.shape[1]
        if self.max_features is not None and self.max_features < n_features:
            candidates = np.sort(rng.choice(n_features, size=self.max_features, replace=False))
        else:
            candidates = np.arange(n_features)

        feature, threshold, _ = _best_split(X, y, candidates, self.min_samples_leaf)
        if feature is None:
            return node
        mask = X[:, feature] <= threshold
        node.feature = int(feature)
        node.threshold = float(threshold)
        node.left = self._build(X[mask], y[mask], depth + 1, rng)
        node.right = self._build(X[~mask], y[~mask], depth + 1, rng)
        return node

    def predict(self, X) -> np.ndarray:
        check_fitted(self, "root_")
        X = check_matrix(X, "X", n_columns=self.n_features_)
        out = np.empty(X.shape[0])
        for i, row in enumerate(X):
            node = self.root_
            while not node.is_leaf:
                node = node.left if row[node.feature] <= node.threshold else node.right
            out[i] = node.value
        return out


class RandomForestRegressor(ParamsMixin):
    """Bootstrap-aggregated CART trees; prediction is the per-tree mean.

    ``max_features=None`` uses the ceil(F/3) regression default at each
    split. ``bootstrap=False`` trains every tree on the full sample, which
    makes a single full-depth tree memorize the training set.
    """

    def __init__(
        self,
        n_trees: int = 100,
        max_depth: int | None = None,
        min_samples_leaf: int = 1,
        max_features: int | None = None,
        bootstrap: bool = True,
        seed: int = 0,
    ):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_samples_leaf = min_samples_leaf
        self.max_features = max_features
        self.bootstrap = bootstrap
        self.seed = seed

    def fit(self, X, y, scaler_params: ScalerParams | None = None) -> "RandomForestRegressor":
        X = check_matrix(X, "X")
        y = check_vector(y, "y", length=X.shape[0])
        if self.n_trees < 1:
            raise DomainError(f"n_trees={self.n_trees} must be >= 1")
        rng = np.random.default_rng(self.seed)
        n = X.shape[0]
        per_split = (
            self.max_features
            if self.max_features is not None
            else max(1, math.ceil(X.shape[1] / 3))
        )
        self.trees_: list[DecisionTreeRegressor] = []
        for _ in range(self.n_trees):
            tree = DecisionTreeRegressor(
                max_depth=self.max_depth,
                min_samples_leaf=self.min_samples_leaf,
                max_features=per_split,
            )
            if self.bootstrap:
                rows = rng.integers(0, n, size=n)
                tree.fit(X[rows], y[rows], rng=rng)
            else:
                tree.fit(X, y, rng=rng)
            self.trees_.append(tree)
        self.scaler_params_ = scaler_params
        return self

    def predict_per_tree(self, X) -> np.ndarray:
        """Stacked (n_trees, n_rows) predictions, exposed for auditing."""
        check_fitted(self, "trees_")
        return np.vstack([tree.predict(X) for tree in self.trees_])

    def predict(self, X) -> np.ndarray:
        return self.predict_per_tree(X).mean(axis=0)

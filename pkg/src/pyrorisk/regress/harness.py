"""Experiment harness: one fitted model per FWI sub-index target, MAE table out.

The regressor registry is extensible; the bundled kinds are ``knn`` and
``rf``. Scaling is owned here: features are standardized once, the scaler
is recorded on every fitted model, and test rows are transformed with the
training-set parameters before prediction.
"""

from __future__ import annotations

import csv
import dataclasses
from pathlib import Path
from typing import Callable

import numpy as np

from ..errors import DomainError
from .data import TabularDataset
from .forest import RandomForestRegressor
from .knn import KNNRegressor
from .metrics import mae
from .scaler import ScalerParams, StandardScaler

RegressorFactory = Callable[..., object]

REGISTRY: dict[str, RegressorFactory] = {
    "knn": KNNRegressor,
    "rf": RandomForestRegressor,
}


def fit_regressor(
    kind: str,
    train: TabularDataset,
    target: str,
    scaler_params: ScalerParams | None = None,
    **hyper,
):
    """Fit one registered regressor on (already standardized) features."""
    if kind not in REGISTRY:
        raise DomainError(f"unknown regressor kind {kind!r}; have {sorted(REGISTRY)}")
    model = REGISTRY[kind](**hyper)
    model.fit(train.features, train.target_column(target), scaler_params=scaler_params)
    return model


@dataclasses.dataclass
class MaeTable:
    """Regressor-by-target MAE grid."""

    regressors: tuple[str, ...]
    targets: tuple[str, ...]
    values: np.ndarray

    def get(self, regressor: str, target: str) -> float:
        return float(self.values[self.regressors.index(regressor), self.targets.index(target)])

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["regressor"] + [f"{t}_mae" for t in self.targets])
            for i, name in enumerate(self.regressors):
                writer.writerow([name] + [f"{v:.6f}" for v in self.values[i]])


def evaluate(models: dict[str, dict[str, object]], test: TabularDataset) -> MaeTable:
    """Score fitted models on a test set already in model feature space.

    ``models`` maps regressor kind -> {target name -> fitted model}; every
    regressor must cover every test target column.
    """
    regressors = tuple(models)
    targets = test.target_names
    values = np.zeros((len(regressors), len(targets)))
    for i, kind in enumerate(regressors):
        per_target = models[kind]
        for j, target in enumerate(targets):
            if target not in per_target:
                raise DomainError(f"regressor {kind!r} has no model for target {target!r}")
            yhat = per_target[target].predict(test.features)
            values[i, j] = mae(test.target_column(target), yhat)
    return MaeTable(regressors=regressors, targets=targets, values=values)


def run_experiment(
    train: TabularDataset,
    test: TabularDataset,
    kinds: tuple[str, ...] = ("rf", "knn"),
    hyper: dict[str, dict] | None = None,
) -> MaeTable:
    """Standardize on train, fit every kind per target, evaluate on test."""
    hyper = hyper or {}
    scaler = StandardScaler().fit(train.features)
    train_std = train.with_features(scaler.transform(train.features))
    test_std = test.with_features(scaler.transform(test.features))

    models: dict[str, dict[str, object]] = {}
    for kind in kinds:
        models[kind] = {
            target: fit_regressor(
                kind, train_std, target, scaler_params=scaler.params_, **hyper.get(kind, {})
            )
            for target in train.target_names
        }
    return evaluate(models, test_std)

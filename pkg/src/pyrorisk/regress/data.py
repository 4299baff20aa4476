"""Tabular dataset container and CSV ingestion for the regression harness."""

from __future__ import annotations

import csv
import dataclasses
from pathlib import Path

import numpy as np

from ..errors import DomainError
from ..validation import check_matrix, check_unique_names

FEATURE_COLUMNS = ("temp_c", "rh_pct", "wind_kmh", "rain_mm")
TARGET_COLUMNS = ("ffmc", "dmc", "dc", "isi")


@dataclasses.dataclass
class TabularDataset:
    """Feature matrix plus named target columns; rows carry opaque ids."""

    features: np.ndarray
    targets: np.ndarray
    feature_names: tuple[str, ...]
    target_names: tuple[str, ...]
    row_ids: tuple[str, ...] = ()

    def __post_init__(self):
        self.features = check_matrix(self.features, "features")
        self.targets = check_matrix(self.targets, "targets")
        if self.targets.shape[0] != self.features.shape[0]:
            raise DomainError(
                f"targets have {self.targets.shape[0]} rows, features {self.features.shape[0]}"
            )
        self.feature_names = check_unique_names(self.feature_names, "feature")
        self.target_names = check_unique_names(self.target_names, "target")
        if len(self.feature_names) != self.features.shape[1]:
            raise DomainError("feature_names length does not match feature columns")
        if len(self.target_names) != self.targets.shape[1]:
            raise DomainError("target_names length does not match target columns")
        if not self.row_ids:
            self.row_ids = tuple(str(i) for i in range(self.n_rows))
        elif len(self.row_ids) != self.n_rows:
            raise DomainError("row_ids length does not match row count")

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    def target_column(self, name: str) -> np.ndarray:
        if name not in self.target_names:
            raise DomainError(f"target column {name!r} not in {self.target_names}")
        return self.targets[:, self.target_names.index(name)]

    def take(self, indices: np.ndarray) -> "TabularDataset":
        return TabularDataset(
            features=self.features[indices],
            targets=self.targets[indices],
            feature_names=self.feature_names,
            target_names=self.target_names,
            row_ids=tuple(self.row_ids[i] for i in indices),
        )

    def with_features(self, features: np.ndarray) -> "TabularDataset":
        return TabularDataset(
            features=features,
            targets=self.targets,
            feature_names=self.feature_names,
            target_names=self.target_names,
            row_ids=self.row_ids,
        )


def load_joined_csv(weather_csv: str | Path, report_csv: str | Path) -> TabularDataset:
    """Join a weather CSV and an FWI report CSV on date into one dataset.

    Weather schema: ``date,lat,lon,temp_c,rh_pct,wind_kmh,rain_mm``;
    report schema: ``date,ffmc,dmc,dc,isi,bui,fwi``. Rows present in only
    one file are dropped (with a DomainError if nothing joins).
    """
    weather: dict[str, list[float]] = {}
    with open(weather_csv, newline="") as fh:
        for row in csv.DictReader(fh):
            try:
                weather[row["date"]] = [float(row[c]) for c in FEATURE_COLUMNS]
            except (KeyError, ValueError) as exc:
                raise DomainError(f"bad weather row {row!r}: {exc}") from exc

    features, targets, row_ids = [], [], []
    with open(report_csv, newline="") as fh:
        for row in csv.DictReader(fh):
            date = row.get("date")
            if date not in weather:
                continue
            try:
                targets.append([float(row[c]) for c in TARGET_COLUMNS])
            except (KeyError, ValueError) as exc:
                raise DomainError(f"bad report row {row!r}: {exc}") from exc
            features.append(weather[date])
            row_ids.append(date)

    if not features:
        raise DomainError("no rows joined between weather and report CSVs")
    return TabularDataset(
        features=np.array(features),
        targets=np.array(targets),
        feature_names=FEATURE_COLUMNS,
        target_names=TARGET_COLUMNS,
        row_ids=tuple(row_ids),
    )


def train_test_split(
    data: TabularDataset, test_fraction: float = 0.2, seed: int = 0
) -> tuple[TabularDataset, TabularDataset]:
    """Seeded shuffle then contiguous split; test gets ``floor(N*fraction)``."""
    if not 0.0 < test_fraction < 1.0:
        raise DomainError(f"test_fraction={test_fraction} outside (0, 1)")
    rng = np.random.default_rng(seed)
    order = rng.permutation(data.n_rows)
    n_test = int(data.n_rows * test_fraction)
    if n_test == 0 or n_test == data.n_rows:
        raise DomainError(f"split of {data.n_rows} rows at {test_fraction} leaves a side empty")
    return data.take(order[n_test:]), data.take(order[:n_test])

"""Regression harness: scale meteorological features, fit per-index
regressors, and report mean absolute errors plus correlations."""

from .data import TabularDataset, load_joined_csv, train_test_split
from .forest import DecisionTreeRegressor, RandomForestRegressor
from .harness import MaeTable, evaluate, fit_regressor, run_experiment
from .knn import KNNRegressor
from .metrics import CorrelationMatrix, correlation_matrix, mae
from .scaler import ScalerParams, StandardScaler, standardize

__all__ = [
    "TabularDataset",
    "load_joined_csv",
    "train_test_split",
    "StandardScaler",
    "ScalerParams",
    "standardize",
    "mae",
    "CorrelationMatrix",
    "correlation_matrix",
    "KNNRegressor",
    "DecisionTreeRegressor",
    "RandomForestRegressor",
    "MaeTable",
    "fit_regressor",
    "evaluate",
    "run_experiment",
]

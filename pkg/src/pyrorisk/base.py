"""Minimal scikit-learn-style estimator plumbing.

Estimators follow the usual conventions: hyperparameters are ``__init__``
keyword arguments stored verbatim, fitted state lives in trailing-underscore
attributes, and ``get_params``/``set_params`` make the objects clonable by
tools that duck-type the scikit-learn API.
"""

from __future__ import annotations

import inspect

from .errors import NotFittedError


class ParamsMixin:
    """Provides ``get_params``/``set_params`` derived from ``__init__``."""

    @classmethod
    def _param_names(cls) -> list[str]:
        sig = inspect.signature(cls.__init__)
        return [
            name
            for name, p in sig.parameters.items()
            if name != "self" and p.kind not in (p.VAR_POSITIONAL, p.VAR_KEYWORD)
        ]

    def get_params(self, deep: bool = True) -> dict:
        return {name: getattr(self, name) for name in self._param_names()}

    def set_params(self, **params):
        valid = set(self._param_names())
        for name, value in params.items():
            if name not in valid:
                raise ValueError(f"invalid parameter {name!r} for {type(self).__name__}")
            setattr(self, name, value)
        return self

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.get_params().items())
        return f"{type(self).__name__}({args})"


def check_fitted(estimator, attribute: str) -> None:
    if not hasattr(estimator, attribute):
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted; call fit() before predict/transform"
        )

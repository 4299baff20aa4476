"""Layer descriptions: dimensions, activation, frozen flag, optional weights.

A layer may exist dimensions-only (for shape propagation and parameter
accounting) or carry materialized float32 weights for inference.
"""

from __future__ import annotations

import dataclasses
import enum
from typing import Union

import numpy as np

from ..errors import DomainError
from ..validation import check_int
from . import ops


class Activation(enum.IntEnum):
    NONE = 0
    RELU = 1
    LEAKY_RELU = 2
    TANH = 3
    SIGMOID = 4
    SOFTMAX = 5


def apply_activation(x: np.ndarray, activation: Activation, alpha: float = 0.01) -> np.ndarray:
    if activation is Activation.NONE:
        return x
    if activation is Activation.RELU:
        return ops.relu(x)
    if activation is Activation.LEAKY_RELU:
        return ops.leaky_relu(x, alpha)
    if activation is Activation.TANH:
        return ops.tanh(x).astype(np.float32)
    if activation is Activation.SIGMOID:
        return ops.sigmoid(x).astype(np.float32)
    if activation is Activation.SOFTMAX:
        return ops.softmax(x).astype(np.float32)
    raise DomainError(f"unknown activation {activation!r}")


def _as_f32(name: str, arr, shape: tuple[int, ...]) -> np.ndarray:
    arr = np.asarray(arr, dtype=np.float32)
    if arr.shape != shape:
        raise DomainError(f"{name} has shape {arr.shape}, expected {shape}")
    if not np.isfinite(arr).all():
        raise DomainError(f"{name} contains non-finite values")
    return arr


@dataclasses.dataclass
class Conv2d:
    filter_size: int
    in_channels: int
    out_channels: int
    stride: int = 1
    pad: int = 0
    activation: Activation = Activation.NONE
    alpha: float = 0.01
    frozen: bool = False
    kernels: np.ndarray | None = None
    bias: np.ndarray | None = None

    def __post_init__(self):
        check_int("filter_size", self.filter_size, lo=1)
        check_int("in_channels", self.in_channels, lo=1)
        check_int("out_channels", self.out_channels, lo=1)
        check_int("stride", self.stride, lo=1)
        check_int("pad", self.pad, lo=0)
        f, ci, co = self.filter_size, self.in_channels, self.out_channels
        if self.kernels is not None:
            self.kernels = _as_f32("kernels", self.kernels, (f, f, ci, co))
            self.bias = _as_f32("bias", self.bias if self.bias is not None else np.zeros(co), (co,))

    @property
    def materialized(self) -> bool:
        return self.kernels is not None

    @property
    def param_count(self) -> int:
        return self.filter_size**2 * self.in_channels * self.out_channels + self.out_channels

    def output_shape(self, shape: tuple[int, ...]) -> tuple[int, ...]:
        if len(shape) != 3:
            raise DomainError(f"Conv2d expects an (H, W, C) input, got {shape}")
        h, w, c = shape
        if c != self.in_channels:
            raise DomainError(f"Conv2d expects {self.in_channels} channels, input has {c}")
        return (
            ops.out_size(h, self.pad, self.filter_size, self.stride),
            ops.out_size(w, self.pad, self.filter_size, self.stride),
            self.out_channels,
        )

    def forward(self, x: np.ndarray) -> np.ndarray:
        out = ops.conv2d(x, self.kernels, self.bias, self.stride, self.pad)
        return apply_activation(out, self.activation, self.alpha)


@dataclasses.dataclass
class MaxPool:
    filter_size: int
    stride: int
    frozen: bool = False

    def __post_init__(self):
        check_int("filter_size", self.filter_size, lo=1)
        check_int("stride", self.stride, lo=1)

    materialized = True
    param_count = 0

    def output_shape(self, shape: tuple[int, ...]) -> tuple[int, ...]:
        if len(shape) != 3:
            raise DomainError(f"MaxPool expects an (H, W, C) input, got {shape}")
        h, w, c = shape
        return (
            ops.out_size(h, 0, self.filter_size, self.stride),
            ops.out_size(w, 0, self.filter_size, self.stride),
            c,
        )

    def forward(self, x: np.ndarray) -> np.ndarray:
        return ops.maxpool2d(x, self.filter_size, self.stride)


@dataclasses.dataclass
class Flatten:
    frozen: bool = False

    materialized = True
    param_count = 0

    def output_shape(self, shape: tuple[int, ...]) -> tuple[int, ...]:
        if len(shape) != 3:
            raise DomainError(f"Flatten expects an (H, W, C) input, got {shape}")
        h, w, c = shape
        return (h * w * c,)

    def forward(self, x: np.ndarray) -> np.ndarray:
        return ops.flatten(x)


@dataclasses.dataclass
class Dense:
    in_features: int
    out_features: int
    activation: Activation = Activation.NONE
    alpha: float = 0.01
    frozen: bool = False
    weights: np.ndarray | None = None
    bias: np.ndarray | None = None

    def __post_init__(self):
        check_int("in_features", self.in_features, lo=1)
        check_int("out_features", self.out_features, lo=1)
        if self.weights is not None:
            self.weights = _as_f32("weights", self.weights, (self.in_features, self.out_features))
            self.bias = _as_f32(
                "bias",
                self.bias if self.bias is not None else np.zeros(self.out_features),
                (self.out_features,),
            )

    @property
    def materialized(self) -> bool:
        return self.weights is not None

    @property
    def param_count(self) -> int:
        return self.in_features * self.out_features + self.out_features

    def output_shape(self, shape: tuple[int, ...]) -> tuple[int, ...]:
        if len(shape) != 1:
            raise DomainError(f"Dense expects a flattened input, got {shape}")
        if shape[0] != self.in_features:
            raise DomainError(f"Dense expects {self.in_features} inputs, got {shape[0]}")
        return (self.out_features,)

    def forward(self, x: np.ndarray) -> np.ndarray:
        out = ops.dense(x, self.weights, self.bias)
        return apply_activation(out, self.activation, self.alpha)


LayerSpec = Union[Conv2d, MaxPool, Flatten, Dense]

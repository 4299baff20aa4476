"""Numeric primitives of the inference engine.

Tensors are (height, width, channels) float32 arrays in row-major order;
dot products accumulate in float64 before narrowing back, which bounds
drift in long reductions (a 51200-term flatten-to-dense product being the
canonical case).

Two 2-D convolution semantics exist on purpose and are named apart:

* :func:`conv2d` slides the kernel without flipping (cross-correlation),
  the semantic of every major deep-learning framework and of the weight
  files this engine loads;
* :func:`convolve2d_full` is mathematical convolution (kernel flipped,
  full support), the textbook definition, kept as a utility.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from ..errors import DomainError
from ..validation import check_int

__all__ = [
    "Signal1D",
    "conv1d",
    "out_size",
    "filter_size_for",
    "convolve2d_full",
    "conv2d",
    "maxpool2d",
    "relu",
    "leaky_relu",
    "tanh",
    "sigmoid",
    "softmax",
    "flatten",
    "dense",
]


@dataclasses.dataclass(frozen=True)
class Signal1D:
    """Finite discrete signal with the index of its first sample."""

    samples: tuple[float, ...]
    start: int = 0

    def __post_init__(self):
        samples = tuple(float(v) for v in self.samples)
        if not samples:
            raise DomainError("samples is empty")
        if not np.isfinite(samples).all():
            raise DomainError("samples contains non-finite values")
        object.__setattr__(self, "samples", samples)


def conv1d(x: Signal1D, h: Signal1D) -> Signal1D:
    """Discrete convolution over full finite support.

    Output length is ``len(x) + len(h) - 1`` and the support start adds.
    """
    xs = np.asarray(x.samples, dtype=np.float64)
    hs = np.asarray(h.samples, dtype=np.float64)
    out = np.zeros(xs.size + hs.size - 1)
    for j, hv in enumerate(hs):
        out[j : j + xs.size] += hv * xs
    return Signal1D(samples=tuple(out.tolist()), start=x.start + h.start)


def out_size(n_in: int, pad: int, filter_size: int, stride: int, strict: bool = False) -> int:
    """Spatial output size of a windowed op: ``(n + 2p - f) // s + 1``.

    ``strict=True`` refuses geometries where the window does not step
    evenly (the remainder is silently floored otherwise).
    """
    n_in = check_int("n_in", n_in, lo=1)
    pad = check_int("pad", pad, lo=0)
    filter_size = check_int("filter_size", filter_size, lo=1)
    stride = check_int("stride", stride, lo=1)
    span = n_in + 2 * pad - filter_size
    if span < 0:
        raise DomainError(
            f"filter_size={filter_size} exceeds padded input {n_in + 2 * pad}"
        )
    if strict and span % stride != 0:
        raise DomainError(
            f"geometry not stride-exact: ({n_in} + 2*{pad} - {filter_size}) % {stride} != 0"
        )
    return span // stride + 1


def filter_size_for(n_in: int, pad: int, stride: int, n_out: int) -> int:
    """Window size achieving ``n_out`` exactly: ``f = n + 2p - s*(n_out - 1)``."""
    n_in = check_int("n_in", n_in, lo=1)
    pad = check_int("pad", pad, lo=0)
    stride = check_int("stride", stride, lo=1)
    n_out = check_int("n_out", n_out, lo=1)
    f = n_in + 2 * pad - stride * (n_out - 1)
    if f < 1:
        raise DomainError(
            f"no valid filter size: n_in={n_in}, pad={pad}, stride={stride}, n_out={n_out}"
        )
    return f


def convolve2d_full(image: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Mathematical 2-D convolution (kernel flipped), full support.

    Single-channel; output is (H + kh - 1, W + kw - 1).
    """
    image = np.asarray(image, dtype=np.float64)
    kernel = np.asarray(kernel, dtype=np.float64)
    if image.ndim != 2 or kernel.ndim != 2:
        raise DomainError("convolve2d_full expects 2-D arrays")
    kh, kw = kernel.shape
    out = np.zeros((image.shape[0] + kh - 1, image.shape[1] + kw - 1))
    for dy in range(kh):
        for dx in range(kw):
            out[dy : dy + image.shape[0], dx : dx + image.shape[1]] += (
                kernel[dy, dx] * image
            )
    return out


def _im2col(padded: np.ndarray, f: int, stride: int, out_h: int, out_w: int) -> np.ndarray:
    """Gather sliding windows into rows of shape (out_h*out_w, f*f*C)."""
    c = padded.shape[2]
    cols = np.empty((out_h, out_w, f, f, c), dtype=np.float64)
    for dy in range(f):
        for dx in range(f):
            cols[:, :, dy, dx, :] = padded[
                dy : dy + stride * out_h : stride,
                dx : dx + stride * out_w : stride,
                :,
            ]
    return cols.reshape(out_h * out_w, f * f * c)


def conv2d(
    x: np.ndarray,
    kernels: np.ndarray,
    bias: np.ndarray | None = None,
    stride: int = 1,
    pad: int = 0,
) -> np.ndarray:
    """Strided, zero-padded sliding-window product (no kernel flip).

    ``x`` is (H, W, C_in); ``kernels`` is (f, f, C_in, C_out) indexed
    (row, col, in-channel, out-channel). Returns (H', W', C_out) float32
    with H', W' given by :func:`out_size`.
    """
    x = np.asarray(x)
    kernels = np.asarray(kernels)
    if x.ndim != 3:
        raise DomainError(f"input must be (H, W, C), got shape {x.shape}")
    if kernels.ndim != 4 or kernels.shape[0] != kernels.shape[1]:
        raise DomainError(f"kernels must be (f, f, C_in, C_out), got shape {kernels.shape}")
    f, _, c_in, c_out = kernels.shape
    if x.shape[2] != c_in:
        raise DomainError(f"input has {x.shape[2]} channels, kernels expect {c_in}")
    out_h = out_size(x.shape[0], pad, f, stride)
    out_w = out_size(x.shape[1], pad, f, stride)

    padded = np.pad(x.astype(np.float64), ((pad, pad), (pad, pad), (0, 0)))
    mat = _im2col(padded, f, stride, out_h, out_w)
    weights = kernels.reshape(f * f * c_in, c_out).astype(np.float64)
    out = mat @ weights
    if bias is not None:
        bias = np.asarray(bias, dtype=np.float64)
        if bias.shape != (c_out,):
            raise DomainError(f"bias shape {bias.shape} != ({c_out},)")
        out += bias
    return out.reshape(out_h, out_w, c_out).astype(np.float32)


def maxpool2d(x: np.ndarray, filter_size: int, stride: int) -> np.ndarray:
    """Per-channel window maximum; never pads."""
    x = np.asarray(x)
    if x.ndim != 3:
        raise DomainError(f"input must be (H, W, C), got shape {x.shape}")
    f = check_int("filter_size", filter_size, lo=1)
    out_h = out_size(x.shape[0], 0, f, stride)
    out_w = out_size(x.shape[1], 0, f, stride)
    out = np.full((out_h, out_w, x.shape[2]), -np.inf, dtype=x.dtype)
    for dy in range(f):
        for dx in range(f):
            np.maximum(
                out,
                x[dy : dy + stride * out_h : stride, dx : dx + stride * out_w : stride, :],
                out=out,
            )
    return out


def relu(x):
    return np.maximum(np.asarray(x), 0)


def leaky_relu(x, alpha: float = 0.01):
    x = np.asarray(x)
    return np.where(x >= 0, x, alpha * x)


def tanh(x):
    return np.tanh(np.asarray(x))


def sigmoid(x):
    """Numerically stable logistic function, elementwise."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax(v):
    """Max-subtracted softmax over the last axis."""
    v = np.asarray(v, dtype=np.float64)
    shifted = v - v.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def flatten(x: np.ndarray) -> np.ndarray:
    """Row-major (row, column, channel) flattening of an (H, W, C) tensor."""
    x = np.asarray(x)
    if x.ndim != 3:
        raise DomainError(f"input must be (H, W, C), got shape {x.shape}")
    return x.reshape(-1)


def dense(v: np.ndarray, weights: np.ndarray, bias: np.ndarray | None = None) -> np.ndarray:
    """Affine map ``v @ W + b`` with (in, out) weights, float64 accumulate."""
    v = np.asarray(v)
    weights = np.asarray(weights)
    if v.ndim != 1:
        raise DomainError(f"input must be a vector, got shape {v.shape}")
    if weights.ndim != 2 or weights.shape[0] != v.size:
        raise DomainError(
            f"weights shape {weights.shape} incompatible with input length {v.size}"
        )
    out = v.astype(np.float64) @ weights.astype(np.float64)
    if bias is not None:
        bias = np.asarray(bias, dtype=np.float64)
        if bias.shape != (weights.shape[1],):
            raise DomainError(f"bias shape {bias.shape} != ({weights.shape[1]},)")
        out += bias
    return out.astype(np.float32)

"""CNNW portable weight format, plus the raw tensor fixture files.

Byte layout (all integers little-endian, all reals IEEE-754 binary32):

* magic ``43 4E 4E 57`` ("CNNW")
* u32 version (currently 1)
* u32 layer count
* per layer:
  - u8 type tag: 1=Conv2D, 2=MaxPool, 3=Flatten, 4=Dense
  - u8 activation tag: 0=None, 1=ReLU, 2=LeakyReLU, 3=Tanh, 4=Sigmoid,
    5=Softmax; when the tag is 2 one f32 (the LeakyReLU slope) follows
    immediately after the tag
  - u8 frozen flag (0/1)
  - type-specific u32 dims: Conv2D ``f, c_in, c_out, stride, pad``;
    MaxPool ``f, s``; Flatten none; Dense ``n_in, n_out``
  - f32 weight array in index order (kernel: row, col, in-channel,
    out-channel; dense: in, out), then the f32 bias array
* u32 CRC32 of every preceding byte

Tensor fixture files ("CNNT") carry one float32 array: magic, u32
version=1, u32 ndim, u32 dims, then the data in row-major order.

Every malformed-input class gets its own error code so callers can
distinguish a wrong file from a damaged one. Structure is parsed before
the trailing checksum is verified, so corruption inside a length field is
reported as truncation -- without an out-of-band length the two are
indistinguishable.
"""

from __future__ import annotations

import json
import struct
import zlib
from pathlib import Path

import numpy as np

from ..errors import DomainError, PyroriskError
from .layers import Activation, Conv2d, Dense, Flatten, LayerSpec, MaxPool
from .network import Network

MAGIC = b"CNNW"
TENSOR_MAGIC = b"CNNT"
VERSION = 1

_TYPE_TAGS = {Conv2d: 1, MaxPool: 2, Flatten: 3, Dense: 4}


class CnnwError(PyroriskError):
    """Base for weight-format failures; ``code`` names the failure class."""

    code = "cnnw"
    exit_code = 3


class MagicError(CnnwError):
    code = "bad_magic"


class VersionError(CnnwError):
    code = "version"


class TruncatedError(CnnwError):
    code = "truncated"


class ChecksumError(CnnwError):
    code = "checksum"


class LayerFormatError(CnnwError):
    code = "layer"


class ShapeError(CnnwError):
    code = "shape"


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise TruncatedError(
                f"stream ends at byte {len(self.data)}, needed {self.pos + n}"
            )
        out = self.data[self.pos : self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def f32(self) -> float:
        return struct.unpack("<f", self.take(4))[0]

    def f32_array(self, count: int, shape: tuple[int, ...]) -> np.ndarray:
        raw = self.take(4 * count)
        return np.frombuffer(raw, dtype="<f4").reshape(shape).astype(np.float32)


def save_network(net: Network) -> bytes:
    """Serialize materialized weights; the stream carries no input shape."""
    out = bytearray()
    out += MAGIC
    out += struct.pack("<I", VERSION)
    out += struct.pack("<I", len(net.layers))
    for layer in net.layers:
        tag = _TYPE_TAGS.get(type(layer))
        if tag is None:
            raise LayerFormatError(f"unsupported layer type {type(layer).__name__}")
        activation = getattr(layer, "activation", Activation.NONE)
        out += struct.pack("<BB", tag, int(activation))
        if activation is Activation.LEAKY_RELU:
            out += struct.pack("<f", float(layer.alpha))
        out += struct.pack("<B", 1 if layer.frozen else 0)
        if isinstance(layer, Conv2d):
            if not layer.materialized:
                raise LayerFormatError("Conv2D layer has no weights to serialize")
            out += struct.pack(
                "<5I",
                layer.filter_size,
                layer.in_channels,
                layer.out_channels,
                layer.stride,
                layer.pad,
            )
            out += layer.kernels.astype("<f4").tobytes(order="C")
            out += layer.bias.astype("<f4").tobytes(order="C")
        elif isinstance(layer, MaxPool):
            out += struct.pack("<2I", layer.filter_size, layer.stride)
        elif isinstance(layer, Dense):
            if not layer.materialized:
                raise LayerFormatError("Dense layer has no weights to serialize")
            out += struct.pack("<2I", layer.in_features, layer.out_features)
            out += layer.weights.astype("<f4").tobytes(order="C")
            out += layer.bias.astype("<f4").tobytes(order="C")
        # Flatten has no dims
    out += struct.pack("<I", zlib.crc32(bytes(out)))
    return bytes(out)


def _read_layer(r: _Reader) -> LayerSpec:
    tag = r.u8()
    act_tag = r.u8()
    try:
        activation = Activation(act_tag)
    except ValueError:
        raise LayerFormatError(f"unknown activation tag {act_tag}") from None
    alpha = r.f32() if activation is Activation.LEAKY_RELU else 0.01
    frozen = r.u8()
    if frozen not in (0, 1):
        raise LayerFormatError(f"frozen flag must be 0/1, got {frozen}")
    frozen = bool(frozen)

    if tag == 1:
        f, c_in, c_out, stride, pad = (r.u32() for _ in range(5))
        if min(f, c_in, c_out, stride) < 1:
            raise LayerFormatError(f"bad Conv2D dims f={f} c_in={c_in} c_out={c_out} s={stride}")
        kernels = r.f32_array(f * f * c_in * c_out, (f, f, c_in, c_out))
        bias = r.f32_array(c_out, (c_out,))
        return Conv2d(
            filter_size=f,
            in_channels=c_in,
            out_channels=c_out,
            stride=stride,
            pad=pad,
            activation=activation,
            alpha=alpha,
            frozen=frozen,
            kernels=kernels,
            bias=bias,
        )
    if tag == 2:
        f, s = r.u32(), r.u32()
        if activation is not Activation.NONE:
            raise LayerFormatError("MaxPool must carry activation tag 0")
        if min(f, s) < 1:
            raise LayerFormatError(f"bad MaxPool dims f={f} s={s}")
        return MaxPool(filter_size=f, stride=s, frozen=frozen)
    if tag == 3:
        if activation is not Activation.NONE:
            raise LayerFormatError("Flatten must carry activation tag 0")
        return Flatten(frozen=frozen)
    if tag == 4:
        n_in, n_out = r.u32(), r.u32()
        if min(n_in, n_out) < 1:
            raise LayerFormatError(f"bad Dense dims in={n_in} out={n_out}")
        weights = r.f32_array(n_in * n_out, (n_in, n_out))
        bias = r.f32_array(n_out, (n_out,))
        return Dense(
            in_features=n_in,
            out_features=n_out,
            activation=activation,
            alpha=alpha,
            frozen=frozen,
            weights=weights,
            bias=bias,
        )
    raise LayerFormatError(f"unknown layer type tag {tag}")


def infer_input_shape(layers: list[LayerSpec]) -> tuple[int, int, int] | None:
    """Recover the *minimal* square input consistent with a Flatten->Dense
    anchor (flooring geometries admit a range of inputs; the stream does
    not record which one the exporter used).

    Walks the channel chain forward to the flatten point, splits the dense
    fan-in into (n, n, c), then inverts each conv/pool geometry backwards.
    Returns None when the stack has no flatten/dense anchor. Diagnostic
    helper only; loading never guesses a shape.
    """
    flat_idx = next((i for i, l in enumerate(layers) if isinstance(l, Flatten)), None)
    if flat_idx is None or flat_idx + 1 >= len(layers):
        return None
    head = layers[flat_idx + 1]
    if not isinstance(head, Dense):
        return None

    channels = None
    for layer in layers[:flat_idx]:
        if isinstance(layer, Conv2d):
            channels = layer.out_channels
    if channels is None:
        first = next((l for l in layers if isinstance(l, Conv2d)), None)
        if first is None:
            return None
        channels = first.in_channels
    if head.in_features % channels != 0:
        raise ShapeError(
            f"dense fan-in {head.in_features} not divisible by {channels} channels"
        )
    spatial_sq = head.in_features // channels
    n = int(round(spatial_sq**0.5))
    if n * n != spatial_sq:
        raise ShapeError(f"pre-flatten area {spatial_sq} is not a square")

    for layer in reversed(layers[:flat_idx]):
        if isinstance(layer, Conv2d):
            n = (n - 1) * layer.stride + layer.filter_size - 2 * layer.pad
        elif isinstance(layer, MaxPool):
            n = (n - 1) * layer.stride + layer.filter_size
        if n < 1:
            raise ShapeError("geometry inversion produced a non-positive input size")

    in_channels = None
    for layer in layers:
        if isinstance(layer, Conv2d):
            in_channels = layer.in_channels
            break
    if in_channels is None:
        in_channels = channels
    return (n, n, in_channels)


def load_network(
    data: bytes,
    input_shape: tuple[int, int, int] | None = None,
    name: str = "",
    class_labels: tuple[str, ...] = (),
) -> Network:
    """Parse a CNNW stream into a ready-to-run network.

    The stream carries no input shape; pass ``input_shape`` to pin one at
    build time, otherwise the network validates its whole chain against
    the concrete input shape at the top of each forward call.
    """
    if len(data) < 4 or data[:4] != MAGIC:
        raise MagicError(f"not a CNNW stream (leading bytes {data[:4]!r})")
    r = _Reader(data)
    r.take(4)
    version = r.u32()
    if version != VERSION:
        raise VersionError(f"unsupported version {version}, expected {VERSION}")
    n_layers = r.u32()
    try:
        layers = [_read_layer(r) for _ in range(n_layers)]
    except DomainError as exc:  # layer constructors validate their dims
        raise LayerFormatError(str(exc)) from exc

    crc_expected = r.u32()
    if r.pos != len(data):
        raise LayerFormatError(f"{len(data) - r.pos} trailing bytes after checksum")
    crc_actual = zlib.crc32(data[: r.pos - 4])
    if crc_actual != crc_expected:
        raise ChecksumError(f"crc32 {crc_actual:#010x} != stored {crc_expected:#010x}")

    try:
        return Network(
            layers=layers, input_shape=input_shape, name=name, class_labels=class_labels
        )
    except DomainError as exc:
        raise ShapeError(f"layer stack is shape-inconsistent: {exc}") from exc


def save_network_file(net: Network, path: str | Path) -> None:
    Path(path).write_bytes(save_network(net))


def load_network_file(path: str | Path, **kwargs) -> Network:
    return load_network(Path(path).read_bytes(), **kwargs)


def save_tensor(path: str | Path, array: np.ndarray) -> None:
    """Write one float32 array in the CNNT fixture layout."""
    array = np.asarray(array, dtype=np.float32)
    out = bytearray()
    out += TENSOR_MAGIC
    out += struct.pack("<I", VERSION)
    out += struct.pack("<I", array.ndim)
    out += struct.pack(f"<{array.ndim}I", *array.shape)
    out += array.astype("<f4").tobytes(order="C")
    Path(path).write_bytes(bytes(out))


def load_tensor(path: str | Path) -> np.ndarray:
    data = Path(path).read_bytes()
    if data[:4] != TENSOR_MAGIC:
        raise MagicError(f"not a CNNT tensor file (leading bytes {data[:4]!r})")
    r = _Reader(data)
    r.take(4)
    version = r.u32()
    if version != VERSION:
        raise VersionError(f"unsupported tensor version {version}")
    ndim = r.u32()
    if ndim > 4:
        raise LayerFormatError(f"tensor rank {ndim} not supported")
    shape = tuple(r.u32() for _ in range(ndim))
    count = int(np.prod(shape, dtype=np.int64)) if shape else 1
    arr = r.f32_array(count, shape)
    if r.pos != len(data):
        raise LayerFormatError(f"{len(data) - r.pos} trailing bytes in tensor file")
    return arr


def read_manifest(path: str | Path) -> dict:
    """Load a golden-fixture manifest; paths are resolved relative to it."""
    path = Path(path)
    manifest = json.loads(path.read_text())
    for key in ("weights", "tolerance", "fixtures"):
        if key not in manifest:
            raise DomainError(f"fixture manifest missing key {key!r}")
    base = path.parent
    manifest["weights"] = str(base / manifest["weights"])
    for pair in manifest["fixtures"]:
        pair["input"] = str(base / pair["input"])
        pair["output"] = str(base / pair["output"])
    return manifest

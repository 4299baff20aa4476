"""Networks: an ordered layer stack with shape-validated pure forward pass."""

from __future__ import annotations

import dataclasses

import numpy as np

from ..errors import DomainError
from .layers import Activation, Conv2d, Dense, Flatten, LayerSpec, MaxPool

PROBABILITY_HEADS = (Activation.SIGMOID, Activation.SOFTMAX)


@dataclasses.dataclass(frozen=True)
class ClassScores:
    """Per-label scores from a probability head.

    Softmax heads produce a distribution (sums to 1); sigmoid heads
    produce independent per-class probabilities.
    """

    labels: tuple[str, ...]
    probabilities: tuple[float, ...]
    head: Activation

    def __post_init__(self):
        if len(self.labels) != len(self.probabilities):
            raise DomainError("labels and probabilities differ in length")

    def score(self, label: str) -> float:
        return self.probabilities[self.labels.index(label)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, self.probabilities))

    def top(self) -> str:
        return self.labels[int(np.argmax(self.probabilities))]


def default_labels(n: int) -> tuple[str, ...]:
    # two-class nets follow the dataset's directory order (alphabetical):
    # index 0 nowildfire, index 1 wildfire
    if n == 2:
        return ("nowildfire", "wildfire")
    return tuple(f"class_{i}" for i in range(n))


@dataclasses.dataclass
class Network:
    """Immutable-after-build layer stack.

    The whole shape chain is validated before anything executes: at build
    when ``input_shape`` is known, else against the concrete input shape
    at the top of ``forward`` -- a forward pass can never fail midway.
    """

    layers: list[LayerSpec]
    input_shape: tuple[int, int, int] | None = None
    name: str = ""
    class_labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not all(isinstance(l, (Conv2d, MaxPool, Flatten, Dense)) for l in self.layers):
            raise DomainError("layers must be Conv2d/MaxPool/Flatten/Dense instances")
        if self.layers:
            head = self.layers[-1]
            if not isinstance(head, Dense) or head.activation not in PROBABILITY_HEADS:
                raise DomainError(
                    "final layer must be a Dense with a sigmoid or softmax head"
                )
            if not self.class_labels:
                self.class_labels = default_labels(head.out_features)
            elif len(self.class_labels) != head.out_features:
                raise DomainError(
                    f"{len(self.class_labels)} labels for a {head.out_features}-unit head"
                )
        self._structural_check()
        if self.input_shape is not None:
            self.shape_chain(self.input_shape)  # raises on any incompatibility

    def _structural_check(self) -> None:
        """Catch inter-layer inconsistencies that need no input shape:
        channel chains between convolutions, dense fan-in after flatten."""
        channels: int | None = None
        vector: int | None = None
        for i, layer in enumerate(self.layers):
            if isinstance(layer, Conv2d):
                if vector is not None:
                    raise DomainError(f"layer {i}: Conv2d after Flatten/Dense")
                if channels is not None and layer.in_channels != channels:
                    raise DomainError(
                        f"layer {i}: Conv2d expects {layer.in_channels} channels, "
                        f"previous layer emits {channels}"
                    )
                channels = layer.out_channels
            elif isinstance(layer, MaxPool):
                if vector is not None:
                    raise DomainError(f"layer {i}: MaxPool after Flatten/Dense")
            elif isinstance(layer, Flatten):
                if vector is not None:
                    raise DomainError(f"layer {i}: Flatten after Flatten/Dense")
                vector = -1  # length unknown until the input shape is fixed
            elif isinstance(layer, Dense):
                if vector is None:
                    raise DomainError(f"layer {i}: Dense requires a preceding Flatten")
                if vector == -1 and channels is not None and layer.in_features % channels:
                    raise DomainError(
                        f"layer {i}: Dense fan-in {layer.in_features} is not a multiple "
                        f"of the {channels} channels entering Flatten"
                    )
                if vector not in (-1, layer.in_features) and vector is not None:
                    raise DomainError(
                        f"layer {i}: Dense expects {layer.in_features} inputs, "
                        f"previous layer emits {vector}"
                    )
                vector = layer.out_features

    @property
    def head_activation(self) -> Activation:
        return self.layers[-1].activation

    def shape_chain(self, input_shape: tuple[int, ...]) -> list[tuple[int, ...]]:
        """Propagate shapes through every layer; raises where incompatible."""
        shapes = [tuple(input_shape)]
        for i, layer in enumerate(self.layers):
            try:
                shapes.append(layer.output_shape(shapes[-1]))
            except DomainError as exc:
                raise DomainError(f"layer {i} ({type(layer).__name__}): {exc}") from exc
        return shapes

    def count_params(self) -> tuple[int, int]:
        """(total, trainable) parameter counts; frozen layers don't train."""
        total = sum(layer.param_count for layer in self.layers)
        trainable = sum(layer.param_count for layer in self.layers if not layer.frozen)
        return total, trainable

    def forward(self, x: np.ndarray) -> ClassScores:
        """Run the stack on one (H, W, C) float tensor scaled to [0, 1]."""
        x = np.asarray(x, dtype=np.float32)
        if self.input_shape is not None:
            if x.shape != self.input_shape:
                raise DomainError(
                    f"input shape {x.shape} does not match network input {self.input_shape}"
                )
        else:
            self.shape_chain(x.shape)
        for layer in self.layers:
            if not layer.materialized:
                raise DomainError(
                    f"{type(layer).__name__} has no weights; load or assign them first"
                )
        for layer in self.layers:
            x = layer.forward(x)
        return ClassScores(
            labels=self.class_labels,
            probabilities=tuple(float(v) for v in x),
            head=self.head_activation,
        )


_VGG19_BLOCKS = ((2, 64), (2, 128), (4, 256), (4, 512), (4, 512))


def vgg19_layout(
    input_size: int = 350,
    in_channels: int = 3,
    num_classes: int = 2,
    head: Activation = Activation.SIGMOID,
) -> Network:
    """Dimensions-only VGG19-style stack with a direct classification head.

    Sixteen 3x3 same-pad convolutions in five blocks, each block closed by
    a 2x2/2 max-pool, then flatten and a single trainable dense head; the
    convolutional backbone is marked frozen, transfer-learning style.
    """
    layers: list[LayerSpec] = []
    channels = in_channels
    size = input_size
    for conv_count, width in _VGG19_BLOCKS:
        for _ in range(conv_count):
            layers.append(
                Conv2d(
                    filter_size=3,
                    in_channels=channels,
                    out_channels=width,
                    stride=1,
                    pad=1,
                    activation=Activation.RELU,
                    frozen=True,
                )
            )
            channels = width
        layers.append(MaxPool(filter_size=2, stride=2))
        size = (size - 2) // 2 + 1
    layers.append(Flatten())
    layers.append(
        Dense(
            in_features=size * size * channels,
            out_features=num_classes,
            activation=head,
            frozen=False,
        )
    )
    return Network(layers=layers, input_shape=(input_size, input_size, in_channels), name="vgg19")

"""From-scratch CNN forward-pass engine with a portable binary weight format."""

from .cnnw import (
    ChecksumError,
    CnnwError,
    LayerFormatError,
    MagicError,
    ShapeError,
    TruncatedError,
    VersionError,
    load_network,
    load_network_file,
    load_tensor,
    read_manifest,
    save_network,
    save_network_file,
    save_tensor,
)
from .layers import Activation, Conv2d, Dense, Flatten, MaxPool
from .network import ClassScores, Network, vgg19_layout
from .ops import (
    Signal1D,
    conv1d,
    conv2d,
    convolve2d_full,
    dense,
    filter_size_for,
    flatten,
    leaky_relu,
    maxpool2d,
    out_size,
    relu,
    sigmoid,
    softmax,
    tanh,
)

__all__ = [
    "Signal1D",
    "conv1d",
    "conv2d",
    "convolve2d_full",
    "dense",
    "filter_size_for",
    "flatten",
    "leaky_relu",
    "maxpool2d",
    "out_size",
    "relu",
    "sigmoid",
    "softmax",
    "tanh",
    "Activation",
    "Conv2d",
    "MaxPool",
    "Flatten",
    "Dense",
    "Network",
    "ClassScores",
    "vgg19_layout",
    "CnnwError",
    "MagicError",
    "VersionError",
    "TruncatedError",
    "ChecksumError",
    "LayerFormatError",
    "ShapeError",
    "save_network",
    "load_network",
    "save_network_file",
    "load_network_file",
    "save_tensor",
    "load_tensor",
    "read_manifest",
]

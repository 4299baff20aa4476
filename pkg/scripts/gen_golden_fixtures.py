#!/usr/bin/env python3
"""Generate the committed golden fixtures under tests/fixtures/golden/.

Builds small torch networks with seeded weights, runs the torch forward
pass on seeded inputs, and writes:

  <net>/model.cnnw        weights, encoded here with struct (independent
                          of the package encoder, so the loader's byte
                          layout is cross-checked)
  <net>/input_NN.cnnt     input tensors, (H, W, C) float32
  <net>/output_NN.cnnt    torch forward outputs
  <net>/manifest.json     paths, seed, tolerance

Also writes tests/fixtures/scene/zero.cnnw, the all-zero network used by
the end-to-end CLI test. Deterministic: re-running reproduces identical
bytes (torch CPU conv/linear at these sizes is exact across runs).
"""

import json
import pathlib
import struct
import zlib

import numpy as np
import torch
import torch.nn as nn

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "golden"
SCENE = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "scene"

ACT_TAGS = {"none": 0, "relu": 1, "leaky_relu": 2, "tanh": 3, "sigmoid": 4, "softmax": 5}


def encode_cnnw(layers):
    """layers: list of dicts mirroring the wire format, weights as numpy."""
    out = bytearray(b"CNNW")
    out += struct.pack("<I", 1)
    out += struct.pack("<I", len(layers))
    for layer in layers:
        out += struct.pack("<BB", layer["type"], ACT_TAGS[layer.get("act", "none")])
        if layer.get("act") == "leaky_relu":
            out += struct.pack("<f", layer["alpha"])
        out += struct.pack("<B", 1 if layer.get("frozen") else 0)
        if layer["type"] == 1:  # conv: f, c_in, c_out, stride, pad
            k = layer["kernels"]  # (f, f, c_in, c_out)
            out += struct.pack("<5I", k.shape[0], k.shape[2], k.shape[3], layer["stride"], layer["pad"])
            out += k.astype("<f4").tobytes(order="C")
            out += layer["bias"].astype("<f4").tobytes(order="C")
        elif layer["type"] == 2:  # maxpool: f, s
            out += struct.pack("<2I", layer["f"], layer["s"])
        elif layer["type"] == 3:  # flatten
            pass
        elif layer["type"] == 4:  # dense: in, out
            w = layer["weights"]  # (in, out)
            out += struct.pack("<2I", w.shape[0], w.shape[1])
            out += w.astype("<f4").tobytes(order="C")
            out += layer["bias"].astype("<f4").tobytes(order="C")
    out += struct.pack("<I", zlib.crc32(bytes(out)))
    return bytes(out)


def write_tensor(path, arr):
    arr = np.asarray(arr, dtype=np.float32)
    out = bytearray(b"CNNT")
    out += struct.pack("<I", 1)
    out += struct.pack("<I", arr.ndim)
    out += struct.pack(f"<{arr.ndim}I", *arr.shape)
    out += arr.astype("<f4").tobytes(order="C")
    pathlib.Path(path).write_bytes(bytes(out))


def conv_to_wire(conv: nn.Conv2d):
    # torch weight is (out, in, kh, kw); wire order is (row, col, in, out)
    k = conv.weight.detach().numpy().transpose(2, 3, 1, 0)
    return k, conv.bias.detach().numpy()


def dense_to_wire(linear: nn.Linear):
    # torch weight is (out, in); wire order is (in, out)
    return linear.weight.detach().numpy().T, linear.bias.detach().numpy()


class ToyNet:
    """A torch stack plus its wire description."""

    def __init__(self, name, input_shape, modules, wire, head):
        self.name = name
        self.input_shape = input_shape  # (H, W, C)
        self.modules = modules
        self.wire = wire
        self.head = head

    def forward(self, x_hwc: np.ndarray) -> np.ndarray:
        t = torch.from_numpy(x_hwc.transpose(2, 0, 1)[None])  # NCHW
        with torch.no_grad():
            for module in self.modules:
                t = module(t)
        out = t[0]
        if self.head == "sigmoid":
            out = torch.sigmoid(out)
        elif self.head == "softmax":
            out = torch.softmax(out, dim=0)
        return out.numpy()


def build_net_a():
    torch.manual_seed(101)
    conv1 = nn.Conv2d(3, 8, 3, stride=1, padding=1)
    conv2 = nn.Conv2d(8, 16, 3, stride=2, padding=0)
    head = nn.Linear(3 * 3 * 16, 2)
    k1, b1 = conv_to_wire(conv1)
    k2, b2 = conv_to_wire(conv2)
    wd, bd = dense_to_wire(head)
    wire = [
        dict(type=1, act="relu", frozen=True, kernels=k1, bias=b1, stride=1, pad=1),
        dict(type=2, f=2, s=2),
        dict(type=1, act="relu", frozen=True, kernels=k2, bias=b2, stride=2, pad=0),
        dict(type=3),
        dict(type=4, act="sigmoid", frozen=False, weights=wd, bias=bd),
    ]
    modules = [conv1, nn.ReLU(), nn.MaxPool2d(2, 2), conv2, nn.ReLU(), nn.Flatten(0)]

    class Permuted(ToyNet):
        # torch flatten of CHW must be reordered to the engine's HWC order
        def forward(self, x_hwc):
            t = torch.from_numpy(x_hwc.transpose(2, 0, 1)[None])
            with torch.no_grad():
                t = conv1(t).relu()
                t = nn.functional.max_pool2d(t, 2, 2)
                t = conv2(t).relu()
                flat = t[0].permute(1, 2, 0).reshape(-1)  # HWC flatten
                out = torch.sigmoid(head(flat))
            return out.numpy()

    return Permuted("net_a", (16, 16, 3), modules, wire, "sigmoid")


def build_net_b():
    torch.manual_seed(202)
    conv = nn.Conv2d(3, 4, 5, stride=1, padding=2)
    head = nn.Linear(4 * 4 * 4, 3)
    k, b = conv_to_wire(conv)
    wd, bd = dense_to_wire(head)
    wire = [
        dict(type=1, act="tanh", frozen=True, kernels=k, bias=b, stride=1, pad=2),
        dict(type=2, f=3, s=3),
        dict(type=3),
        dict(type=4, act="softmax", frozen=False, weights=wd, bias=bd),
    ]

    class Net(ToyNet):
        def forward(self, x_hwc):
            t = torch.from_numpy(x_hwc.transpose(2, 0, 1)[None])
            with torch.no_grad():
                t = torch.tanh(conv(t))
                t = nn.functional.max_pool2d(t, 3, 3)
                flat = t[0].permute(1, 2, 0).reshape(-1)
                out = torch.softmax(head(flat), dim=0)
            return out.numpy()

    return Net("net_b", (12, 12, 3), None, wire, "softmax")


def build_net_c():
    torch.manual_seed(303)
    conv = nn.Conv2d(1, 6, 2, stride=2, padding=0)
    head = nn.Linear(5 * 5 * 6, 2)
    k, b = conv_to_wire(conv)
    wd, bd = dense_to_wire(head)
    wire = [
        dict(type=1, act="leaky_relu", alpha=0.1, frozen=False, kernels=k, bias=b, stride=2, pad=0),
        dict(type=3),
        dict(type=4, act="softmax", frozen=False, weights=wd, bias=bd),
    ]

    class Net(ToyNet):
        def forward(self, x_hwc):
            t = torch.from_numpy(x_hwc.transpose(2, 0, 1)[None])
            with torch.no_grad():
                t = nn.functional.leaky_relu(conv(t), 0.1)
                flat = t[0].permute(1, 2, 0).reshape(-1)
                out = torch.softmax(head(flat), dim=0)
            return out.numpy()

    return Net("net_c", (10, 10, 1), None, wire, "softmax")


def emit(net: ToyNet, n_inputs=5, seed=7):
    out_dir = GOLDEN / net.name
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "model.cnnw").write_bytes(encode_cnnw(net.wire))
    rng = np.random.default_rng(seed)
    fixtures = []
    for i in range(n_inputs):
        x = rng.uniform(0.0, 1.0, size=net.input_shape).astype(np.float32)
        y = net.forward(x)
        write_tensor(out_dir / f"input_{i:02d}.cnnt", x)
        write_tensor(out_dir / f"output_{i:02d}.cnnt", y)
        fixtures.append({"input": f"input_{i:02d}.cnnt", "output": f"output_{i:02d}.cnnt"})
    manifest = {
        "weights": "model.cnnw",
        "input_shape": list(net.input_shape),
        "tolerance": 1e-4,
        "seed": seed,
        "fixtures": fixtures,
    }
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"{net.name}: {n_inputs} fixture pairs")


def emit_zero_net():
    SCENE.mkdir(parents=True, exist_ok=True)
    wire = [
        dict(
            type=1,
            act="relu",
            frozen=True,
            kernels=np.zeros((3, 3, 3, 4), np.float32),
            bias=np.zeros(4, np.float32),
            stride=1,
            pad=1,
        ),
        dict(type=2, f=2, s=2),
        dict(type=3),
        dict(
            type=4,
            act="sigmoid",
            frozen=False,
            weights=np.zeros((16 * 16 * 4, 2), np.float32),
            bias=np.zeros(2, np.float32),
        ),
    ]
    (SCENE / "zero.cnnw").write_bytes(encode_cnnw(wire))
    print("scene/zero.cnnw written (32x32x3 input, all-zero weights)")


def main():
    for builder in (build_net_a, build_net_b, build_net_c):
        emit(builder())
    emit_zero_net()


if __name__ == "__main__":
    main()

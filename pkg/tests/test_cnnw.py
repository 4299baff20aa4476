"""CNNW weight-format round trips, error codes, and golden-fixture parity."""

import pathlib
import struct
import zlib

import numpy as np
import pytest

from pyrorisk.nn import (
    Activation,
    ChecksumError,
    Conv2d,
    Dense,
    Flatten,
    LayerFormatError,
    MagicError,
    MaxPool,
    Network,
    ShapeError,
    TruncatedError,
    VersionError,
    load_network,
    load_network_file,
    load_tensor,
    read_manifest,
    save_network,
    save_tensor,
)
from pyrorisk.nn.cnnw import infer_input_shape


def random_net(seed=0):
    rng = np.random.default_rng(seed)
    f32 = lambda *shape: rng.normal(size=shape).astype(np.float32)
    return Network(
        layers=[
            Conv2d(
                3, 3, 5, stride=1, pad=1,
                activation=Activation.LEAKY_RELU, alpha=0.125, frozen=True,
                kernels=f32(3, 3, 3, 5), bias=f32(5),
            ),
            MaxPool(2, 2),
            Flatten(),
            Dense(5 * 9, 2, activation=Activation.SIGMOID, weights=f32(45, 2), bias=f32(2)),
        ],
        input_shape=(6, 6, 3),
    )


class TestRoundTrip:
    def test_save_load_save_byte_identical(self):
        blob = save_network(random_net())
        again = save_network(load_network(blob, input_shape=(6, 6, 3)))
        assert blob == again

    def test_load_save_preserves_weights_exactly(self):
        net = random_net(3)
        loaded = load_network(save_network(net), input_shape=(6, 6, 3))
        assert np.array_equal(loaded.layers[0].kernels, net.layers[0].kernels)
        assert np.array_equal(loaded.layers[3].weights, net.layers[3].weights)
        assert loaded.layers[0].alpha == pytest.approx(0.125)
        assert loaded.layers[0].frozen is True
        assert loaded.layers[0].activation is Activation.LEAKY_RELU

    def test_forward_equal_after_round_trip(self):
        net = random_net(4)
        loaded = load_network(save_network(net), input_shape=(6, 6, 3))
        x = np.random.default_rng(5).uniform(size=(6, 6, 3)).astype(np.float32)
        assert net.forward(x).probabilities == loaded.forward(x).probabilities


class TestErrorCodes:
    def test_bad_magic(self):
        with pytest.raises(MagicError) as err:
            load_network(b"NOPE" + b"\x00" * 16)
        assert err.value.code == "bad_magic"

    def test_version_mismatch(self):
        blob = bytearray(save_network(random_net()))
        blob[4:8] = struct.pack("<I", 9)
        with pytest.raises(VersionError) as err:
            load_network(bytes(blob))
        assert err.value.code == "version"

    def test_truncation_leaves_no_partial_network(self):
        blob = save_network(random_net())
        for cut in (6, 13, len(blob) // 2, len(blob) - 3):
            with pytest.raises(TruncatedError) as err:
                load_network(blob[:cut])
            assert err.value.code == "truncated"

    def test_checksum_failure(self):
        # flip the stored CRC itself: structure parses, integrity fails
        blob = bytearray(save_network(random_net()))
        blob[-1] ^= 0xFF
        with pytest.raises(ChecksumError) as err:
            load_network(bytes(blob))
        assert err.value.code == "checksum"

    def test_checksum_catches_weight_corruption(self):
        blob = bytearray(save_network(random_net()))
        # first kernel float starts after the 12-byte header and the
        # 27-byte conv layer header; its low mantissa byte is structure-safe
        blob[12 + 27] ^= 0xFF
        with pytest.raises(ChecksumError):
            load_network(bytes(blob))

    def test_unknown_layer_tag(self):
        out = bytearray(b"CNNW")
        out += struct.pack("<I", 1)
        out += struct.pack("<I", 1)
        out += struct.pack("<BBB", 9, 0, 0)  # tag 9 does not exist
        out += struct.pack("<I", zlib.crc32(bytes(out)))
        with pytest.raises(LayerFormatError) as err:
            load_network(bytes(out))
        assert err.value.code == "layer"

    def test_trailing_bytes_rejected(self):
        blob = save_network(random_net()) + b"\x00"
        with pytest.raises((LayerFormatError, TruncatedError)):
            load_network(blob)

    def test_shape_inconsistent_stack(self):
        # conv emits 5 channels, next conv expects 7
        rng = np.random.default_rng(0)
        f32 = lambda *shape: rng.normal(size=shape).astype(np.float32)
        out = bytearray(b"CNNW")
        out += struct.pack("<I", 1)
        out += struct.pack("<I", 4)
        for c_in, c_out in ((3, 5), (7, 2)):
            out += struct.pack("<BBB", 1, 1, 0)
            out += struct.pack("<5I", 3, c_in, c_out, 1, 1)
            out += f32(3, 3, c_in, c_out).tobytes()
            out += f32(c_out).tobytes()
        out += struct.pack("<BBB", 3, 0, 0)
        out += struct.pack("<BBB", 4, 4, 0)
        out += struct.pack("<2I", 8, 2)
        out += f32(8, 2).tobytes()
        out += f32(2).tobytes()
        out += struct.pack("<I", zlib.crc32(bytes(out)))
        with pytest.raises(ShapeError) as err:
            load_network(bytes(out))
        assert err.value.code == "shape"


class TestTensorFiles:
    def test_round_trip(self, tmp_path):
        arr = np.random.default_rng(7).normal(size=(4, 5, 3)).astype(np.float32)
        path = tmp_path / "t.cnnt"
        save_tensor(path, arr)
        assert np.array_equal(load_tensor(path), arr)

    def test_magic_checked(self, tmp_path):
        path = tmp_path / "bad.cnnt"
        path.write_bytes(b"XXXX" + b"\x00" * 8)
        with pytest.raises(MagicError):
            load_tensor(path)


class TestGoldenFixtures:
    """Committed fixtures produced by an independent reference framework."""

    def golden_dirs(self, fixtures_dir):
        dirs = sorted(p.parent for p in (fixtures_dir / "golden").glob("*/manifest.json"))
        assert len(dirs) >= 3
        return dirs

    def test_engine_matches_reference_outputs(self, fixtures_dir):
        pairs_checked = 0
        for d in self.golden_dirs(fixtures_dir):
            manifest = read_manifest(d / "manifest.json")
            net = load_network_file(manifest["weights"])
            tol = manifest["tolerance"]
            for pair in manifest["fixtures"]:
                x = load_tensor(pair["input"])
                want = load_tensor(pair["output"])
                got = np.array(net.forward(x).probabilities, dtype=np.float32)
                assert np.abs(got - want).max() < tol
                pairs_checked += 1
        assert pairs_checked >= 15

    def test_reference_files_round_trip_byte_identical(self, fixtures_dir):
        # files were encoded outside this package; load -> save must
        # reproduce them exactly
        for d in self.golden_dirs(fixtures_dir):
            blob = (d / "model.cnnw").read_bytes()
            assert save_network(load_network(blob)) == blob

    def test_minimal_input_inference_is_consistent(self, fixtures_dir):
        for d in self.golden_dirs(fixtures_dir):
            net = load_network_file(d / "model.cnnw")
            inferred = infer_input_shape(net.layers)
            assert inferred is not None
            chain = net.shape_chain(inferred)
            assert chain[-1] == (net.layers[-1].out_features,)

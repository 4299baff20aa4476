import assert from "node:assert/strict";
import { test } from "node:test";
import {
  ActivationTag,
  LayerType,
  LayerWire,
  countParams,
  crc32,
  decodeCnnw,
  decodeTensor,
  encodeCnnw,
  encodeTensor,
} from "../src/wire";
import { gaussianArray, mulberry32 } from "../src/prng";

function sampleLayers(): LayerWire[] {
  const rng = mulberry32(99);
  return [
    {
      type: LayerType.Conv,
      activation: ActivationTag.LeakyRelu,
      alpha: 0.125,
      frozen: true,
      filterSize: 3,
      inChannels: 3,
      outChannels: 4,
      stride: 1,
      pad: 1,
      kernels: gaussianArray(rng, 3 * 3 * 3 * 4),
      bias: gaussianArray(rng, 4),
    },
    { type: LayerType.MaxPool, frozen: true, filterSize: 2, stride: 2 },
    { type: LayerType.Flatten, frozen: true },
    {
      type: LayerType.Dense,
      activation: ActivationTag.Sigmoid,
      frozen: false,
      inFeatures: 64,
      outFeatures: 2,
      weights: gaussianArray(rng, 128),
      bias: gaussianArray(rng, 2),
    },
  ];
}

test("encode -> decode -> encode is byte-identical", () => {
  const blob = encodeCnnw(sampleLayers());
  const again = encodeCnnw(decodeCnnw(blob));
  assert.deepEqual(Buffer.from(again), Buffer.from(blob));
});

test("decode recovers structure and leaky alpha", () => {
  const layers = decodeCnnw(encodeCnnw(sampleLayers()));
  assert.equal(layers.length, 4);
  const conv = layers[0];
  assert.equal(conv.type, LayerType.Conv);
  if (conv.type === LayerType.Conv) {
    assert.equal(conv.activation, ActivationTag.LeakyRelu);
    assert.ok(Math.abs((conv.alpha ?? 0) - 0.125) < 1e-7);
    assert.equal(conv.frozen, true);
    assert.equal(conv.pad, 1);
  }
});

test("crc corruption detected", () => {
  const blob = encodeCnnw(sampleLayers());
  blob[blob.length - 1] ^= 0xff;
  assert.throws(() => decodeCnnw(blob), /crc mismatch/);
});

test("truncation detected", () => {
  const blob = encodeCnnw(sampleLayers());
  assert.throws(() => decodeCnnw(blob.subarray(0, blob.length - 9)), /truncated|crc/);
});

test("crc32 matches the zlib check value", () => {
  // the classic test vector: crc32("123456789") = 0xCBF43926
  const data = new TextEncoder().encode("123456789");
  assert.equal(crc32(data), 0xcbf43926);
});

test("tensor file round trip", () => {
  const rng = mulberry32(7);
  const data = gaussianArray(rng, 2 * 3 * 4);
  const decoded = decodeTensor(encodeTensor([2, 3, 4], data));
  assert.deepEqual(decoded.shape, [2, 3, 4]);
  assert.deepEqual(decoded.data, data);
});

test("classifier head accounts for 102402 trainable parameters", () => {
  const head: LayerWire = {
    type: LayerType.Dense,
    activation: ActivationTag.Sigmoid,
    frozen: false,
    inFeatures: 51200,
    outFeatures: 2,
    weights: new Float32Array(51200 * 2),
    bias: new Float32Array(2),
  };
  const counts = countParams([{ type: LayerType.Flatten, frozen: true }, head]);
  assert.equal(counts.total, 102402);
  assert.equal(counts.trainable, 102402);
});

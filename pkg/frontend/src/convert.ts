/**
 * tf.LayersModel -> wire layers.
 *
 * The exporter owns every framework-semantics question: tfjs conv kernels
 * are already (row, col, inChannel, outChannel) and dense kernels
 * (in, out), both channels-last, so weights serialize in index order
 * without transposition. 'same' padding is only accepted where it equals
 * the engine's symmetric zero padding (odd filter, stride 1); a LeakyReLU
 * layer immediately after a linear conv/dense folds into that layer's
 * activation slot.
 */

import * as tf from "@tensorflow/tfjs";
import { ActivationTag, DenseWire, LayerType, LayerWire } from "./wire";

const ACTIVATION_BY_NAME: Record<string, ActivationTag> = {
  linear: ActivationTag.None,
  relu: ActivationTag.Relu,
  tanh: ActivationTag.Tanh,
  sigmoid: ActivationTag.Sigmoid,
  softmax: ActivationTag.Softmax,
};

function activationOf(config: tf.serialization.ConfigDict): ActivationTag {
  const name = (config.activation as string) ?? "linear";
  const tag = ACTIVATION_BY_NAME[name];
  if (tag === undefined) throw new Error(`unsupported activation '${name}'`);
  return tag;
}

function padFor(config: tf.serialization.ConfigDict, filterSize: number, stride: number): number {
  const padding = config.padding as string;
  if (padding === "valid") return 0;
  if (padding === "same") {
    if (stride !== 1 || filterSize % 2 === 0) {
      throw new Error(
        `'same' padding only exportable for odd filters at stride 1 (f=${filterSize}, s=${stride})`
      );
    }
    return (filterSize - 1) / 2;
  }
  throw new Error(`unsupported padding '${padding}'`);
}

function squareOf(value: unknown, what: string): number {
  const pair = Array.isArray(value) ? value : [value, value];
  if (pair[0] !== pair[1]) throw new Error(`non-square ${what} ${pair} not supported`);
  return pair[0] as number;
}

export function modelToWire(model: tf.LayersModel): LayerWire[] {
  const wire: LayerWire[] = [];
  for (const layer of model.layers) {
    const kind = layer.getClassName();
    const config = layer.getConfig();
    if (kind === "InputLayer") continue;

    if (kind === "Conv2D") {
      const filterSize = squareOf(config.kernelSize, "kernel");
      const stride = squareOf(config.strides, "stride");
      const [kernels, bias] = layer.getWeights();
      const [f, , cIn, cOut] = kernels.shape;
      if (f !== filterSize) throw new Error("kernel shape disagrees with config");
      if (!bias) throw new Error("conv layers must carry a bias");
      wire.push({
        type: LayerType.Conv,
        activation: activationOf(config),
        frozen: !layer.trainable,
        filterSize,
        inChannels: cIn,
        outChannels: cOut,
        stride,
        pad: padFor(config, filterSize, stride),
        kernels: kernels.dataSync() as Float32Array,
        bias: bias.dataSync() as Float32Array,
      });
    } else if (kind === "MaxPooling2D") {
      wire.push({
        type: LayerType.MaxPool,
        frozen: true,
        filterSize: squareOf(config.poolSize, "pool"),
        stride: squareOf(config.strides ?? config.poolSize, "pool stride"),
      });
    } else if (kind === "Flatten") {
      wire.push({ type: LayerType.Flatten, frozen: true });
    } else if (kind === "Dense") {
      const [weights, bias] = layer.getWeights();
      if (!bias) throw new Error("dense layers must carry a bias");
      const [inF, outF] = weights.shape;
      wire.push({
        type: LayerType.Dense,
        activation: activationOf(config),
        frozen: !layer.trainable,
        inFeatures: inF,
        outFeatures: outF,
        weights: weights.dataSync() as Float32Array,
        bias: bias.dataSync() as Float32Array,
      });
    } else if (kind === "LeakyReLU") {
      const prev = wire[wire.length - 1];
      if (!prev || !("activation" in prev) || prev.activation !== ActivationTag.None) {
        throw new Error("LeakyReLU must directly follow a linear conv/dense layer");
      }
      prev.activation = ActivationTag.LeakyRelu;
      prev.alpha = (config.alpha as number) ?? 0.01;
    } else {
      throw new Error(`unsupported layer type '${kind}'`);
    }
  }
  const head = wire[wire.length - 1];
  if (
    !head ||
    head.type !== LayerType.Dense ||
    ((head as DenseWire).activation !== ActivationTag.Sigmoid &&
      (head as DenseWire).activation !== ActivationTag.Softmax)
  ) {
    throw new Error("exported stacks must end in a sigmoid/softmax dense head");
  }
  return wire;
}

/** tfjs forward pass on one (H, W, C) tensor, returning the score vector. */
export function predictOne(model: tf.LayersModel, shape: number[], data: Float32Array): Float32Array {
  return tf.tidy(() => {
    const input = tf.tensor4d(data, [1, shape[0], shape[1], shape[2]]);
    const out = model.predict(input) as tf.Tensor;
    return out.dataSync() as Float32Array;
  });
}

/**
 * Toy model zoo. Weights are drawn from our own seeded PRNG (tfjs
 * initializers are not reliably seedable) so every build is reproducible.
 */

import * as tf from "@tensorflow/tfjs";
import { gaussianArray, mulberry32 } from "./prng";

export interface ToyModel {
  name: string;
  inputShape: [number, number, number];
  model: tf.LayersModel;
}

function seedWeights(model: tf.LayersModel, seed: number, scale = 0.35): void {
  const rng = mulberry32(seed);
  for (const layer of model.layers) {
    const weights = layer.getWeights();
    if (!weights.length) continue;
    layer.setWeights(
      weights.map((w) => {
        const size = w.shape.reduce((a, b) => a * b, 1);
        return tf.tensor(gaussianArray(rng, size, scale), w.shape);
      })
    );
  }
}

function freezeBackbone(model: tf.LayersModel): void {
  for (const layer of model.layers) {
    if (layer.getClassName() !== "Dense") layer.trainable = false;
  }
}

export function buildZoo(): ToyModel[] {
  const zoo: ToyModel[] = [];

  {
    // conv(relu) -> pool -> dense sigmoid, the classifier shape in miniature
    const model = tf.sequential({
      layers: [
        tf.layers.conv2d({
          inputShape: [16, 16, 3],
          filters: 8,
          kernelSize: 3,
          strides: 1,
          padding: "same",
          activation: "relu",
          useBias: true,
        }),
        tf.layers.maxPooling2d({ poolSize: 2, strides: 2 }),
        tf.layers.flatten(),
        tf.layers.dense({ units: 2, activation: "sigmoid", useBias: true }),
      ],
    });
    seedWeights(model, 11);
    freezeBackbone(model);
    zoo.push({ name: "toy_sigmoid", inputShape: [16, 16, 3], model });
  }

  {
    // two conv blocks, softmax head
    const model = tf.sequential({
      layers: [
        tf.layers.conv2d({
          inputShape: [20, 20, 3],
          filters: 4,
          kernelSize: 3,
          strides: 1,
          padding: "same",
          activation: "tanh",
          useBias: true,
        }),
        tf.layers.maxPooling2d({ poolSize: 2, strides: 2 }),
        tf.layers.conv2d({
          filters: 6,
          kernelSize: 3,
          strides: 1,
          padding: "valid",
          activation: "relu",
          useBias: true,
        }),
        tf.layers.flatten(),
        tf.layers.dense({ units: 3, activation: "softmax", useBias: true }),
      ],
    });
    seedWeights(model, 22);
    freezeBackbone(model);
    zoo.push({ name: "toy_softmax3", inputShape: [20, 20, 3], model });
  }

  {
    // leaky-relu conv folded from a separate tfjs layer
    const model = tf.sequential({
      layers: [
        tf.layers.conv2d({
          inputShape: [12, 12, 1],
          filters: 5,
          kernelSize: 2,
          strides: 2,
          padding: "valid",
          activation: "linear",
          useBias: true,
        }),
        tf.layers.leakyReLU({ alpha: 0.2 }),
        tf.layers.flatten(),
        tf.layers.dense({ units: 2, activation: "softmax", useBias: true }),
      ],
    });
    seedWeights(model, 33);
    zoo.push({ name: "toy_leaky", inputShape: [12, 12, 1], model });
  }

  {
    // strided valid conv, wide-ish head
    const model = tf.sequential({
      layers: [
        tf.layers.conv2d({
          inputShape: [18, 18, 2],
          filters: 7,
          kernelSize: 4,
          strides: 2,
          padding: "valid",
          activation: "relu",
          useBias: true,
        }),
        tf.layers.flatten(),
        tf.layers.dense({ units: 4, activation: "softmax", useBias: true }),
      ],
    });
    seedWeights(model, 44);
    zoo.push({ name: "toy_strided", inputShape: [18, 18, 2], model });
  }

  {
    // deeper pool chain, sigmoid head
    const model = tf.sequential({
      layers: [
        tf.layers.conv2d({
          inputShape: [24, 24, 3],
          filters: 6,
          kernelSize: 5,
          strides: 1,
          padding: "same",
          activation: "relu",
          useBias: true,
        }),
        tf.layers.maxPooling2d({ poolSize: 2, strides: 2 }),
        tf.layers.conv2d({
          filters: 8,
          kernelSize: 3,
          strides: 1,
          padding: "same",
          activation: "relu",
          useBias: true,
        }),
        tf.layers.maxPooling2d({ poolSize: 3, strides: 3 }),
        tf.layers.flatten(),
        tf.layers.dense({ units: 2, activation: "sigmoid", useBias: true }),
      ],
    });
    seedWeights(model, 55);
    freezeBackbone(model);
    zoo.push({ name: "toy_deep", inputShape: [24, 24, 3], model });
  }

  return zoo;
}

/** Classifier-shaped toy with all weights zero; heads then emit 0.5. */
export function buildZeroModel(): ToyModel {
  const model = tf.sequential({
    layers: [
      tf.layers.conv2d({
        inputShape: [16, 16, 3],
        filters: 4,
        kernelSize: 3,
        padding: "same",
        activation: "relu",
        useBias: true,
        kernelInitializer: "zeros",
        biasInitializer: "zeros",
      }),
      tf.layers.flatten(),
      tf.layers.dense({
        units: 2,
        activation: "sigmoid",
        useBias: true,
        kernelInitializer: "zeros",
        biasInitializer: "zeros",
      }),
    ],
  });
  freezeBackbone(model);
  return { name: "toy_zero", inputShape: [16, 16, 3], model };
}

/** Frozen conv backbone + trainable sigmoid head, the finetuning subject.
 * The fresh head starts at zero, the usual convention for a new head on
 * a frozen backbone; only the backbone draws seeded random weights. */
export function buildFinetuneModel(inputShape: [number, number, number]): tf.LayersModel {
  const model = tf.sequential({
    layers: [
      tf.layers.conv2d({
        inputShape,
        filters: 8,
        kernelSize: 3,
        strides: 1,
        padding: "same",
        activation: "relu",
        useBias: true,
      }),
      tf.layers.maxPooling2d({ poolSize: 2, strides: 2 }),
      tf.layers.flatten(),
      tf.layers.dense({
        units: 2,
        activation: "sigmoid",
        useBias: true,
        kernelInitializer: "zeros",
        biasInitializer: "zeros",
      }),
    ],
  });
  seedWeights(model, 77);
  const head = model.layers[model.layers.length - 1];
  head.setWeights(head.getWeights().map((w) => tf.zeros(w.shape)));
  freezeBackbone(model);
  return model;
}

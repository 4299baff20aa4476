/**
 * Toy transfer-learning run: frozen conv backbone, trainable dense head,
 * Adam at 1e-4, batches of 16, 10 epochs keeping the best checkpoint.
 *
 * The dataset is a directory per class of CNNT tensor files (the same
 * raw-tensor format the fixtures use), which keeps the trainer free of
 * image-codec dependencies. Class order is alphabetical; labels are
 * one-hot over that order.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import * as tf from "@tensorflow/tfjs";
import { modelToWire } from "./convert";
import { buildFinetuneModel } from "./models";
import { mulberry32, permutation } from "./prng";
import { decodeTensor, encodeCnnw } from "./wire";

export interface FinetuneOptions {
  epochs?: number;
  batchSize?: number;
  learningRate?: number;
  seed?: number;
}

export interface FinetuneResult {
  model: tf.LayersModel;
  classes: string[];
  bestEpoch: number;
  bestAccuracy: number;
  history: { epoch: number; loss: number; accuracy: number }[];
  inputShape: [number, number, number];
}

export interface LoadedDataset {
  xs: tf.Tensor4D;
  ys: tf.Tensor2D;
  classes: string[];
  inputShape: [number, number, number];
  count: number;
}

export function loadTensorDataset(dir: string, seed = 5): LoadedDataset {
  const classes = fs
    .readdirSync(dir, { withFileTypes: true })
    .filter((e) => e.isDirectory())
    .map((e) => e.name)
    .sort();
  if (classes.length !== 2) {
    throw new Error(`expected 2 class directories under ${dir}, found ${classes.length}`);
  }
  const samples: { data: Float32Array; label: number }[] = [];
  let shape: number[] | null = null;
  for (const [label, cls] of classes.entries()) {
    const files = fs
      .readdirSync(path.join(dir, cls))
      .filter((f) => f.endsWith(".cnnt"))
      .sort();
    for (const file of files) {
      const tensor = decodeTensor(fs.readFileSync(path.join(dir, cls, file)));
      if (shape === null) shape = tensor.shape;
      if (tensor.shape.join("x") !== shape.join("x")) {
        throw new Error(`tensor ${file} has shape ${tensor.shape}, expected ${shape}`);
      }
      samples.push({ data: tensor.data, label });
    }
  }
  if (!shape || shape.length !== 3) throw new Error("dataset tensors must be (H, W, C)");
  if (samples.length < 8) {
    throw new Error(`dataset too small to finetune: ${samples.length} samples`);
  }

  // one seeded shuffle up front; training then runs with shuffle off so
  // the whole procedure is reproducible
  const order = permutation(mulberry32(seed), samples.length);
  const size = shape.reduce((a, b) => a * b, 1);
  const xsData = new Float32Array(samples.length * size);
  const ysData = new Float32Array(samples.length * 2);
  order.forEach((sampleIdx, row) => {
    xsData.set(samples[sampleIdx].data, row * size);
    ysData[row * 2 + samples[sampleIdx].label] = 1;
  });
  return {
    xs: tf.tensor4d(xsData, [samples.length, shape[0], shape[1], shape[2]]),
    ys: tf.tensor2d(ysData, [samples.length, 2]),
    classes,
    inputShape: [shape[0], shape[1], shape[2]],
    count: samples.length,
  };
}

export async function toyFinetune(dataDir: string, options: FinetuneOptions = {}): Promise<FinetuneResult> {
  const { epochs = 10, batchSize = 16, learningRate = 1e-4, seed = 5 } = options;
  const dataset = loadTensorDataset(dataDir, seed);
  const model = buildFinetuneModel(dataset.inputShape);
  model.compile({
    optimizer: tf.train.adam(learningRate),
    loss: "binaryCrossentropy",
    metrics: ["accuracy"],
  });

  let bestEpoch = -1;
  let bestAccuracy = -1;
  let bestWeights: tf.Tensor[] | null = null;
  const history: { epoch: number; loss: number; accuracy: number }[] = [];

  await model.fit(dataset.xs, dataset.ys, {
    epochs,
    batchSize,
    shuffle: false,
    verbose: 0,
    callbacks: {
      onEpochEnd: async (epoch, logs) => {
        const accuracy = (logs?.acc ?? logs?.accuracy ?? 0) as number;
        history.push({ epoch, loss: logs?.loss as number, accuracy });
        if (accuracy > bestAccuracy) {
          bestAccuracy = accuracy;
          bestEpoch = epoch;
          bestWeights?.forEach((w) => w.dispose());
          bestWeights = model.getWeights().map((w) => w.clone());
        }
      },
    },
  });

  if (bestWeights) model.setWeights(bestWeights);
  dataset.xs.dispose();
  dataset.ys.dispose();
  return {
    model,
    classes: dataset.classes,
    bestEpoch,
    bestAccuracy,
    history,
    inputShape: dataset.inputShape,
  };
}

/** Export the kept-best checkpoint plus a training-metadata sidecar. */
export function exportFinetuned(result: FinetuneResult, outDir: string, options: FinetuneOptions = {}): string {
  fs.mkdirSync(outDir, { recursive: true });
  const cnnwPath = path.join(outDir, "finetuned.cnnw");
  fs.writeFileSync(cnnwPath, encodeCnnw(modelToWire(result.model)));
  const metadata = {
    classes: result.classes,
    input_shape: result.inputShape,
    epochs: options.epochs ?? 10,
    batch_size: options.batchSize ?? 16,
    learning_rate: options.learningRate ?? 1e-4,
    loss: "binaryCrossentropy",
    best_epoch: result.bestEpoch,
    best_accuracy: result.bestAccuracy,
    history: result.history,
  };
  fs.writeFileSync(path.join(outDir, "training.json"), JSON.stringify(metadata, null, 2) + "\n");
  return cnnwPath;
}

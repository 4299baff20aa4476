/**
 * Toy transfer-learning checks: frozen backbone stays frozen, keep-best
 * leaves exactly one checkpoint, and a separable toy set trains to 100%.
 */

import assert from "node:assert/strict";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { test } from "node:test";
import { exportFinetuned, loadTensorDataset, toyFinetune } from "../src/finetune";
import { mulberry32, uniformArray } from "../src/prng";
import { encodeTensor } from "../src/wire";

const H = 16;
const W = 16;
const C = 3;

/** Two classes separated by pixel intensity: dark vs bright. */
function writeSeparableDataset(dir: string, perClass = 24): void {
  const rng = mulberry32(4242);
  const ranges: Record<string, [number, number]> = {
    dark: [0.0, 0.35],
    bright: [0.65, 1.0],
  };
  for (const [cls, [lo, hi]] of Object.entries(ranges)) {
    const clsDir = path.join(dir, cls);
    fs.mkdirSync(clsDir, { recursive: true });
    for (let i = 0; i < perClass; i++) {
      const data = uniformArray(rng, H * W * C, lo, hi);
      fs.writeFileSync(
        path.join(clsDir, `sample_${String(i).padStart(3, "0")}.cnnt`),
        encodeTensor([H, W, C], data)
      );
    }
  }
}

function tmpDataset(): string {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "finetune-"));
  writeSeparableDataset(dir);
  return dir;
}

test("dataset loader reads class directories alphabetically", () => {
  const dir = tmpDataset();
  const dataset = loadTensorDataset(dir);
  assert.deepEqual(dataset.classes, ["bright", "dark"]);
  assert.equal(dataset.count, 48);
  assert.deepEqual(dataset.inputShape, [H, W, C]);
  dataset.xs.dispose();
  dataset.ys.dispose();
});

test("frozen backbone weights are bit-identical before and after training", async () => {
  const dir = tmpDataset();
  const result = await toyFinetune(dir, { epochs: 10 });
  const conv = result.model.layers.find((l) => l.getClassName() === "Conv2D");
  assert.ok(conv && !conv.trainable);

  // rebuild the untouched backbone: the builder seeds deterministically
  const { buildFinetuneModel } = await import("../src/models");
  const fresh = buildFinetuneModel([H, W, C]);
  const freshConv = fresh.layers.find((l) => l.getClassName() === "Conv2D");
  const before = freshConv!.getWeights().map((w) => w.dataSync());
  const after = conv!.getWeights().map((w) => w.dataSync());
  assert.equal(before.length, after.length);
  before.forEach((b, i) => assert.deepEqual(after[i], b));

  // ...while the head moved off its zero start
  const trainedHead = result.model.layers.find((l) => l.getClassName() === "Dense")!;
  const headAfter = trainedHead.getWeights()[0].dataSync();
  assert.ok(headAfter.some((v) => v !== 0));
});

test("keep-best export writes exactly one checkpoint with metadata", async () => {
  const dir = tmpDataset();
  const out = fs.mkdtempSync(path.join(os.tmpdir(), "finetune-out-"));
  const result = await toyFinetune(dir, { epochs: 10 });
  exportFinetuned(result, out, { epochs: 10 });
  const checkpoints = fs.readdirSync(out).filter((f) => f.endsWith(".cnnw"));
  assert.deepEqual(checkpoints, ["finetuned.cnnw"]);
  const metadata = JSON.parse(fs.readFileSync(path.join(out, "training.json"), "utf-8"));
  assert.equal(metadata.batch_size, 16);
  assert.equal(metadata.learning_rate, 1e-4);
  assert.equal(metadata.history.length, 10);
  assert.ok(metadata.best_epoch >= 0);
  assert.equal(metadata.best_accuracy, Math.max(...metadata.history.map((h: any) => h.accuracy)));
});

test("linearly separable toy set reaches 100% training accuracy", async () => {
  const dir = tmpDataset();
  // the recipe's Adam 1e-4 / batch 16; the zero-initialized head walks
  // straight onto the margin of a separable set
  const result = await toyFinetune(dir, { epochs: 40 });
  assert.equal(result.bestAccuracy, 1.0);
});

test("dataset too small is an explicit error", async () => {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), "finetune-small-"));
  const rng = mulberry32(1);
  for (const cls of ["a", "b"]) {
    fs.mkdirSync(path.join(dir, cls));
    fs.writeFileSync(
      path.join(dir, cls, "only.cnnt"),
      encodeTensor([H, W, C], uniformArray(rng, H * W * C))
    );
  }
  await assert.rejects(toyFinetune(dir), /too small/);
});

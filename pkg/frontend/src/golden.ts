/**
 * Golden-fixture emission: for each toy model, write the CNNW stream,
 * n seeded input tensors, the reference forward outputs, and a manifest
 * naming them with the parity tolerance.
 */

import * as fs from "node:fs";
import * as path from "node:path";
import { modelToWire, predictOne } from "./convert";
import { ToyModel } from "./models";
import { mulberry32, uniformArray } from "./prng";
import { encodeCnnw, encodeTensor } from "./wire";

export interface GoldenManifest {
  weights: string;
  input_shape: number[];
  tolerance: number;
  seed: number;
  fixtures: { input: string; output: string }[];
}

export function emitGolden(
  toy: ToyModel,
  outRoot: string,
  nInputs = 5,
  seed = 1234,
  tolerance = 1e-4
): GoldenManifest {
  const dir = path.join(outRoot, toy.name);
  fs.mkdirSync(dir, { recursive: true });

  const wire = modelToWire(toy.model);
  fs.writeFileSync(path.join(dir, "model.cnnw"), encodeCnnw(wire));

  const rng = mulberry32(seed);
  const size = toy.inputShape.reduce((a, b) => a * b, 1);
  const fixtures: { input: string; output: string }[] = [];
  for (let i = 0; i < nInputs; i++) {
    const input = uniformArray(rng, size);
    const output = predictOne(toy.model, toy.inputShape, input);
    const inputName = `input_${String(i).padStart(2, "0")}.cnnt`;
    const outputName = `output_${String(i).padStart(2, "0")}.cnnt`;
    fs.writeFileSync(path.join(dir, inputName), encodeTensor([...toy.inputShape], input));
    fs.writeFileSync(path.join(dir, outputName), encodeTensor([output.length], output));
    fixtures.push({ input: inputName, output: outputName });
  }

  const manifest: GoldenManifest = {
    weights: "model.cnnw",
    input_shape: [...toy.inputShape],
    tolerance,
    seed,
    fixtures,
  };
  fs.writeFileSync(path.join(dir, "manifest.json"), JSON.stringify(manifest, null, 2) + "\n");
  return manifest;
}

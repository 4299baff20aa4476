/**
 * Exporter CLI.
 *
 *   golden   --out DIR [--seed N] [--inputs N]   emit the toy-model zoo
 *   zero     --out DIR                           emit the all-zero model
 *   finetune --data DIR --out DIR [--epochs N]   toy transfer-learning run
 *
 * The emitted files (model.cnnw, *.cnnt, manifest.json) are the bridge to
 * the inference engine; `pyrorisk verify-fixtures --manifest <file>`
 * checks parity from the other side.
 */

import * as path from "node:path";
import { exportFinetuned, toyFinetune } from "./finetune";
import { emitGolden } from "./golden";
import { buildZeroModel, buildZoo } from "./models";

function flagValue(argv: string[], name: string): string | undefined {
  const i = argv.indexOf(name);
  return i >= 0 && i + 1 < argv.length ? argv[i + 1] : undefined;
}

async function main(): Promise<number> {
  const [command, ...rest] = process.argv.slice(2);
  if (command === "golden") {
    const out = flagValue(rest, "--out") ?? "fixtures";
    const seed = Number(flagValue(rest, "--seed") ?? 1234);
    const inputs = Number(flagValue(rest, "--inputs") ?? 5);
    for (const toy of buildZoo()) {
      const manifest = emitGolden(toy, out, inputs, seed);
      console.log(`${toy.name}: ${manifest.fixtures.length} fixture pairs -> ${path.join(out, toy.name)}`);
    }
    return 0;
  }
  if (command === "zero") {
    const out = flagValue(rest, "--out") ?? "fixtures";
    const manifest = emitGolden(buildZeroModel(), out, 2, 1);
    console.log(`toy_zero: ${manifest.fixtures.length} fixture pairs -> ${path.join(out, "toy_zero")}`);
    return 0;
  }
  if (command === "finetune") {
    const data = flagValue(rest, "--data");
    const out = flagValue(rest, "--out") ?? "fixtures/finetuned";
    if (!data) {
      console.error("finetune requires --data DIR");
      return 2;
    }
    const epochs = Number(flagValue(rest, "--epochs") ?? 10);
    const result = await toyFinetune(data, { epochs });
    const cnnwPath = exportFinetuned(result, out, { epochs });
    console.log(
      `best epoch ${result.bestEpoch} (accuracy ${result.bestAccuracy.toFixed(3)}) -> ${cnnwPath}`
    );
    return 0;
  }
  console.error("usage: main.js <golden|zero|finetune> [flags]");
  return 2;
}

main().then(
  (code) => process.exit(code),
  (err) => {
    console.error(err);
    process.exit(1);
  }
);

/**
 * Golden-fixture generation and cross-language parity: the inference
 * engine (driven through its CLI) must reproduce the tfjs forward
 * outputs on every exported toy network.
 */

import assert from "node:assert/strict";
import { execFileSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { test } from "node:test";
import { emitGolden } from "../src/golden";
import { buildZeroModel, buildZoo } from "../src/models";
import { decodeTensor } from "../src/wire";

const PYTHON = process.env.PYTHON ?? "python3";

function tmpDir(prefix: string): string {
  return fs.mkdtempSync(path.join(os.tmpdir(), prefix));
}

function python(...argv: string[]): string {
  return execFileSync(PYTHON, argv, { encoding: "utf-8" });
}

test("zoo emission is seed-deterministic", () => {
  const a = tmpDir("golden-a-");
  const b = tmpDir("golden-b-");
  for (const out of [a, b]) {
    for (const toy of buildZoo()) emitGolden(toy, out, 3, 777);
  }
  for (const toy of buildZoo()) {
    for (const file of fs.readdirSync(path.join(a, toy.name)).sort()) {
      const bytesA = fs.readFileSync(path.join(a, toy.name, file));
      const bytesB = fs.readFileSync(path.join(b, toy.name, file));
      assert.deepEqual(bytesA, bytesB, `${toy.name}/${file} differs between runs`);
    }
  }
});

test("engine matches the reference outputs on every exported network", () => {
  const out = tmpDir("golden-parity-");
  const zoo = buildZoo();
  assert.ok(zoo.length >= 5, "need at least five toy networks");
  for (const toy of zoo) {
    emitGolden(toy, out, 5, 1234);
    const manifest = path.join(out, toy.name, "manifest.json");
    const stdout = python("-m", "pyrorisk.cli", "verify-fixtures", "--manifest", manifest);
    assert.match(stdout, /overall max_abs_dev=/, `${toy.name}: ${stdout}`);
  }
});

test("exported files survive an engine load -> save byte-identically", () => {
  const out = tmpDir("golden-roundtrip-");
  for (const toy of buildZoo()) {
    emitGolden(toy, out, 1, 42);
    const file = path.join(out, toy.name, "model.cnnw");
    const script =
      "import sys, pathlib\n" +
      "from pyrorisk.nn import load_network, save_network\n" +
      "data = pathlib.Path(sys.argv[1]).read_bytes()\n" +
      "sys.exit(0 if save_network(load_network(data)) == data else 1)\n";
    python("-c", script, file);
  }
});

test("zero-weight export makes the engine emit half scores", () => {
  const out = tmpDir("golden-zero-");
  const zero = buildZeroModel();
  emitGolden(zero, out, 1, 5);
  const dir = path.join(out, zero.name);
  const stdout = python(
    "-m",
    "pyrorisk.cli",
    "infer",
    "--weights",
    path.join(dir, "model.cnnw"),
    "--tensor",
    path.join(dir, "input_00.cnnt")
  );
  const payload = JSON.parse(stdout);
  assert.deepEqual(payload.probabilities, [0.5, 0.5]);
});

test("fixture outputs of softmax heads sum to one", () => {
  const out = tmpDir("golden-softmax-");
  for (const toy of buildZoo()) {
    if (!toy.name.includes("softmax") && !toy.name.includes("leaky") && !toy.name.includes("strided")) continue;
    emitGolden(toy, out, 3, 99);
    for (const file of fs.readdirSync(path.join(out, toy.name))) {
      if (!file.startsWith("output_")) continue;
      const tensor = decodeTensor(fs.readFileSync(path.join(out, toy.name, file)));
      const sum = tensor.data.reduce((acc, v) => acc + v, 0);
      assert.ok(Math.abs(sum - 1) < 1e-5, `${toy.name}/${file} sums to ${sum}`);
    }
  }
});

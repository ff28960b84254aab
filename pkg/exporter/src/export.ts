import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { readCsv } from "./csv.js";
import { trainForest, trainTestSplit } from "./forest.js";
import { type Manifest, buildManifest } from "./manifest.js";
import { toModelJson } from "./model.js";
import { seededRandom } from "./rng.js";

export interface ExportOptions {
  csv: string;
  trees: number;
  depth: number;
  seed: number;
  out: string;
  holdout: number; // fraction of rows reserved for the manifest
}

export interface ExportResult {
  modelPath: string;
  manifestPath: string;
  manifest: Manifest;
}

export function runExport(options: ExportOptions): ExportResult {
  const data = readCsv(options.csv);
  const { train, test } = trainTestSplit(data, options.holdout, seededRandom(options.seed));
  const forest = trainForest(train, {
    trees: options.trees,
    depth: options.depth,
    seed: options.seed,
  });
  const modelJson = toModelJson(forest);
  const manifest = buildManifest(forest, modelJson, train, test, {
    trees: options.trees,
    depth: options.depth,
    seed: options.seed,
  });

  mkdirSync(options.out, { recursive: true });
  const modelPath = join(options.out, "model.json");
  const manifestPath = join(options.out, "manifest.json");
  writeFileSync(modelPath, modelJson);
  writeFileSync(manifestPath, JSON.stringify(manifest, null, 2) + "\n");
  return { modelPath, manifestPath, manifest };
}

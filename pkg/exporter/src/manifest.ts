import { createHash } from "node:crypto";

import type { Dataset } from "./csv.js";
import { type TrainedForest, accuracy, predictForest } from "./forest.js";

// The manifest lets a consumer prove, offline, that its reimplementation of
// forest inference agrees with the trainer: it pins the model file by
// checksum and records every held-out prediction next to the true label.

export interface ManifestRow {
  instance: number[];
  label: string;
  predicted: string;
}

export interface Manifest {
  checksum: string;
  trees: number;
  depth: number;
  seed: number;
  train_rows: number;
  test_rows: number;
  train_accuracy: number;
  test_accuracy: number;
  holdout: ManifestRow[];
}

export function buildManifest(
  forest: TrainedForest,
  modelJson: string,
  train: Dataset,
  test: Dataset,
  params: { trees: number; depth: number; seed: number }
): Manifest {
  const holdout: ManifestRow[] = test.rows.map((row, i) => ({
    instance: row,
    label: test.labels[i],
    predicted: predictForest(forest, row),
  }));
  return {
    checksum: "sha256:" + createHash("sha256").update(modelJson, "utf-8").digest("hex"),
    trees: params.trees,
    depth: params.depth,
    seed: params.seed,
    train_rows: train.rows.length,
    test_rows: test.rows.length,
    train_accuracy: accuracy(forest, train),
    test_accuracy: accuracy(forest, test),
    holdout,
  };
}

import type { Dataset } from "./csv.js";
import { type Rng, randomInt, seededRandom, shuffled } from "./rng.js";
import { type TreeNode, growTree, majorityClass, predictTree } from "./tree.js";

export interface ForestParams {
  trees: number;
  depth: number;
  seed: number;
}

export interface TrainedForest {
  classes: string[];
  features: string[];
  trees: TreeNode[];
}

export function trainTestSplit(
  data: Dataset,
  holdout: number,
  rng: Rng
): { train: Dataset; test: Dataset } {
  const order = shuffled(
    Array.from({ length: data.rows.length }, (_, i) => i),
    rng
  );
  const testCount = Math.max(1, Math.round(order.length * holdout));
  const pick = (indices: number[]): Dataset => ({
    features: data.features,
    rows: indices.map((i) => data.rows[i]),
    labels: indices.map((i) => data.labels[i]),
  });
  return {
    train: pick(order.slice(testCount)),
    test: pick(order.slice(0, testCount)),
  };
}

export function trainForest(data: Dataset, params: ForestParams): TrainedForest {
  if (data.rows.length === 0) throw new Error("cannot train on an empty dataset");
  const classes = [...new Set(data.labels)].sort();
  const classIndex = new Map(classes.map((c, k) => [c, k]));
  const y = data.labels.map((label) => classIndex.get(label)!);
  const m = data.features.length;
  const featuresPerSplit = Math.max(1, Math.round(Math.sqrt(m)));
  const rng = seededRandom(params.seed);
  const n = data.rows.length;

  const trees: TreeNode[] = [];
  for (let t = 0; t < params.trees; t++) {
    const bootstrap: number[] = [];
    for (let i = 0; i < n; i++) bootstrap.push(randomInt(rng, n));
    trees.push(
      growTree(data.rows, y, bootstrap, {
        maxDepth: params.depth,
        featuresPerSplit,
        classCount: classes.length,
        rng,
      })
    );
  }
  return { classes, features: data.features.slice(), trees };
}

export function voteCounts(forest: TrainedForest, row: readonly number[]): number[] {
  const counts = new Array(forest.classes.length).fill(0);
  for (const tree of forest.trees) counts[predictTree(tree, row)]++;
  return counts;
}

// Majority vote; ties go to the smallest class index, like the consumer.
export function predictForest(forest: TrainedForest, row: readonly number[]): string {
  return forest.classes[majorityClass(voteCounts(forest, row))];
}

export function accuracy(forest: TrainedForest, data: Dataset): number {
  if (data.rows.length === 0) return 0;
  let correct = 0;
  for (let i = 0; i < data.rows.length; i++) {
    if (predictForest(forest, data.rows[i]) === data.labels[i]) correct++;
  }
  return correct / data.rows.length;
}

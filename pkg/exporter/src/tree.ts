import { type Rng, shuffled } from "./rng.js";

// Plain CART with gini impurity. Nodes use the exact shape the model JSON
// wants, so serialization is just JSON.stringify: left means value <= threshold.

export type TreeNode =
  | { leaf: number }
  | { feature: number; op: "<="; threshold: number; left: TreeNode; right: TreeNode };

export interface TreeParams {
  maxDepth: number;
  featuresPerSplit: number;
  classCount: number;
  rng: Rng;
}

export function gini(counts: readonly number[]): number {
  let total = 0;
  for (const c of counts) total += c;
  if (total === 0) return 0;
  let sumSquares = 0;
  for (const c of counts) sumSquares += (c / total) * (c / total);
  return 1 - sumSquares;
}

// First index with the maximal count, matching the consumer's tie rule.
export function majorityClass(counts: readonly number[]): number {
  let best = 0;
  for (let k = 1; k < counts.length; k++) {
    if (counts[k] > counts[best]) best = k;
  }
  return best;
}

function classCounts(labels: readonly number[], indices: readonly number[], k: number): number[] {
  const counts = new Array(k).fill(0);
  for (const i of indices) counts[labels[i]]++;
  return counts;
}

interface BestSplit {
  feature: number;
  threshold: number;
  impurity: number;
}

function bestSplit(
  rows: readonly number[][],
  labels: readonly number[],
  indices: number[],
  candidates: readonly number[],
  classCount: number
): BestSplit | null {
  let best: BestSplit | null = null;
  const n = indices.length;
  for (const f of candidates) {
    const order = indices.slice().sort((a, b) => rows[a][f] - rows[b][f]);
    const left = new Array(classCount).fill(0);
    const right = classCounts(labels, order, classCount);
    for (let i = 0; i < n - 1; i++) {
      const label = labels[order[i]];
      left[label]++;
      right[label]--;
      const a = rows[order[i]][f];
      const b = rows[order[i + 1]][f];
      if (a === b) continue;
      const threshold = (a + b) / 2;
      if (threshold <= a || threshold >= b) continue; // adjacent doubles
      const nl = i + 1;
      const nr = n - nl;
      const impurity = (nl * gini(left) + nr * gini(right)) / n;
      if (best === null || impurity < best.impurity) {
        best = { feature: f, threshold, impurity };
      }
    }
  }
  return best;
}

export function growTree(
  rows: readonly number[][],
  labels: readonly number[],
  indices: number[],
  params: TreeParams
): TreeNode {
  const featureIds = Array.from({ length: rows[0].length }, (_, j) => j);

  const grow = (subset: number[], depth: number): TreeNode => {
    const counts = classCounts(labels, subset, params.classCount);
    const vote = majorityClass(counts);
    if (depth === 0 || subset.length < 2 || counts[vote] === subset.length) {
      return { leaf: vote };
    }
    const candidates = shuffled(featureIds, params.rng).slice(0, params.featuresPerSplit);
    const split = bestSplit(rows, labels, subset, candidates, params.classCount);
    if (split === null) {
      return { leaf: vote };
    }
    const leftRows: number[] = [];
    const rightRows: number[] = [];
    for (const i of subset) {
      (rows[i][split.feature] <= split.threshold ? leftRows : rightRows).push(i);
    }
    return {
      feature: split.feature,
      op: "<=",
      threshold: split.threshold,
      left: grow(leftRows, depth - 1),
      right: grow(rightRows, depth - 1),
    };
  };

  return grow(indices, params.maxDepth);
}

export function predictTree(node: TreeNode, row: readonly number[]): number {
  let cursor = node;
  while (!("leaf" in cursor)) {
    cursor = row[cursor.feature] <= cursor.threshold ? cursor.left : cursor.right;
  }
  return cursor.leaf;
}

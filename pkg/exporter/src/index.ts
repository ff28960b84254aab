export { parseCsv, readCsv, type Dataset } from "./csv.js";
export { runExport, type ExportOptions, type ExportResult } from "./export.js";
export {
  accuracy,
  predictForest,
  trainForest,
  trainTestSplit,
  voteCounts,
  type ForestParams,
  type TrainedForest,
} from "./forest.js";
export { buildManifest, type Manifest, type ManifestRow } from "./manifest.js";
export { toModelDocument, toModelJson } from "./model.js";
export { randomInt, seededRandom, shuffled, type Rng } from "./rng.js";
export { gini, growTree, majorityClass, predictTree, type TreeNode, type TreeParams } from "./tree.js";

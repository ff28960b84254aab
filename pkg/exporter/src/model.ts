import type { TrainedForest } from "./forest.js";

// Serialization into the consumer's model format, version 1. Every trained
// feature is numeric, so they all export as ordinal. Tree nodes already use
// the wire shape; JSON.stringify does the rest.

export function toModelDocument(forest: TrainedForest): object {
  return {
    version: 1,
    classes: forest.classes,
    features: forest.features.map((name) => ({ name, kind: "ordinal" })),
    trees: forest.trees,
  };
}

export function toModelJson(forest: TrainedForest): string {
  return JSON.stringify(toModelDocument(forest), null, 2) + "\n";
}

import { readFileSync } from "node:fs";

// Expected layout: header row with feature names, final column is the label.
// All feature cells must be numeric; labels are free-form strings.

export interface Dataset {
  features: string[];
  rows: number[][];
  labels: string[];
}

export function parseCsv(text: string): Dataset {
  const lines = text
    .split(/\r?\n/)
    .map((line) => line.trim())
    .filter((line) => line.length > 0);
  if (lines.length < 2) {
    throw new Error("csv needs a header row and at least one data row");
  }
  const header = lines[0].split(",").map((cell) => cell.trim());
  if (header.length < 2) {
    throw new Error("csv needs at least one feature column and a label column");
  }
  const features = header.slice(0, -1);
  const rows: number[][] = [];
  const labels: string[] = [];
  for (let i = 1; i < lines.length; i++) {
    const cells = lines[i].split(",").map((cell) => cell.trim());
    if (cells.length !== header.length) {
      throw new Error(`row ${i}: expected ${header.length} cells, got ${cells.length}`);
    }
    const row = cells.slice(0, -1).map((cell, j) => {
      const value = Number(cell);
      if (!Number.isFinite(value)) {
        throw new Error(`row ${i}: feature ${features[j]} is not numeric: ${cell}`);
      }
      return value;
    });
    rows.push(row);
    labels.push(cells[cells.length - 1]);
  }
  return { features, rows, labels };
}

export function readCsv(path: string): Dataset {
  return parseCsv(readFileSync(path, "utf-8"));
}

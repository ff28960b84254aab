#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { runExport } from "./export.js";

yargs(hideBin(process.argv))
  .command(
    "export",
    "train a random forest on a CSV and write model.json + manifest.json",
    (y) =>
      y.options({
        csv: { type: "string", demandOption: true, describe: "training CSV (last column is the label)" },
        trees: { type: "number", default: 100 },
        depth: { type: "number", default: 6 },
        seed: { type: "number", default: 1 },
        out: { type: "string", demandOption: true, describe: "output directory" },
        holdout: { type: "number", default: 0.2, describe: "held-out fraction recorded in the manifest" },
      }),
    (argv) => {
      const result = runExport({
        csv: argv.csv,
        trees: argv.trees,
        depth: argv.depth,
        seed: argv.seed,
        out: argv.out,
        holdout: argv.holdout,
      });
      const m = result.manifest;
      console.log(
        `wrote ${result.modelPath} (${m.trees} trees, depth ${m.depth}); ` +
          `train ${m.train_accuracy.toFixed(4)} on ${m.train_rows} rows, ` +
          `test ${m.test_accuracy.toFixed(4)} on ${m.test_rows} rows`
      );
    }
  )
  .demandCommand(1)
  .strict()
  .parse();

"""Generate the synthetic training data behind fixtures/scaled.

Every feature carries the class signal on its own: for positive rows a
feature is drawn above its per-feature boundary, for negative rows
below, and with small probability it crosses to the wrong side
(independently per feature).  Redundant views keep the trained trees
shallow, with only a handful of distinct features per tree, which keeps
entailment queries against the forest encoding cheap.  Values are
quantized to eighths so thresholds repeat across trees.
"""
import csv
import pathlib

import numpy as np

ROWS = 1600
FEATURES = 20
CROSSOVER = 0.10
STEP = 0.125  # quantization grid over [0, 32)
SEED = 20260814

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "scaled" / "data.csv"


def main() -> None:
    rng = np.random.default_rng(SEED)
    # staggered per-feature boundaries, kept away from the range edges
    centers = np.array([8.0 + 1.5 * (j % 11) for j in range(FEATURES)])

    y = rng.integers(0, 2, size=ROWS)
    cross = rng.random((ROWS, FEATURES)) < CROSSOVER
    high = (y[:, None] == 1) ^ cross
    u = rng.random((ROWS, FEATURES))
    lo = centers[None, :] * u
    hi = centers[None, :] + (32.0 - centers[None, :]) * u
    vals = np.where(high, hi, lo)
    vals = np.floor(vals / STEP) * STEP
    # quantization must not drag a high-side value under its boundary
    vals = np.where(high & (vals < centers[None, :]), centers[None, :], vals)
    vals = np.clip(vals, 0.0, 32.0 - STEP)

    names = [f"f{j + 1:02d}" for j in range(FEATURES)]
    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names + ["label"])
        for i in range(ROWS):
            rec = [
                str(int(v)) if v == int(v) else repr(float(v))
                for v in vals[i]
            ]
            rec.append("pos" if y[i] else "neg")
            writer.writerow(rec)
    print(f"wrote {OUT} ({ROWS} rows, {FEATURES} features, {int(y.sum())} positive)")


if __name__ == "__main__":
    main()

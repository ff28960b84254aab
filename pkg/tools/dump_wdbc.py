#!/usr/bin/env python3
"""Dump the breast-cancer diagnostic dataset bundled with scikit-learn to
fixtures/wdbc/wdbc.csv (30 numeric features, last column is the label)."""

import pathlib

from sklearn.datasets import load_breast_cancer


def fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def main() -> None:
    data = load_breast_cancer()
    out = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "wdbc"
    out.mkdir(parents=True, exist_ok=True)
    names = [n.replace(" ", "-") for n in data.feature_names]
    lines = [",".join(names + ["label"])]
    for row, target in zip(data.data, data.target):
        label = data.target_names[target]
        lines.append(",".join(fmt(v) for v in row) + "," + label)
    path = out / "wdbc.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {path} ({len(lines) - 1} rows, {len(names)} features)")


if __name__ == "__main__":
    main()

"""Portable model and dataset files.

Model files are JSON with a fixed canonical emission (stable key order, floats
written with shortest round-trip text), so ``dumps(load(path))`` is byte-stable
and thresholds survive the exporter boundary bit-exactly. Datasets are
RFC 4180 CSV whose header names the features in model order, optionally
followed by a trailing label column.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Sequence

from .model import (
    BINARY,
    CATEGORICAL,
    ORDINAL,
    FeatureSpec,
    Forest,
    Instance,
    Leaf,
    ModelError,
    Node,
    Split,
    check_instance,
)

FORMAT_VERSION = 1


class LoadError(ValueError):
    """Parse or schema violation; the message names the offending element."""


def _fail(path: str, msg: str):
    raise LoadError(f"{path}: {msg}")


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        _fail(path, f"missing {key!r}")
    return obj[key]


def _parse_feature(obj, idx: int) -> FeatureSpec:
    path = f"features[{idx}]"
    if not isinstance(obj, dict):
        _fail(path, "must be an object")
    name = _require(obj, "name", path)
    kind = _require(obj, "kind", path)
    if not isinstance(name, str) or not name:
        _fail(path, "name must be a non-empty string")
    values = obj.get("values", [])
    extra = set(obj) - {"name", "kind", "values"}
    if extra:
        _fail(path, f"unknown keys {sorted(extra)}")
    try:
        return FeatureSpec(id=idx + 1, name=name, kind=kind, values=tuple(values))
    except ModelError as e:
        _fail(path, str(e))


def _parse_node(obj, features: list[FeatureSpec], nclasses: int, path: str) -> Node:
    if not isinstance(obj, dict):
        _fail(path, "node must be an object")
    if "leaf" in obj:
        if set(obj) != {"leaf"}:
            _fail(path, "leaf node carries only the 'leaf' key")
        k = obj["leaf"]
        if not isinstance(k, int) or isinstance(k, bool) or not 0 <= k < nclasses:
            _fail(path, f"leaf class {k!r} out of range 0..{nclasses - 1}")
        return Leaf(k)
    f = _require(obj, "feature", path)
    op = _require(obj, "op", path)
    if not isinstance(f, int) or isinstance(f, bool) or not 0 <= f < len(features):
        _fail(path, f"feature index {f!r} out of range")
    left = _parse_node(_require(obj, "left", path), features, nclasses, path + ".left")
    right = _parse_node(_require(obj, "right", path), features, nclasses, path + ".right")
    if op == "<=":
        t = _require(obj, "threshold", path)
        if not isinstance(t, (int, float)) or isinstance(t, bool) or math.isnan(t) or math.isinf(t):
            _fail(path, f"threshold {t!r} is not a finite number")
        return Split(feature=f, op="<=", threshold=float(t), left=left, right=right)
    if op == "in":
        vals = _require(obj, "values", path)
        if not isinstance(vals, list) or not vals:
            _fail(path, "'in' split needs a non-empty values list")
        return Split(feature=f, op="in", values=tuple(vals), left=left, right=right)
    _fail(path, f"unknown op {op!r}")


def loads_model(text: str) -> Forest:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise LoadError(f"not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise LoadError("top level: must be an object")
    version = _require(doc, "version", "top level")
    if version != FORMAT_VERSION:
        _fail("version", f"unknown format version {version!r} (supported: {FORMAT_VERSION})")
    raw_features = _require(doc, "features", "top level")
    raw_classes = _require(doc, "classes", "top level")
    raw_trees = _require(doc, "trees", "top level")
    if not isinstance(raw_features, list) or not raw_features:
        _fail("features", "must be a non-empty list")
    if not isinstance(raw_classes, list) or not raw_classes:
        _fail("classes", "must be a non-empty list")
    if not isinstance(raw_trees, list) or not raw_trees:
        _fail("trees", "must be a non-empty list")
    features = [_parse_feature(f, i) for i, f in enumerate(raw_features)]
    classes = [str(c) for c in raw_classes]
    trees = [
        _parse_node(t, features, len(classes), f"trees[{i}]") for i, t in enumerate(raw_trees)
    ]
    try:
        return Forest(features=features, classes=classes, trees=trees)
    except ModelError as e:
        raise LoadError(str(e)) from None


def load_model(path) -> Forest:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise LoadError(f"cannot read model file: {e}") from None
    return loads_model(text)


def _emit_node(node: Node) -> dict:
    if isinstance(node, Leaf):
        return {"leaf": node.klass}
    rec: dict = {"feature": node.feature, "op": node.op}
    if node.op == "<=":
        # ints stay ints in JSON; float text is repr-based, exact on reload
        t = node.threshold
        rec["threshold"] = int(t) if float(t).is_integer() and abs(t) < 2**53 else t
    else:
        rec["values"] = list(node.values)
    rec["left"] = _emit_node(node.left)
    rec["right"] = _emit_node(node.right)
    return rec


def dumps_model(forest: Forest) -> str:
    feats = []
    for f in forest.features:
        rec = {"name": f.name, "kind": f.kind}
        if f.kind == CATEGORICAL:
            rec["values"] = list(f.values)
        feats.append(rec)
    doc = {
        "version": FORMAT_VERSION,
        "features": feats,
        "classes": list(forest.classes),
        "trees": [_emit_node(t) for t in forest.trees],
    }
    return json.dumps(doc, indent=2) + "\n"


def save_model(forest: Forest, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_model(forest))


def _parse_cell(spec: FeatureSpec, cell: str, where: str):
    if spec.kind == BINARY:
        if cell not in ("0", "1"):
            raise LoadError(f"{where}: binary feature {spec.name!r} needs 0 or 1, got {cell!r}")
        return int(cell)
    if spec.kind == CATEGORICAL:
        for v in spec.values:
            if cell == str(v):
                return v
        raise LoadError(f"{where}: value {cell!r} not in domain of {spec.name!r}")
    try:
        return float(cell)
    except ValueError:
        raise LoadError(f"{where}: ordinal feature {spec.name!r} needs a number, got {cell!r}") from None


def load_dataset(path, forest: Forest) -> tuple[list[Instance], list[str] | None]:
    """Instances plus labels when the CSV carries a trailing label column."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as e:
        raise LoadError(f"cannot read dataset: {e}") from None
    if not rows:
        return [], None
    header = rows[0]
    names = forest.feature_names()
    if header[: len(names)] != names:
        raise LoadError(
            f"header mismatch: expected features {names}, got {header[:len(names)]}"
        )
    if len(header) == len(names):
        labeled = False
    elif len(header) == len(names) + 1:
        labeled = True
    else:
        raise LoadError(f"header has {len(header)} columns, expected {len(names)} or {len(names) + 1}")
    instances, labels = [], []
    for r, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise LoadError(f"row {r}: has {len(row)} columns, expected {len(header)}")
        where = f"row {r}"
        vals = [_parse_cell(spec, cell, where) for spec, cell in zip(forest.features, row)]
        try:
            instances.append(check_instance(forest, vals))
        except ModelError as e:
            raise LoadError(f"{where}: {e}") from None
        if labeled:
            labels.append(row[-1])
    return instances, (labels if labeled else None)


def load_instances(path, forest: Forest) -> list[Instance]:
    return load_dataset(path, forest)[0]


def format_value(spec: FeatureSpec, v) -> str:
    if spec.kind == ORDINAL:
        return repr(int(v)) if float(v).is_integer() else repr(float(v))
    return str(v)


def dumps_dataset(forest: Forest, instances: Sequence[Instance], labels: Sequence[str] | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = forest.feature_names() + (["label"] if labels is not None else [])
    w.writerow(header)
    for i, inst in enumerate(instances):
        row = [format_value(spec, v) for spec, v in zip(forest.features, inst)]
        if labels is not None:
            row.append(labels[i])
        w.writerow(row)
    return buf.getvalue()

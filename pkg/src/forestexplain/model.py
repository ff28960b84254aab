"""In-memory random forest model: typed features, decision trees, majority vote.

Feature positions are 0-based everywhere in memory; the 1-based ``FeatureSpec.id``
is kept for display and for explanation output, which reports features as 1..m.
Ties in the majority vote go to the class with the smallest index in the
forest's class list, so the serialized class order is the tie-break order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence, Union

BINARY = "binary"
CATEGORICAL = "categorical"
ORDINAL = "ordinal"
KINDS = (BINARY, CATEGORICAL, ORDINAL)


class ModelError(ValueError):
    """Structural problem in a forest, tree, or instance."""


@dataclass(frozen=True)
class FeatureSpec:
    id: int                      # 1-based, contiguous
    name: str
    kind: str
    values: tuple = ()           # categorical domain, order is part of the model

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ModelError(f"feature {self.name!r}: unknown kind {self.kind!r}")
        if self.kind == CATEGORICAL:
            if not self.values:
                raise ModelError(f"feature {self.name!r}: empty categorical domain")
            if len(set(self.values)) != len(self.values):
                raise ModelError(f"feature {self.name!r}: duplicate categorical values")
        elif self.values:
            raise ModelError(f"feature {self.name!r}: only categorical features list values")


@dataclass(frozen=True)
class Leaf:
    klass: int                   # 0-based index into Forest.classes


@dataclass(frozen=True)
class Split:
    feature: int                 # 0-based feature position
    op: str                      # "<=" or "in"
    threshold: float = math.nan  # for op "<="
    values: tuple = ()           # for op "in"; left edge means x in values
    left: "Node" = None
    right: "Node" = None


Node = Union[Leaf, Split]
Instance = tuple


@dataclass
class Forest:
    features: list[FeatureSpec]
    classes: list[str]
    trees: list[Node]

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not self.trees:
            raise ModelError("forest has no trees")
        if not self.classes:
            raise ModelError("forest has no classes")
        if len(set(self.classes)) != len(self.classes):
            raise ModelError("duplicate class names")
        for pos, spec in enumerate(self.features):
            if spec.id != pos + 1:
                raise ModelError(f"feature ids must be 1..m contiguous, got {spec.id} at position {pos}")
        for t, root in enumerate(self.trees):
            # feasible region per feature while walking, to reject dead branches
            region = {}
            self._check_node(root, region, f"tree {t}")

    def _check_node(self, node: Node, region: dict, where: str) -> None:
        if isinstance(node, Leaf):
            if not 0 <= node.klass < len(self.classes):
                raise ModelError(f"{where}: leaf class {node.klass} out of range")
            return
        if not isinstance(node, Split):
            raise ModelError(f"{where}: node is neither leaf nor split")
        if node.left is None or node.right is None:
            raise ModelError(f"{where}: internal node missing a child")
        if not 0 <= node.feature < len(self.features):
            raise ModelError(f"{where}: feature {node.feature} out of range")
        spec = self.features[node.feature]
        if spec.kind == CATEGORICAL:
            if node.op != "in":
                raise ModelError(f"{where}: categorical split must use 'in'")
            if not set(node.values) <= set(spec.values):
                raise ModelError(f"{where}: split values outside domain of {spec.name!r}")
            allowed = region.get(node.feature, frozenset(spec.values))
            inside = allowed & frozenset(node.values)
            outside = allowed - frozenset(node.values)
            for branch, feasible in ((node.left, inside), (node.right, outside)):
                if not feasible:
                    raise ModelError(f"{where}: branch on {spec.name!r} is unreachable")
                region[node.feature] = feasible
                self._check_node(branch, region, where)
            region[node.feature] = allowed
        else:
            if node.op != "<=":
                raise ModelError(f"{where}: {spec.kind} split must use '<='")
            t = node.threshold
            if not isinstance(t, (int, float)) or math.isnan(t) or math.isinf(t):
                raise ModelError(f"{where}: bad threshold {t!r}")
            if spec.kind == BINARY and not 0 <= t < 1:
                raise ModelError(f"{where}: binary split threshold must lie in [0,1)")
            lo, hi = region.get(node.feature, (-math.inf, math.inf))
            # left edge keeps x <= t, right edge keeps x > t
            for branch, bounds in ((node.left, (lo, min(hi, t))), (node.right, (max(lo, t), hi))):
                blo, bhi = bounds
                if blo >= bhi:
                    raise ModelError(f"{where}: branch on {spec.name!r} at {t} is unreachable")
                region[node.feature] = bounds
                self._check_node(branch, region, where)
            region[node.feature] = (lo, hi)

    @property
    def m(self) -> int:
        return len(self.features)

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def feature_names(self) -> list[str]:
        return [f.name for f in self.features]


def check_instance(forest: Forest, values: Sequence) -> Instance:
    """Validate raw values against the forest's feature domains; returns a tuple."""
    if len(values) != forest.m:
        raise ModelError(f"instance has {len(values)} values, expected {forest.m}")
    out = []
    for spec, v in zip(forest.features, values):
        if spec.kind == BINARY:
            if v not in (0, 1):
                raise ModelError(f"feature {spec.name!r}: binary value must be 0 or 1, got {v!r}")
            out.append(int(v))
        elif spec.kind == CATEGORICAL:
            if v not in spec.values:
                raise ModelError(f"feature {spec.name!r}: value {v!r} not in domain")
            out.append(v)
        else:
            if not isinstance(v, (int, float)) or math.isnan(v) or math.isinf(v):
                raise ModelError(f"feature {spec.name!r}: ordinal value must be a finite number, got {v!r}")
            out.append(float(v))
    return tuple(out)


def _goes_left(node: Split, value) -> bool:
    if node.op == "in":
        return value in node.values
    return value <= node.threshold


def predict_tree(tree: Node, instance: Sequence) -> int:
    """Class index voted by one tree (walks the unique consistent path)."""
    node = tree
    while isinstance(node, Split):
        node = node.left if _goes_left(node, instance[node.feature]) else node.right
    if not isinstance(node, Leaf):
        raise ModelError("malformed tree: walk ended on a non-leaf")
    return node.klass


def vote_counts(forest: Forest, instance: Sequence) -> dict[str, int]:
    """Votes per class name, in class order; counts sum to the tree count."""
    counts = [0] * forest.class_count
    for tree in forest.trees:
        counts[predict_tree(tree, instance)] += 1
    return {name: counts[j] for j, name in enumerate(forest.classes)}


def predict_index(forest: Forest, instance: Sequence) -> int:
    """Majority-vote class index; ties resolved to the smallest class index."""
    counts = [0] * forest.class_count
    for tree in forest.trees:
        counts[predict_tree(tree, instance)] += 1
    best = 0
    for j in range(1, len(counts)):
        if counts[j] > counts[best]:
            best = j
    return best


def predict(forest: Forest, instance: Sequence) -> str:
    return forest.classes[predict_index(forest, instance)]


def iter_paths(tree: Node) -> Iterator[tuple[list[tuple[Split, bool]], Leaf]]:
    """Yield (edges, leaf) per root-to-leaf path; an edge is (split, went_right)."""
    stack: list[tuple[Node, list]] = [(tree, [])]
    while stack:
        node, edges = stack.pop()
        if isinstance(node, Leaf):
            yield edges, node
            continue
        stack.append((node.right, edges + [(node, True)]))
        stack.append((node.left, edges + [(node, False)]))


def tree_node_count(tree: Node) -> int:
    if isinstance(tree, Leaf):
        return 1
    return 1 + tree_node_count(tree.left) + tree_node_count(tree.right)


def forest_node_count(forest: Forest) -> int:
    return sum(tree_node_count(t) for t in forest.trees)

"""Finite abstraction of the forest's feature space.

Numeric features only matter up to the thresholds the forest actually tests,
so each ordinal feature collapses to the intervals cut out by its pooled,
sorted threshold set: (-inf, t1], (t1, t2], ..., (tk, +inf). Categorical
features keep one indicator per domain value, binary features a single
indicator. Features never tested by any tree get no variables at all; they
cannot influence the prediction and never appear in explanations.

Variables are allocated densely from 1 in feature order, so the abstraction
owns the prefix 1..nvars and the encoder allocates everything else above.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

from .cardinality import VarPool
from .model import BINARY, CATEGORICAL, ORDINAL, Forest, Instance, Split, check_instance


@dataclass(frozen=True)
class SoftLiteral:
    """One instance-describing literal, eligible for inclusion in explanations."""

    feature: int  # 0-based index into forest.features
    literal: int  # signed variable, true under the instance


@dataclass(frozen=True)
class Abstraction:
    forest: Forest
    thresholds: tuple[tuple[float, ...], ...]  # per feature; empty unless used ordinal
    feature_vars: tuple[tuple[int, ...], ...]  # per feature; empty when unused
    nvars: int

    def is_used(self, feature: int) -> bool:
        return bool(self.feature_vars[feature])

    def used_features(self) -> list[int]:
        return [f for f in range(len(self.feature_vars)) if self.feature_vars[f]]


def build_abstraction(forest: Forest) -> Abstraction:
    m = forest.m
    used = [False] * m
    pooled: list[set[float]] = [set() for _ in range(m)]
    for tree in forest.trees:
        stack = [tree]
        while stack:
            node = stack.pop()
            if isinstance(node, Split):
                used[node.feature] = True
                if forest.features[node.feature].kind == ORDINAL:
                    pooled[node.feature].add(float(node.threshold))
                stack.append(node.left)
                stack.append(node.right)
    pool = VarPool()
    thresholds: list[tuple[float, ...]] = []
    feature_vars: list[tuple[int, ...]] = []
    for f, spec in enumerate(forest.features):
        if not used[f]:
            thresholds.append(())
            feature_vars.append(())
            continue
        if spec.kind == BINARY:
            thresholds.append(())
            feature_vars.append((pool.new(),))
        elif spec.kind == CATEGORICAL:
            thresholds.append(())
            feature_vars.append(tuple(pool.new() for _ in spec.values))
        else:
            cuts = tuple(sorted(pooled[f]))
            thresholds.append(cuts)
            feature_vars.append(tuple(pool.new() for _ in range(len(cuts) + 1)))
    return Abstraction(
        forest=forest,
        thresholds=tuple(thresholds),
        feature_vars=tuple(feature_vars),
        nvars=pool.count,
    )


def interval_index(thresholds: tuple[float, ...], x: float) -> int:
    """Index of the half-open interval (t_i, t_{i+1}] containing x; interval 0
    is (-inf, t_1], values equal to a threshold land on its lower side."""
    return bisect_left(thresholds, x)


def interval_representative(thresholds: tuple[float, ...], i: int) -> float:
    """A concrete value inside interval i: the upper endpoint when finite,
    otherwise one past the last threshold (or 0 when there are no cuts)."""
    if not thresholds:
        return 0.0
    if i < len(thresholds):
        return thresholds[i]
    return thresholds[-1] + 1.0


def cell_index(abstraction: Abstraction, feature: int, value) -> int:
    """Position of a feature value within the feature's abstract domain."""
    spec = abstraction.forest.features[feature]
    if spec.kind == BINARY:
        return int(value)
    if spec.kind == CATEGORICAL:
        return spec.values.index(value)
    return interval_index(abstraction.thresholds[feature], float(value))


def cell_of(abstraction: Abstraction, instance: Instance) -> tuple[int, ...]:
    """Canonical key of the abstract cell containing an instance; unused
    features collapse to 0. Instances sharing a key traverse every tree
    identically."""
    key = []
    for f in range(abstraction.forest.m):
        if not abstraction.is_used(f):
            key.append(0)
        else:
            key.append(cell_index(abstraction, f, instance[f]))
    return tuple(key)


def soft_literals(abstraction: Abstraction, instance: Instance) -> list[SoftLiteral]:
    """Instance literals in feature order, one per used feature. For binary
    features the indicator is signed by the value; for the others the
    indicator of the matching value or interval is asserted positively."""
    values = check_instance(abstraction.forest, instance)
    out: list[SoftLiteral] = []
    for f, spec in enumerate(abstraction.forest.features):
        vars_ = abstraction.feature_vars[f]
        if not vars_:
            continue
        if spec.kind == BINARY:
            lit = vars_[0] if values[f] == 1 else -vars_[0]
        else:
            lit = vars_[cell_index(abstraction, f, values[f])]
        out.append(SoftLiteral(feature=f, literal=lit))
    return out


def abstract_domain_size(abstraction: Abstraction) -> int:
    """Number of abstract cells: binary features contribute 2, categorical
    ones their domain size, ordinal ones one more than their pooled cut
    count (so an untested ordinal feature contributes a single cell)."""
    size = 1
    for f, spec in enumerate(abstraction.forest.features):
        if spec.kind == BINARY:
            size *= 2
        elif spec.kind == CATEGORICAL:
            size *= len(spec.values)
        else:
            size *= len(abstraction.thresholds[f]) + 1
    return size

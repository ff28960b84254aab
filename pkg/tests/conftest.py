"""Shared fixtures: the running-example forest and seeded random model generators."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from forestexplain.model import (
    BINARY,
    CATEGORICAL,
    ORDINAL,
    FeatureSpec,
    Forest,
    Leaf,
    Split,
)
from forestexplain.model_io import load_model

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURES = REPO_ROOT / "fixtures"

RUNNING_EXAMPLE = FIXTURES / "running_example.json"
RUNNING_INSTANCE = (1, 0, 1, 70.0)


@pytest.fixture(scope="session")
def running_example() -> Forest:
    return load_model(RUNNING_EXAMPLE)


def random_forest(
    rng: random.Random,
    m: int = 4,
    trees: int = 3,
    depth: int = 3,
    classes: int = 2,
    kinds: tuple = (BINARY, ORDINAL),
    threshold_grid: int = 8,
) -> Forest:
    """Random valid forest. Paths stay consistent by splitting inside the
    feasible region tracked per feature; some features may end up unused."""
    features = []
    for j in range(m):
        kind = rng.choice(kinds)
        if kind == CATEGORICAL:
            size = rng.randint(2, 4)
            features.append(
                FeatureSpec(id=j + 1, name=f"f{j + 1}", kind=kind, values=tuple(f"v{i}" for i in range(size)))
            )
        else:
            features.append(FeatureSpec(id=j + 1, name=f"f{j + 1}", kind=kind))
    class_names = [f"c{k}" for k in range(classes)]

    def grow(level: int, region: dict):
        if level == 0 or rng.random() < 0.25:
            return Leaf(rng.randrange(classes))
        candidates = []
        for j, spec in enumerate(features):
            if spec.kind == BINARY:
                lo, hi = region.get(j, (-1.0, 2.0))
                if lo < 0 < hi:
                    candidates.append((j, 0.0))
            elif spec.kind == ORDINAL:
                lo, hi = region.get(j, (0.0, float(threshold_grid)))
                cuts = [t for t in range(1, threshold_grid) if lo < t < hi]
                if cuts:
                    candidates.append((j, float(rng.choice(cuts))))
            else:
                allowed = region.get(j, frozenset(spec.values))
                if len(allowed) >= 2:
                    candidates.append((j, allowed))
        if not candidates:
            return Leaf(rng.randrange(classes))
        j, cut = candidates[rng.randrange(len(candidates))]
        spec = features[j]
        if spec.kind == CATEGORICAL:
            allowed = sorted(cut)
            k = rng.randint(1, len(allowed) - 1)
            subset = frozenset(rng.sample(allowed, k))
            left_region = dict(region)
            left_region[j] = frozenset(allowed) & subset
            right_region = dict(region)
            right_region[j] = frozenset(allowed) - subset
            return Split(
                feature=j,
                op="in",
                values=tuple(sorted(subset)),
                left=grow(level - 1, left_region),
                right=grow(level - 1, right_region),
            )
        lo, hi = region.get(j, (-1.0, 2.0) if spec.kind == BINARY else (0.0, float(threshold_grid)))
        left_region = dict(region)
        left_region[j] = (lo, cut)
        right_region = dict(region)
        right_region[j] = (cut, hi)
        return Split(
            feature=j,
            op="<=",
            threshold=cut,
            left=grow(level - 1, left_region),
            right=grow(level - 1, right_region),
        )

    forest_trees = [grow(depth, {}) for _ in range(trees)]
    return Forest(features=features, classes=class_names, trees=forest_trees)


def random_instance(rng: random.Random, forest: Forest, threshold_grid: int = 8):
    vals = []
    for spec in forest.features:
        if spec.kind == BINARY:
            vals.append(rng.randint(0, 1))
        elif spec.kind == CATEGORICAL:
            vals.append(rng.choice(spec.values))
        else:
            vals.append(float(rng.randint(0, threshold_grid)))
    return tuple(vals)


def enumerate_cells(forest: Forest, abstraction):
    """Yield (cell key, representative instance) over the whole abstract
    space; unused features are pinned to a default value."""
    import itertools

    from forestexplain.abstraction import interval_representative

    axes = []
    for f, spec in enumerate(forest.features):
        if not abstraction.is_used(f):
            axes.append([None])
        elif spec.kind == BINARY:
            axes.append([0, 1])
        elif spec.kind == CATEGORICAL:
            axes.append(list(range(len(spec.values))))
        else:
            axes.append(list(range(len(abstraction.thresholds[f]) + 1)))
    for combo in itertools.product(*axes):
        cell = tuple(0 if c is None else c for c in combo)
        rep = []
        for f, spec in enumerate(forest.features):
            c = combo[f]
            if spec.kind == BINARY:
                rep.append(0 if c is None else c)
            elif spec.kind == CATEGORICAL:
                rep.append(spec.values[0 if c is None else c])
            else:
                rep.append(0.0 if c is None else interval_representative(abstraction.thresholds[f], c))
        yield cell, tuple(rep)


def check_encoding_faithful(forest: Forest, enc, check_votes: bool = True) -> int:
    """Walk every abstract cell and require that (a) unit propagation under
    the cell either conflicts only on target cells or forces exactly the
    votes the trees cast, and (b) the formula is satisfiable exactly on the
    cells where the forest picks a non-target class, with every model
    decoding back into the same cell. Returns the number of cells checked."""
    from forestexplain.abstraction import cell_of
    from forestexplain.encoder import cell_assumptions, model_to_instance
    from forestexplain.model import predict_index, predict_tree
    from forestexplain.solver import Solver

    solver = Solver()
    solver.ensure_vars(enc.nvars)
    for c in enc.clauses:
        solver.add_clause(c)
    abstraction = enc.abstraction
    checked = 0
    for cell, rep in enumerate_cells(forest, abstraction):
        checked += 1
        assumptions = cell_assumptions(abstraction, cell)
        predicted = predict_index(forest, rep)
        ok, assigned = solver.propagate_under(assumptions)
        if not ok:
            assert predicted == enc.target, f"propagation conflict on cell {cell} predicting {predicted}"
        elif check_votes:
            for i, tree in enumerate(forest.trees):
                klass = predict_tree(tree, rep)
                for k in range(forest.class_count):
                    forced = assigned.get(enc.vote_vars[i][k])
                    assert forced is not None, f"cell {cell}: vote {i}/{k} not forced"
                    assert forced == (k == klass), f"cell {cell}: tree {i} vote mismatch"
        sat = solver.solve(assumptions)
        assert sat == (predicted != enc.target), f"cell {cell}: sat={sat} predicted={predicted}"
        if sat:
            witness = model_to_instance(enc, solver.model)
            assert predict_index(forest, witness) != enc.target
            assert cell_of(abstraction, witness) == cell
    return checked

import random

from forestexplain.abstraction import (
    abstract_domain_size,
    build_abstraction,
    cell_of,
    interval_index,
    interval_representative,
    soft_literals,
)
from forestexplain.model import (
    BINARY,
    CATEGORICAL,
    ORDINAL,
    FeatureSpec,
    Forest,
    Leaf,
    Split,
    predict,
)

from conftest import RUNNING_INSTANCE, random_forest, random_instance


class TestThresholdPooling:
    def test_running_example(self, running_example):
        abs_ = build_abstraction(running_example)
        assert abs_.thresholds == ((), (), (), (75.0,))
        # three binary indicators plus two weight intervals
        assert abs_.feature_vars == ((1,), (2,), (3,), (4, 5))
        assert abs_.nvars == 5

    def test_duplicates_collapse_and_sort(self):
        features = (FeatureSpec(1, "x", ORDINAL),)
        trees = []
        for t in (3.0, 7.0, 7.0, 5.0):
            trees.append(Split(0, "<=", t, left=Leaf(0), right=Leaf(1)))
        forest = Forest(features=features, classes=("a", "b"), trees=tuple(trees))
        abs_ = build_abstraction(forest)
        assert abs_.thresholds[0] == (3.0, 5.0, 7.0)
        assert len(abs_.feature_vars[0]) == 4

    def test_unused_feature_gets_no_vars(self):
        features = (
            FeatureSpec(1, "a", BINARY),
            FeatureSpec(2, "b", BINARY),
            FeatureSpec(3, "c", ORDINAL),
        )
        tree = Split(0, "<=", 0.0, left=Leaf(0), right=Leaf(1))
        forest = Forest(features=features, classes=("n", "y"), trees=(tree,))
        abs_ = build_abstraction(forest)
        assert abs_.feature_vars == ((1,), (), ())
        assert abs_.used_features() == [0]
        assert len(soft_literals(abs_, (0, 1, 5.0))) == 1


class TestIntervals:
    def test_index_boundaries(self):
        cuts = (3.0, 5.0, 7.0)
        assert interval_index(cuts, 2.0) == 0
        assert interval_index(cuts, 3.0) == 0  # threshold belongs below
        assert interval_index(cuts, 3.5) == 1
        assert interval_index(cuts, 5.0) == 1
        assert interval_index(cuts, 7.0) == 2
        assert interval_index(cuts, 7.1) == 3
        assert interval_index((), 42.0) == 0

    def test_representatives_land_in_their_interval(self):
        cuts = (3.0, 5.0, 7.0)
        for i in range(4):
            assert interval_index(cuts, interval_representative(cuts, i)) == i
        assert interval_representative((), 0) == 0.0

    def test_representative_of_top_interval(self):
        assert interval_representative((75.0,), 1) == 76.0
        assert interval_representative((75.0,), 0) == 75.0


class TestSoftLiterals:
    def test_running_instance(self, running_example):
        abs_ = build_abstraction(running_example)
        lits = soft_literals(abs_, RUNNING_INSTANCE)
        assert [(s.feature, s.literal) for s in lits] == [(0, 1), (1, -2), (2, 3), (3, 4)]

    def test_binary_negative_side(self, running_example):
        abs_ = build_abstraction(running_example)
        lits = soft_literals(abs_, (0, 1, 0, 80.0))
        assert [(s.feature, s.literal) for s in lits] == [(0, -1), (1, 2), (2, -3), (3, 5)]

    def test_categorical_value_indicator(self):
        features = (FeatureSpec(1, "color", CATEGORICAL, ("red", "green", "blue")),)
        tree = Split(0, "in", values=("green",), left=Leaf(1), right=Leaf(0))
        forest = Forest(features=features, classes=("n", "y"), trees=(tree,))
        abs_ = build_abstraction(forest)
        assert abs_.feature_vars[0] == (1, 2, 3)
        assert soft_literals(abs_, ("blue",))[0].literal == 3
        assert soft_literals(abs_, ("red",))[0].literal == 1


class TestDomainSize:
    def test_running_example_is_sixteen(self, running_example):
        assert abstract_domain_size(build_abstraction(running_example)) == 16

    def test_mixed_kinds(self):
        features = (
            FeatureSpec(1, "a", BINARY),
            FeatureSpec(2, "c", CATEGORICAL, ("x", "y", "z")),
            FeatureSpec(3, "o", ORDINAL),
        )
        t1 = Split(2, "<=", 1.0, left=Leaf(0), right=Split(2, "<=", 4.0, left=Leaf(1), right=Leaf(0)))
        forest = Forest(features=features, classes=("n", "y"), trees=(t1,))
        # 2 * 3 * 3: the untested binary/categorical features still span
        # their raw domains, the ordinal one has two cuts
        assert abstract_domain_size(build_abstraction(forest)) == 2 * 3 * 3


class TestCellSemantics:
    def test_prediction_is_constant_on_cells(self):
        rng = random.Random(11)
        for _ in range(40):
            forest = random_forest(rng)
            abs_ = build_abstraction(forest)
            seen = {}
            for _ in range(30):
                inst = random_instance(rng, forest)
                key = cell_of(abs_, inst)
                pred = predict(forest, inst)
                if key in seen:
                    assert seen[key] == pred
                else:
                    seen[key] = pred

    def test_representatives_reproduce_instance_cells(self):
        rng = random.Random(12)
        for _ in range(40):
            forest = random_forest(rng)
            abs_ = build_abstraction(forest)
            inst = random_instance(rng, forest)
            rebuilt = []
            for f, spec in enumerate(forest.features):
                if spec.kind == ORDINAL:
                    cuts = abs_.thresholds[f]
                    rebuilt.append(
                        interval_representative(cuts, interval_index(cuts, float(inst[f])))
                    )
                else:
                    rebuilt.append(inst[f])
            assert predict(forest, tuple(rebuilt)) == predict(forest, inst)
            assert cell_of(abs_, tuple(rebuilt)) == cell_of(abs_, inst)

    def test_var_allocation_is_dense_and_ordered(self):
        rng = random.Random(13)
        for _ in range(20):
            forest = random_forest(rng, kinds=(BINARY, ORDINAL, CATEGORICAL))
            abs_ = build_abstraction(forest)
            flat = [v for vars_ in abs_.feature_vars for v in vars_]
            assert flat == list(range(1, abs_.nvars + 1))

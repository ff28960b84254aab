import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from forestexplain.model import FeatureSpec, Forest, Leaf, Split, predict
from forestexplain.model_io import (
    LoadError,
    dumps_dataset,
    dumps_model,
    load_dataset,
    load_instances,
    load_model,
    loads_model,
)

from conftest import RUNNING_EXAMPLE, random_forest, random_instance


def test_fixture_shape(running_example):
    assert len(running_example.trees) == 3
    assert running_example.m == 4
    assert running_example.classes == ["No", "Yes"]
    assert running_example.feature_names() == [
        "blocked-arteries",
        "good-blood-circulation",
        "chest-pain",
        "weight",
    ]


def test_fixture_is_canonical():
    text = RUNNING_EXAMPLE.read_text(encoding="utf-8")
    assert dumps_model(loads_model(text)) == text


def test_round_trip_is_byte_stable():
    rng = random.Random(5)
    for _ in range(25):
        forest = random_forest(rng, m=5, trees=3, depth=3, classes=3, kinds=("binary", "ordinal", "categorical"))
        once = dumps_model(forest)
        assert dumps_model(loads_model(once)) == once


def test_round_trip_preserves_predictions():
    rng = random.Random(6)
    for _ in range(25):
        forest = random_forest(rng, m=4, trees=4, depth=3, classes=3)
        again = loads_model(dumps_model(forest))
        for _ in range(10):
            inst = random_instance(rng, forest)
            assert predict(again, inst) == predict(forest, inst)


@settings(max_examples=200, deadline=None)
@given(st.floats(allow_nan=False, allow_infinity=False, width=64))
def test_threshold_float_round_trip_exact(t):
    forest = Forest(
        features=[FeatureSpec(1, "x", "ordinal")],
        classes=["a", "b"],
        trees=[Split(feature=0, op="<=", threshold=t, left=Leaf(0), right=Leaf(1))],
    )
    back = loads_model(dumps_model(forest))
    assert back.trees[0].threshold == t or (back.trees[0].threshold == 0.0 and t == 0.0)


class TestLoadErrors:
    def test_zero_trees(self):
        with pytest.raises(LoadError, match="trees"):
            loads_model('{"version":1,"features":[{"name":"a","kind":"binary"}],"classes":["x"],"trees":[]}')

    def test_unknown_version(self):
        with pytest.raises(LoadError, match="version"):
            loads_model('{"version":9,"features":[],"classes":[],"trees":[]}')

    def test_not_json(self):
        with pytest.raises(LoadError, match="JSON"):
            loads_model("{nope")

    def test_error_names_offending_element(self):
        doc = (
            '{"version":1,"features":[{"name":"a","kind":"binary"}],"classes":["x","y"],'
            '"trees":[{"feature":0,"op":"<=","threshold":0,"left":{"leaf":5},"right":{"leaf":0}}]}'
        )
        with pytest.raises(LoadError, match=r"trees\[0\].left"):
            loads_model(doc)

    def test_unknown_op(self):
        doc = (
            '{"version":1,"features":[{"name":"a","kind":"ordinal"}],"classes":["x"],'
            '"trees":[{"feature":0,"op":">","threshold":1,"left":{"leaf":0},"right":{"leaf":0}}]}'
        )
        with pytest.raises(LoadError, match="unknown op"):
            loads_model(doc)

    def test_feature_index_out_of_range(self):
        doc = (
            '{"version":1,"features":[{"name":"a","kind":"binary"}],"classes":["x"],'
            '"trees":[{"feature":3,"op":"<=","threshold":0,"left":{"leaf":0},"right":{"leaf":0}}]}'
        )
        with pytest.raises(LoadError, match="feature index"):
            loads_model(doc)

    def test_bad_kind(self):
        doc = '{"version":1,"features":[{"name":"a","kind":"text"}],"classes":["x"],"trees":[{"leaf":0}]}'
        with pytest.raises(LoadError, match="unknown kind"):
            loads_model(doc)

    def test_missing_file(self, tmp_path):
        with pytest.raises(LoadError, match="cannot read"):
            load_model(tmp_path / "nope.json")


class TestDataset:
    HEADER = "blocked-arteries,good-blood-circulation,chest-pain,weight"

    def test_running_instance(self, running_example, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text(self.HEADER + "\n1,0,1,70\n", encoding="utf-8")
        assert load_instances(p, running_example) == [(1, 0, 1, 70.0)]

    def test_empty_file(self, running_example, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("", encoding="utf-8")
        assert load_instances(p, running_example) == []

    def test_domain_violation_is_row_indexed(self, running_example, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text(self.HEADER + "\n1,0,1,70\n1,0,7,70\n", encoding="utf-8")
        with pytest.raises(LoadError, match="row 3"):
            load_instances(p, running_example)

    def test_header_mismatch(self, running_example, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text("a,b,c,d\n1,0,1,70\n", encoding="utf-8")
        with pytest.raises(LoadError, match="header"):
            load_instances(p, running_example)

    def test_trailing_label_column(self, running_example, tmp_path):
        p = tmp_path / "d.csv"
        p.write_text(self.HEADER + ",label\n1,0,1,70,Yes\n0,0,1,70,No\n", encoding="utf-8")
        instances, labels = load_dataset(p, running_example)
        assert len(instances) == 2
        assert labels == ["Yes", "No"]

    def test_categorical_cells(self, tmp_path):
        forest = Forest(
            features=[FeatureSpec(1, "color", "categorical", ("red", "blue"))],
            classes=["x"],
            trees=[Leaf(0)],
        )
        p = tmp_path / "d.csv"
        p.write_text("color\nred\nblue\n", encoding="utf-8")
        assert load_instances(p, forest) == [("red",), ("blue",)]
        p.write_text("color\ngreen\n", encoding="utf-8")
        with pytest.raises(LoadError, match="row 2"):
            load_instances(p, forest)

    def test_dataset_round_trip(self, running_example, tmp_path):
        instances = [(1, 0, 1, 70.0), (0, 1, 0, 80.5)]
        text = dumps_dataset(running_example, instances)
        p = tmp_path / "d.csv"
        p.write_text(text, encoding="utf-8")
        assert load_instances(p, running_example) == instances

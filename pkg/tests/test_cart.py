"""CART training: exact thresholds, deterministic ties, sane fits."""

from fractions import Fraction

import pytest

from contrex.cart import train_cart
from contrex.datasets import two_gaussians
from contrex.errors import SchemaError
from contrex.schema import CATEGORICAL, CONTINUOUS, FeatureSchema, FeatureSpec
from contrex.tree import Leaf, Split


def test_two_gaussians_trains_accurately():
    schema, rows, labels = two_gaussians(200, seed=11)
    tree = train_cart(schema, rows, labels, max_depth=4)
    hits = sum(tree.predict(r).label == y for r, y in zip(rows, labels))
    assert hits >= 190


def test_threshold_is_exact_midpoint():
    schema = FeatureSchema([FeatureSpec("x", CONTINUOUS, Fraction(0), Fraction(10))])
    rows = [{"x": Fraction(1)}, {"x": Fraction(2)}]
    tree = train_cart(schema, rows, ["a", "b"])
    assert isinstance(tree.root, Split)
    assert tree.root.threshold == Fraction(3, 2)
    assert tree.predict({"x": Fraction(3, 2)}).label == "a"  # boundary goes left


def test_categorical_split():
    schema = FeatureSchema(
        [FeatureSpec("color", CATEGORICAL, values=("red", "green", "blue"))]
    )
    rows = [{"color": c} for c in ("red", "red", "green", "blue")]
    labels = ["hot", "hot", "cold", "cold"]
    tree = train_cart(schema, rows, labels)
    assert isinstance(tree.root, Split)
    assert tree.root.category == "red"
    assert tree.predict({"color": "red"}).label == "hot"
    assert tree.predict({"color": "blue"}).label == "cold"


def test_xor_stops_at_root_without_gain():
    # no single axis split improves gini on XOR, so training yields one
    # leaf with the tie broken to the smaller label
    schema = FeatureSchema(
        [
            FeatureSpec("x", CONTINUOUS, Fraction(0), Fraction(1)),
            FeatureSpec("y", CONTINUOUS, Fraction(0), Fraction(1)),
        ]
    )
    rows = [
        {"x": Fraction(0), "y": Fraction(0)},
        {"x": Fraction(0), "y": Fraction(1)},
        {"x": Fraction(1), "y": Fraction(0)},
        {"x": Fraction(1), "y": Fraction(1)},
    ]
    tree = train_cart(schema, rows, ["a", "b", "b", "a"])
    assert isinstance(tree.root, Leaf)
    assert tree.root.label == "a"
    assert tree.root.confidence == Fraction(1, 2)


def test_training_is_deterministic():
    schema, rows, labels = two_gaussians(120, seed=5)
    first = train_cart(schema, rows, labels, max_depth=3)
    second = train_cart(schema, rows, labels, max_depth=3)
    assert first.to_json() == second.to_json()


def test_depth_and_leaf_limits():
    schema, rows, labels = two_gaussians(80, seed=3)
    stump = train_cart(schema, rows, labels, max_depth=1)
    assert len(stump.paths) <= 2
    chunky = train_cart(schema, rows, labels, min_samples_leaf=20)
    assert all((p.samples or 0) >= 20 for p in chunky.paths)


def test_bad_inputs():
    schema, rows, labels = two_gaussians(10, seed=1)
    with pytest.raises(SchemaError, match="differ in length"):
        train_cart(schema, rows, labels[:-1])
    with pytest.raises(SchemaError, match="empty"):
        train_cart(schema, [], [])

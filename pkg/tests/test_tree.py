"""Tree parsing, path extraction, and the path-partition property."""

import json
import random
from fractions import Fraction

import pytest

from contrex.errors import TreeFormatError
from contrex.schema import CATEGORICAL, CONTINUOUS, ORDINAL, FeatureSchema, FeatureSpec
from contrex.tree import DecisionTree, Leaf, Split, load_tree, tree_from_json

SYNTH = "data/synthetic_tree.json"
CREDIT = "data/credit_tree.json"

RANDOM_SCHEMA = FeatureSchema(
    [
        FeatureSpec("f1", CONTINUOUS, Fraction(0), Fraction(10)),
        FeatureSpec("f2", CONTINUOUS, Fraction(0), Fraction(10)),
        FeatureSpec("level", ORDINAL, Fraction(0), Fraction(5)),
        FeatureSpec("color", CATEGORICAL, values=("red", "green", "blue")),
    ]
)


def random_tree(rng: random.Random) -> DecisionTree:
    def grow(depth):
        if depth >= 4 or (depth > 0 and rng.random() < 0.3):
            samples = rng.randint(1, 50) if rng.random() < 0.5 else None
            return Leaf(rng.choice("ab"), Fraction(rng.randint(0, 100), 100), samples)
        which = rng.random()
        if which < 0.5:
            feature = rng.choice(("f1", "f2"))
            threshold = Fraction(rng.randint(0, 100), 10)
            return Split(feature, threshold, None, grow(depth + 1), grow(depth + 1))
        if which < 0.7:
            threshold = Fraction(rng.randint(0, 4)) + Fraction(1, 2)
            return Split("level", threshold, None, grow(depth + 1), grow(depth + 1))
        category = rng.choice(("red", "green", "blue"))
        return Split("color", None, category, grow(depth + 1), grow(depth + 1))

    return DecisionTree(RANDOM_SCHEMA, grow(0))


def random_row(rng: random.Random):
    # same lattice as the thresholds, so boundary hits occur
    return {
        "f1": Fraction(rng.randint(0, 100), 10),
        "f2": Fraction(rng.randint(0, 100), 10),
        "level": Fraction(rng.randint(0, 5)),
        "color": rng.choice(("red", "green", "blue")),
    }


def row_satisfies(path, row) -> bool:
    for cond in path.conditions:
        if cond.coord is not None:
            value = Fraction(1 if row[cond.feature] == cond.coord else 0)
        else:
            value = Fraction(row[cond.feature])
        if not cond.holds(value):
            return False
    return True


def test_fixture_trees_load():
    synth = load_tree(SYNTH)
    assert len(synth.paths) == 8
    assert synth.classes == ("0", "1")
    assert [p.path_id for p in synth.paths] == list(range(8))
    assert synth.warnings == ()

    credit = load_tree(CREDIT)
    assert len(credit.paths) == 7
    assert credit.classes == ("<=50K", ">50K")
    # first path: the three left-most splits, in root-to-leaf order
    texts = [c.atom_for("F").text() for c in credit.paths[0].conditions]
    assert texts == ["F.capitalgain<=5119", "2*F.education<=25", "2*F.age<=61"]


def test_predict_boundary_goes_left():
    synth = load_tree(SYNTH)
    leaf = synth.predict({"feature1": Fraction(4), "feature2": Fraction(0)})
    assert leaf.label == "0"
    leaf = synth.predict({"feature1": Fraction(41, 10), "feature2": Fraction(0)})
    assert leaf.label == "1"


def test_path_partition_property():
    rng = random.Random(20240824)
    for _ in range(20):
        tree = random_tree(rng)
        rows = [random_row(rng) for _ in range(1000)]
        for row in rows:
            matching = [p for p in tree.paths if row_satisfies(p, row)]
            assert len(matching) == 1
            fact = tree.predict_path(row)
            assert fact is matching[0]
            assert tree.predict(row).label == fact.label


def test_json_roundtrip_preserves_paths():
    rng = random.Random(20240825)
    for _ in range(10):
        tree = random_tree(rng)
        back = tree_from_json(json.loads(json.dumps(tree.to_json())))
        assert len(back.paths) == len(tree.paths)
        for a, b in zip(tree.paths, back.paths):
            assert (a.path_id, a.label, a.confidence, a.samples) == (
                b.path_id,
                b.label,
                b.confidence,
                b.samples,
            )
            assert a.conditions == b.conditions


def leaf(label="x", confidence="0.5", **extra):
    return dict({"label": label, "confidence": confidence}, **extra)


def doc(root):
    return {"schema": RANDOM_SCHEMA.to_json(), "root": root}


@pytest.mark.parametrize(
    "root,fragment",
    [
        (leaf(confidence="1.5"), "outside [0, 1]"),
        (leaf(confidence="oops"), "bad confidence"),
        (leaf(extra="?"), "unexpected leaf key"),
        (leaf(label=""), "nonempty"),
        (leaf(samples=-1), "samples"),
        ({"feature": "f1", "left": leaf(), "right": leaf()}, "missing 'threshold'"),
        ({"feature": "nope", "threshold": "1", "left": leaf(), "right": leaf()}, "unknown feature"),
        ({"feature": "color", "threshold": "1", "left": leaf(), "right": leaf()}, "threshold split on categorical"),
        ({"feature": "f1", "category": "red", "left": leaf(), "right": leaf()}, "category split on non-categorical"),
        ({"feature": "color", "category": "pink", "left": leaf(), "right": leaf()}, "not a value"),
        ({"feature": "f1", "threshold": "1", "left": [], "right": leaf()}, "must be an object"),
        ({"feature": "f1", "threshold": "1", "left": leaf()}, "missing 'right'"),
    ],
)
def test_malformed_nodes_raise(root, fragment):
    with pytest.raises(TreeFormatError) as err:
        tree_from_json(doc(root))
    assert fragment in str(err.value)


def test_out_of_range_threshold_warns_but_parses():
    root = {"feature": "f1", "threshold": "11", "left": leaf(), "right": leaf()}
    tree = tree_from_json(doc(root))
    assert len(tree.warnings) == 1
    assert "outside" in tree.warnings[0]
    assert len(tree.paths) == 2


def test_document_shape_errors(tmp_path):
    with pytest.raises(TreeFormatError, match="'schema' and 'root'"):
        tree_from_json({"root": leaf()})
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(TreeFormatError, match="invalid JSON"):
        load_tree(bad)

"""Axis-parallel decision trees and their path facts.

A tree file is self-contained JSON: the feature schema plus a root node.
Internal nodes split either a numeric feature at a threshold (left means
feature <= threshold) or a categorical feature at one category (left
means "is not", right means "is"; over the one-hot encoding that is the
indicator coordinate split at 1/2). Leaves carry a class label and an
exact confidence in [0, 1].

Every root-to-leaf path compiles to a conjunction of linear atoms over
any instance name, which is what the reasoning layer consumes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Mapping, Union

from .atoms import LinearAtom, VarRef
from .errors import TreeFormatError
from .rational import format_exact, parse_number, to_fraction
from .schema import CATEGORICAL, FeatureSchema

_ONE = Fraction(1)


@dataclass(frozen=True)
class Leaf:
    label: str
    confidence: Fraction
    samples: int | None = None


@dataclass(frozen=True)
class Split:
    feature: str
    threshold: Fraction | None  # numeric split
    category: str | None  # categorical split
    left: "Node"
    right: "Node"


Node = Union[Leaf, Split]


@dataclass(frozen=True)
class Condition:
    """One branch decision: feature (or coordinate) vs threshold."""

    feature: str
    coord: str | None
    is_upper: bool  # True: var <= threshold; False: var > threshold
    threshold: Fraction

    def atom_for(self, instance: str) -> LinearAtom:
        var = VarRef(instance, self.feature, self.coord)
        rel = "<=" if self.is_upper else ">"
        return LinearAtom.make({var: _ONE}, rel, self.threshold)

    def holds(self, value: Fraction) -> bool:
        return value <= self.threshold if self.is_upper else value > self.threshold


@dataclass(frozen=True)
class PathFact:
    """A root-to-leaf path: its conditions imply the leaf's label."""

    path_id: int
    label: str
    confidence: Fraction
    conditions: tuple[Condition, ...]
    samples: int | None = None

    def atoms_for(self, instance: str) -> list[LinearAtom]:
        return [c.atom_for(instance) for c in self.conditions]


class DecisionTree:
    def __init__(self, schema: FeatureSchema, root: Node, warnings: tuple[str, ...] = ()):
        self.schema = schema
        self.root = root
        self.warnings = warnings
        self.paths: tuple[PathFact, ...] = tuple(self._extract_paths())
        self.classes: tuple[str, ...] = tuple(sorted({p.label for p in self.paths}))

    def _extract_paths(self) -> Iterator[PathFact]:
        # Depth-first, left branch first; path ids follow leaf order.
        counter = 0

        def walk(node: Node, conditions: tuple[Condition, ...]) -> Iterator[PathFact]:
            nonlocal counter
            if isinstance(node, Leaf):
                fact = PathFact(counter, node.label, node.confidence, conditions, node.samples)
                counter += 1
                yield fact
                return
            if node.category is not None:
                half = Fraction(1, 2)
                left_c = Condition(node.feature, node.category, True, half)
                right_c = Condition(node.feature, node.category, False, half)
            else:
                left_c = Condition(node.feature, None, True, node.threshold)
                right_c = Condition(node.feature, None, False, node.threshold)
            yield from walk(node.left, conditions + (left_c,))
            yield from walk(node.right, conditions + (right_c,))

        yield from walk(self.root, ())

    def predict(self, row: Mapping[str, object]) -> Leaf:
        node = self.root
        while isinstance(node, Split):
            value = row[node.feature]
            if node.category is not None:
                node = node.right if value == node.category else node.left
            else:
                node = node.left if to_fraction(value) <= node.threshold else node.right
        return node

    def predict_path(self, row: Mapping[str, object]) -> PathFact:
        """The unique path whose conditions the row satisfies."""
        node = self.root
        index = 0

        def leaves_under(n: Node) -> int:
            if isinstance(n, Leaf):
                return 1
            return leaves_under(n.left) + leaves_under(n.right)

        while isinstance(node, Split):
            value = row[node.feature]
            if node.category is not None:
                go_right = value == node.category
            else:
                go_right = to_fraction(value) > node.threshold
            if go_right:
                index += leaves_under(node.left)
                node = node.right
            else:
                node = node.left
        return self.paths[index]

    def to_json(self) -> dict:
        def emit(node: Node) -> dict:
            if isinstance(node, Leaf):
                out = {"label": node.label, "confidence": format_exact(node.confidence)}
                if node.samples is not None:
                    out["samples"] = node.samples
                return out
            if node.category is not None:
                head = {"feature": node.feature, "category": node.category}
            else:
                head = {"feature": node.feature, "threshold": format_exact(node.threshold)}
            head["left"] = emit(node.left)
            head["right"] = emit(node.right)
            return head

        return {"schema": self.schema.to_json(), "root": emit(self.root)}


def _parse_node(data: object, schema: FeatureSchema, warnings: list[str], where: str) -> Node:
    if not isinstance(data, dict):
        raise TreeFormatError(f"{where}: node must be an object")
    if "label" in data:
        for key in data:
            if key not in ("label", "confidence", "samples"):
                raise TreeFormatError(f"{where}: unexpected leaf key {key!r}")
        label = data["label"]
        if not isinstance(label, str) or not label:
            raise TreeFormatError(f"{where}: leaf label must be a nonempty string")
        try:
            confidence = parse_number(str(data["confidence"]))
        except (KeyError, ValueError) as exc:
            raise TreeFormatError(f"{where}: bad confidence: {exc}") from exc
        if not 0 <= confidence <= 1:
            raise TreeFormatError(f"{where}: confidence {data['confidence']} outside [0, 1]")
        samples = data.get("samples")
        if samples is not None and (not isinstance(samples, int) or samples < 0):
            raise TreeFormatError(f"{where}: samples must be a nonnegative integer")
        return Leaf(label, confidence, samples)
    for key in ("feature", "left", "right"):
        if key not in data:
            raise TreeFormatError(f"{where}: split node missing {key!r}")
    name = data["feature"]
    if name not in schema:
        raise TreeFormatError(f"{where}: unknown feature {name!r}")
    spec = schema[name]
    if "category" in data:
        if spec.kind != CATEGORICAL:
            raise TreeFormatError(f"{where}: category split on non-categorical {name!r}")
        category = data["category"]
        if category not in spec.values:
            raise TreeFormatError(f"{where}: {category!r} not a value of {name!r}")
        threshold = None
    else:
        if spec.kind == CATEGORICAL:
            raise TreeFormatError(f"{where}: threshold split on categorical {name!r}")
        if "threshold" not in data:
            raise TreeFormatError(f"{where}: split node missing 'threshold'")
        try:
            threshold = parse_number(str(data["threshold"]))
        except ValueError as exc:
            raise TreeFormatError(f"{where}: bad threshold: {exc}") from exc
        category = None
        if (spec.min is not None and threshold < spec.min) or (
            spec.max is not None and threshold > spec.max
        ):
            warnings.append(
                f"{where}: threshold {data['threshold']} for {name!r} lies outside"
                f" the feature's declared range"
            )
    left = _parse_node(data["left"], schema, warnings, where + ".left")
    right = _parse_node(data["right"], schema, warnings, where + ".right")
    return Split(name, threshold, category, left, right)


def tree_from_json(data: dict) -> DecisionTree:
    if not isinstance(data, dict) or "schema" not in data or "root" not in data:
        raise TreeFormatError("tree document needs 'schema' and 'root'")
    schema = FeatureSchema.from_json(data["schema"])
    warnings: list[str] = []
    root = _parse_node(data["root"], schema, warnings, "root")
    return DecisionTree(schema, root, tuple(warnings))


def load_tree(source: str | Path) -> DecisionTree:
    text = Path(source).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TreeFormatError(f"invalid JSON: {exc}") from exc
    return tree_from_json(data)

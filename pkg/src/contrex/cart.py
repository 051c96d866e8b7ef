"""Greedy CART training with exact arithmetic.

Gini impurity over rational counts, axis-parallel splits, thresholds at
exact midpoints of consecutive distinct values. No pruning. Every tie is
broken deterministically: candidate splits are enumerated in schema
order (numeric thresholds ascending, categorical values in declaration
order) and the first minimizer wins; majority-label ties go to the
lexicographically smallest label.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import SchemaError
from .rational import to_fraction
from .schema import CATEGORICAL, FeatureSchema
from .tree import DecisionTree, Leaf, Node, Split

_ONE = Fraction(1)
_HALF = Fraction(1, 2)


def _gini(counts: Counter, total: int) -> Fraction:
    acc = Fraction(0)
    for c in counts.values():
        acc += Fraction(c, total) ** 2
    return _ONE - acc


def _majority(counts: Counter) -> tuple[str, Fraction]:
    best = max(counts.values())
    label = min(l for l, c in counts.items() if c == best)
    return label, Fraction(best, sum(counts.values()))


def train_cart(
    schema: FeatureSchema,
    rows: Sequence[Mapping[str, object]],
    labels: Sequence[str],
    *,
    max_depth: int | None = None,
    min_samples_split: int = 2,
    min_samples_leaf: int = 1,
) -> DecisionTree:
    if len(rows) != len(labels):
        raise SchemaError("rows and labels differ in length")
    if not rows:
        raise SchemaError("cannot train on an empty dataset")
    numeric = {}
    for spec in schema:
        if spec.kind != CATEGORICAL:
            numeric[spec.name] = [to_fraction(r[spec.name]) for r in rows]

    def leaf(idx: list[int]) -> Leaf:
        counts = Counter(labels[i] for i in idx)
        label, confidence = _majority(counts)
        return Leaf(label, confidence, len(idx))

    def grow(idx: list[int], depth: int) -> Node:
        counts = Counter(labels[i] for i in idx)
        if (
            len(counts) == 1
            or len(idx) < min_samples_split
            or (max_depth is not None and depth >= max_depth)
        ):
            return leaf(idx)
        parent = _gini(counts, len(idx))
        best = None  # (impurity, spec_pos, threshold_or_value, left_idx, right_idx)
        for pos, spec in enumerate(schema):
            if spec.kind == CATEGORICAL:
                for value in spec.values:
                    left = [i for i in idx if rows[i][spec.name] != value]
                    right = [i for i in idx if rows[i][spec.name] == value]
                    if len(left) < min_samples_leaf or len(right) < min_samples_leaf:
                        continue
                    score = (
                        Fraction(len(left), len(idx)) * _gini(Counter(labels[i] for i in left), len(left))
                        + Fraction(len(right), len(idx)) * _gini(Counter(labels[i] for i in right), len(right))
                    )
                    if best is None or score < best[0]:
                        best = (score, pos, value, left, right)
                continue
            column = numeric[spec.name]
            values = sorted({column[i] for i in idx})
            for lo, hi in zip(values, values[1:]):
                threshold = (lo + hi) * _HALF
                left = [i for i in idx if column[i] <= threshold]
                right = [i for i in idx if column[i] > threshold]
                if len(left) < min_samples_leaf or len(right) < min_samples_leaf:
                    continue
                score = (
                    Fraction(len(left), len(idx)) * _gini(Counter(labels[i] for i in left), len(left))
                    + Fraction(len(right), len(idx)) * _gini(Counter(labels[i] for i in right), len(right))
                )
                if best is None or score < best[0]:
                    best = (score, pos, threshold, left, right)
        if best is None or best[0] >= parent:
            return leaf(idx)
        _, pos, at, left_idx, right_idx = best
        spec = schema[schema.names()[pos]]
        left = grow(left_idx, depth + 1)
        right = grow(right_idx, depth + 1)
        if spec.kind == CATEGORICAL:
            return Split(spec.name, None, at, left, right)
        return Split(spec.name, at, None, left, right)

    root = grow(list(range(len(rows))), 0)
    return DecisionTree(schema, root)

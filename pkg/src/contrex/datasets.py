"""Small synthetic datasets for demos and training tests."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Mapping, Sequence

from .schema import CONTINUOUS, FeatureSchema, FeatureSpec

_LO = Fraction(0)
_HI = Fraction(10)


def two_gaussians(
    n: int, seed: int
) -> tuple[FeatureSchema, list[Mapping[str, Fraction]], list[str]]:
    """Two well-separated 2-D blobs, one per class.

    Coordinates are rounded to 3 decimals and clipped to [0, 10], so
    every value is an exact small-denominator rational.
    """
    rng = random.Random(seed)
    schema = FeatureSchema(
        [
            FeatureSpec("feature1", CONTINUOUS, _LO, _HI),
            FeatureSpec("feature2", CONTINUOUS, _LO, _HI),
        ]
    )
    centers = {"0": (3.0, 3.0), "1": (7.0, 7.0)}
    rows: list[Mapping[str, Fraction]] = []
    labels: list[str] = []
    for i in range(n):
        label = "0" if i % 2 == 0 else "1"
        cx, cy = centers[label]
        x = round(rng.gauss(cx, 0.9), 3)
        y = round(rng.gauss(cy, 0.9), 3)
        x = min(max(Fraction(x).limit_denominator(1000), _LO), _HI)
        y = min(max(Fraction(y).limit_denominator(1000), _LO), _HI)
        rows.append({"feature1": x, "feature2": y})
        labels.append(label)
    return schema, rows, labels

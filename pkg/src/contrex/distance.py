"""Normalized L1 distance between instances, as linear constraints.

Numeric features contribute |a - b| / (max - min). A categorical feature
contributes 1 on mismatch and 0 on match, which over one-hot coordinates
is half the sum of coordinate deviations: two coordinates flip per
mismatch, each by 1.

The absolute values are linearized through one slack variable per numeric
feature and one per categorical coordinate (s >= a - b, s >= b - a,
s >= 0); minimizing the weighted slack sum makes every slack tight.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .atoms import LE, LinearAtom, VarRef
from .schema import CATEGORICAL, FeatureSchema
from .store import Bounds

_ZERO = Fraction(0)
_ONE = Fraction(1)
_HALF = Fraction(1, 2)


@dataclass(frozen=True)
class DistanceEncoding:
    aux_instance: str
    atoms: tuple[LinearAtom, ...]
    bounds: dict[VarRef, Bounds]
    objective: dict[VarRef, Fraction]


def aux_instance_name(name_a: str, name_b: str) -> str:
    return f"__dist__{name_a}__{name_b}"


def l1_encoding(schema: FeatureSchema, name_a: str, name_b: str) -> DistanceEncoding:
    """Slack atoms and objective whose minimum is the L1 distance."""
    aux = aux_instance_name(name_a, name_b)
    atoms: list[LinearAtom] = []
    bounds: dict[VarRef, Bounds] = {}
    objective: dict[VarRef, Fraction] = {}

    def link(slack: VarRef, a: VarRef, b: VarRef, weight: Fraction) -> None:
        atoms.append(LinearAtom.make({a: _ONE, b: -_ONE, slack: -_ONE}, LE, _ZERO))
        atoms.append(LinearAtom.make({b: _ONE, a: -_ONE, slack: -_ONE}, LE, _ZERO))
        bounds[slack] = (_ZERO, None)
        objective[slack] = weight

    for spec in schema:
        if spec.kind == CATEGORICAL:
            for value in spec.values:
                link(
                    VarRef(aux, spec.name, value),
                    VarRef(name_a, spec.name, value),
                    VarRef(name_b, spec.name, value),
                    _HALF,
                )
        else:
            width = spec.range_width()
            weight = _ONE if width == 0 else _ONE / width
            link(
                VarRef(aux, spec.name),
                VarRef(name_a, spec.name),
                VarRef(name_b, spec.name),
                weight,
            )
    return DistanceEncoding(aux, tuple(atoms), bounds, objective)


def l1_value(
    schema: FeatureSchema,
    row_a: Mapping[str, object],
    row_b: Mapping[str, object],
) -> Fraction:
    """Distance between two fully specified rows, computed directly."""
    total = _ZERO
    for spec in schema:
        a, b = row_a[spec.name], row_b[spec.name]
        if spec.kind == CATEGORICAL:
            if a != b:
                total += _ONE
            continue
        width = spec.range_width()
        weight = _ONE if width == 0 else _ONE / width
        diff = Fraction(a) - Fraction(b)
        total += weight * abs(diff)
    return total

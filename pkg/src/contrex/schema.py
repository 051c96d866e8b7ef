"""Feature schemas: typed feature declarations shared by trees, stores and sessions.

A schema is an ordered list of feature specs. Order matters: it fixes the
variable order used by the solver, rendering and witness tie-breaking.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import SchemaError, UnknownNameError
from .rational import format_exact, parse_number, to_fraction

CONTINUOUS = "continuous"
ORDINAL = "ordinal"
CATEGORICAL = "categorical"


@dataclass(frozen=True)
class FeatureSpec:
    """One feature: continuous/ordinal with bounds, or categorical with values."""

    name: str
    kind: str
    min: Fraction | None = None
    max: Fraction | None = None
    values: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in (CONTINUOUS, ORDINAL, CATEGORICAL):
            raise SchemaError(f"unknown feature kind {self.kind!r}")
        if self.kind == CATEGORICAL:
            if not self.values:
                raise SchemaError(f"categorical feature {self.name!r} needs values")
            if len(set(self.values)) != len(self.values):
                raise SchemaError(f"duplicate category in feature {self.name!r}")
        else:
            if self.min is None or self.max is None:
                raise SchemaError(f"feature {self.name!r} needs min and max")
            if self.min > self.max:
                raise SchemaError(f"feature {self.name!r} has min > max")
            if self.kind == ORDINAL and (
                self.min.denominator != 1 or self.max.denominator != 1
            ):
                raise SchemaError(f"ordinal feature {self.name!r} needs integer bounds")

    @property
    def is_numeric(self) -> bool:
        return self.kind in (CONTINUOUS, ORDINAL)

    def range_width(self) -> Fraction:
        assert self.is_numeric
        return self.max - self.min

    def parse_value(self, raw) -> Fraction | str:
        """Validate and normalize a raw feature value for this feature."""
        if self.kind == CATEGORICAL:
            if not isinstance(raw, str) or raw not in self.values:
                raise SchemaError(
                    f"{raw!r} is not a category of feature {self.name!r}"
                )
            return raw
        try:
            v = to_fraction(raw)
        except ValueError as exc:
            raise SchemaError(f"bad value for feature {self.name!r}: {exc}") from exc
        if self.kind == ORDINAL and v.denominator != 1:
            raise SchemaError(f"ordinal feature {self.name!r} needs an integer value")
        if not (self.min <= v <= self.max):
            raise SchemaError(
                f"value {format_exact(v)} outside [{format_exact(self.min)}, "
                f"{format_exact(self.max)}] for feature {self.name!r}"
            )
        return v

    def to_json(self) -> dict:
        if self.kind == CATEGORICAL:
            return {"name": self.name, "kind": self.kind, "values": list(self.values)}
        if self.kind == ORDINAL:
            return {
                "name": self.name,
                "kind": self.kind,
                "min": int(self.min),
                "max": int(self.max),
            }
        return {
            "name": self.name,
            "kind": self.kind,
            "min": format_exact(self.min),
            "max": format_exact(self.max),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "FeatureSpec":
        try:
            name = doc["name"]
            kind = doc["kind"]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed feature spec: {doc!r}") from exc
        if kind == CATEGORICAL:
            return cls(name=name, kind=kind, values=tuple(doc.get("values", ())))
        try:
            lo = parse_number(str(doc["min"]))
            hi = parse_number(str(doc["max"]))
        except (KeyError, ValueError) as exc:
            raise SchemaError(f"malformed bounds in feature {name!r}") from exc
        return cls(name=name, kind=kind, min=lo, max=hi)


class FeatureSchema:
    """Ordered collection of feature specs with unique names."""

    def __init__(self, features: Sequence[FeatureSpec]):
        names = [f.name for f in features]
        if len(set(names)) != len(names):
            raise SchemaError("duplicate feature names in schema")
        if not features:
            raise SchemaError("schema needs at least one feature")
        self.features: tuple[FeatureSpec, ...] = tuple(features)
        self._by_name = {f.name: f for f in features}

    def __iter__(self) -> Iterator[FeatureSpec]:
        return iter(self.features)

    def __len__(self) -> int:
        return len(self.features)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __eq__(self, other) -> bool:
        return isinstance(other, FeatureSchema) and self.features == other.features

    def __getitem__(self, name: str) -> FeatureSpec:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownNameError(f"unknown feature {name!r}") from None

    def index(self, name: str) -> int:
        for i, f in enumerate(self.features):
            if f.name == name:
                return i
        raise UnknownNameError(f"unknown feature {name!r}")

    def names(self) -> list[str]:
        return [f.name for f in self.features]

    def validate_row(self, row: dict) -> dict:
        """Check a full row: every feature present and every value in-domain."""
        out = {}
        for spec in self.features:
            if spec.name not in row:
                raise SchemaError(f"row is missing feature {spec.name!r}")
            out[spec.name] = spec.parse_value(row[spec.name])
        extra = set(row) - set(self._by_name)
        if extra:
            raise SchemaError(f"row has unknown features: {sorted(extra)}")
        return out

    def to_json(self) -> list[dict]:
        return [f.to_json() for f in self.features]

    @classmethod
    def from_json(cls, doc) -> "FeatureSchema":
        if not isinstance(doc, list):
            raise SchemaError("schema document must be a list of feature specs")
        return cls([FeatureSpec.from_json(d) for d in doc])

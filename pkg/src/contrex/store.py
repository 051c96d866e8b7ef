"""Constraint stores: immutable bags of atoms plus variable metadata.

A store carries three things: the atom list, per-variable interval bounds
(kept structurally rather than as atoms so the solver can use them
directly), and the set of integer-marked variables. Stores are value
objects; every mutation returns a new store.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .atoms import EQ, LE, LinearAtom, VarRef
from .schema import CATEGORICAL, FeatureSchema, FeatureSpec

Bounds = tuple[Fraction | None, Fraction | None]


def instance_variables(name: str | None, schema: FeatureSchema) -> list[VarRef]:
    """All solver variables of one instance, in schema order."""
    out: list[VarRef] = []
    for spec in schema:
        if spec.kind == CATEGORICAL:
            out.extend(VarRef(name, spec.name, v) for v in spec.values)
        else:
            out.append(VarRef(name, spec.name))
    return out


def feature_variables(name: str | None, spec: FeatureSpec) -> list[VarRef]:
    if spec.kind == CATEGORICAL:
        return [VarRef(name, spec.name, v) for v in spec.values]
    return [VarRef(name, spec.name)]


def domain_parts(
    name: str | None, schema: FeatureSchema
) -> tuple[dict[VarRef, Bounds], list[LinearAtom], set[VarRef]]:
    """Bounds, structural atoms and integer marks for one instance's domain."""
    bounds: dict[VarRef, Bounds] = {}
    atoms: list[LinearAtom] = []
    ints: set[VarRef] = set()
    for spec in schema:
        if spec.kind == CATEGORICAL:
            coords = feature_variables(name, spec)
            for v in coords:
                bounds[v] = (Fraction(0), Fraction(1))
                ints.add(v)
            atoms.append(LinearAtom.make({v: Fraction(1) for v in coords}, EQ, 1))
        else:
            var = VarRef(name, spec.name)
            bounds[var] = (spec.min, spec.max)
            if spec.kind == "ordinal":
                ints.add(var)
    return bounds, atoms, ints


def domain_atoms(name: str | None, schema: FeatureSchema) -> list[LinearAtom]:
    """The instance domain as an explicit atom list.

    Categorical features contribute two bound atoms per coordinate plus one
    sum-to-one equality; numeric features contribute their two bound atoms.
    """
    bounds, atoms, _ = domain_parts(name, schema)
    out: list[LinearAtom] = []
    for var, (lo, hi) in bounds.items():
        out.append(LinearAtom.make({var: Fraction(-1)}, LE, -lo))
        out.append(LinearAtom.make({var: Fraction(1)}, LE, hi))
    out.extend(atoms)
    return out


@dataclass(frozen=True)
class ConstraintStore:
    atoms: tuple[LinearAtom, ...] = ()
    bounds: Mapping[VarRef, Bounds] = field(default_factory=dict)
    integer_vars: frozenset[VarRef] = frozenset()
    var_order: tuple[VarRef, ...] = ()

    @staticmethod
    def build(
        atoms: Iterable[LinearAtom] = (),
        bounds: Mapping[VarRef, Bounds] | None = None,
        integer_vars: Iterable[VarRef] = (),
        var_order: Sequence[VarRef] = (),
    ) -> "ConstraintStore":
        return ConstraintStore(
            tuple(atoms),
            dict(bounds or {}),
            frozenset(integer_vars),
            tuple(var_order),
        )

    def add_atoms(self, atoms: Iterable[LinearAtom]) -> "ConstraintStore":
        return replace(self, atoms=self.atoms + tuple(atoms))

    def merge_bounds(self, extra: Mapping[VarRef, Bounds]) -> "ConstraintStore":
        merged = dict(self.bounds)
        for var, (lo, hi) in extra.items():
            old_lo, old_hi = merged.get(var, (None, None))
            new_lo = lo if old_lo is None else (old_lo if lo is None else max(lo, old_lo))
            new_hi = hi if old_hi is None else (old_hi if hi is None else min(hi, old_hi))
            merged[var] = (new_lo, new_hi)
        return replace(self, bounds=merged)

    def mark_integer(self, vars: Iterable[VarRef]) -> "ConstraintStore":
        return replace(self, integer_vars=self.integer_vars | frozenset(vars))

    def variables(self) -> list[VarRef]:
        """All variables, explicit order first, stragglers lexicographic."""
        seen = set(self.var_order)
        out = list(self.var_order)
        extra = set()
        for atom in self.atoms:
            extra.update(v for v in atom.variables() if v not in seen)
        extra.update(v for v in self.bounds if v not in seen)
        out.extend(sorted(extra, key=VarRef.sort_key))
        return out

    def bound_atoms(self, vars: Iterable[VarRef] | None = None) -> list[LinearAtom]:
        """Interval bounds materialized as atoms (for projection and checks)."""
        targets = self.bounds if vars is None else {
            v: self.bounds[v] for v in vars if v in self.bounds
        }
        out = []
        for var, (lo, hi) in targets.items():
            if lo is not None:
                out.append(LinearAtom.make({var: Fraction(-1)}, LE, -lo))
            if hi is not None:
                out.append(LinearAtom.make({var: Fraction(1)}, LE, hi))
        return out

    def evaluate(self, assignment: Mapping[VarRef, Fraction]) -> bool:
        """Exact membership of a full assignment in the store's solution set."""
        for var, (lo, hi) in self.bounds.items():
            val = Fraction(assignment[var])
            if lo is not None and val < lo:
                return False
            if hi is not None and val > hi:
                return False
        for var in self.integer_vars:
            if Fraction(assignment[var]).denominator != 1:
                return False
        return all(a.evaluate(assignment) for a in self.atoms)

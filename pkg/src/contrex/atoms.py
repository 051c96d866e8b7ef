"""Linear atoms over instance variables.

An atom is ``sum(coeff * var) REL rhs`` with REL one of <=, <, =.
Inputs written with >= or > are normalized by negation at construction,
so downstream code only ever sees the three canonical relations.
Strictness is first-class: a strict atom is never widened to its closure
except where a caller explicitly asks for the closure.

Canonical form: coefficients and right-hand side are scaled to coprime
integers, terms are sorted by variable, and equalities fix the sign of the
leading coefficient. Two atoms that differ only by a positive rational
factor therefore have equal canonical forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .rational import format_coefficient

LE = "<="
LT = "<"
EQ = "="

_RELATIONS = (LE, LT, EQ)


@dataclass(frozen=True, order=True)
class VarRef:
    """A solver variable: a feature of an instance, or one one-hot coordinate.

    ``instance`` is None for schema-level (un-instantiated) atoms, e.g. the
    split atoms stored on tree paths before an instance name is bound.
    ``coord`` names the category for one-hot coordinates of categorical
    features and is None for numeric features.
    """

    instance: str | None
    feature: str
    coord: str | None = None

    def __str__(self) -> str:
        base = f"{self.instance}.{self.feature}" if self.instance else self.feature
        return f"{base}[{self.coord}]" if self.coord is not None else base

    def sort_key(self) -> tuple:
        return (self.instance or "", self.feature, self.coord or "")

    def with_instance(self, name: str) -> "VarRef":
        if self.instance is not None:
            return self
        return VarRef(name, self.feature, self.coord)


@dataclass(frozen=True)
class LinearAtom:
    terms: tuple[tuple[VarRef, Fraction], ...]
    rel: str
    rhs: Fraction

    @staticmethod
    def make(terms: Mapping[VarRef, Fraction] | Iterable[tuple[VarRef, Fraction]],
             rel: str, rhs) -> "LinearAtom":
        """Build a canonical atom; accepts >=/> and flips them to <=/<."""
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        acc: dict[VarRef, Fraction] = {}
        for var, coeff in items:
            c = acc.get(var, Fraction(0)) + Fraction(coeff)
            if c == 0:
                acc.pop(var, None)
            else:
                acc[var] = c
        rhs = Fraction(rhs)
        if rel == ">=":
            acc = {v: -c for v, c in acc.items()}
            rhs, rel = -rhs, LE
        elif rel == ">":
            acc = {v: -c for v, c in acc.items()}
            rhs, rel = -rhs, LT
        if rel not in _RELATIONS:
            raise ValueError(f"unknown relation {rel!r}")

        ordered = sorted(acc.items(), key=lambda it: it[0].sort_key())
        # Scale to coprime integers over coefficients and rhs.
        denoms = [c.denominator for _, c in ordered] + [rhs.denominator]
        scale = math.lcm(*denoms)
        nums = [abs(c.numerator * scale // c.denominator) for _, c in ordered]
        nums.append(abs(rhs.numerator * scale // rhs.denominator))
        g = math.gcd(*nums) if any(nums) else 1
        factor = Fraction(scale, g or 1)
        ordered = [(v, c * factor) for v, c in ordered]
        rhs = rhs * factor
        if rel == EQ and ordered and ordered[0][1] < 0:
            ordered = [(v, -c) for v, c in ordered]
            rhs = -rhs
        return LinearAtom(tuple(ordered), rel, rhs)

    # -- views ---------------------------------------------------------

    def variables(self) -> list[VarRef]:
        return [v for v, _ in self.terms]

    def coeff(self, var: VarRef) -> Fraction:
        for v, c in self.terms:
            if v == var:
                return c
        return Fraction(0)

    @property
    def is_strict(self) -> bool:
        return self.rel == LT

    @property
    def is_equality(self) -> bool:
        return self.rel == EQ

    def is_ground(self) -> bool:
        return not self.terms

    def ground_truth(self) -> bool:
        """Truth value of a ground atom (0 REL rhs)."""
        assert self.is_ground()
        if self.rel == LE:
            return 0 <= self.rhs
        if self.rel == LT:
            return 0 < self.rhs
        return self.rhs == 0

    # -- algebra -------------------------------------------------------

    def closure(self) -> "LinearAtom":
        """The same atom with strictness dropped."""
        if self.rel == LT:
            return LinearAtom(self.terms, LE, self.rhs)
        return self

    def negate(self) -> list["LinearAtom"]:
        """Atoms whose disjunction is the negation of this atom.

        <= and < negate to a single atom; = negates to two branches.
        """
        neg = {v: -c for v, c in self.terms}
        if self.rel == LE:
            return [LinearAtom.make(neg, LT, -self.rhs)]
        if self.rel == LT:
            return [LinearAtom.make(neg, LE, -self.rhs)]
        return [
            LinearAtom.make(dict(self.terms), LT, self.rhs),
            LinearAtom.make(neg, LT, -self.rhs),
        ]

    def substitute(self, var: VarRef, expr: Mapping[VarRef, Fraction],
                   const: Fraction) -> "LinearAtom":
        """Replace ``var`` by ``expr + const`` and re-canonicalize."""
        c = self.coeff(var)
        if c == 0:
            return self
        acc = {v: k for v, k in self.terms if v != var}
        for v, k in expr.items():
            acc[v] = acc.get(v, Fraction(0)) + c * k
        return LinearAtom.make(acc, self.rel, self.rhs - c * const)

    def with_instance(self, name: str) -> "LinearAtom":
        return LinearAtom(
            tuple((v.with_instance(name), c) for v, c in self.terms),
            self.rel,
            self.rhs,
        )

    def evaluate(self, assignment: Mapping[VarRef, Fraction]) -> bool:
        """Exact truth of the atom under a (complete enough) assignment."""
        total = Fraction(0)
        for v, c in self.terms:
            total += c * Fraction(assignment[v])
        if self.rel == LE:
            return total <= self.rhs
        if self.rel == LT:
            return total < self.rhs
        return total == self.rhs

    def lhs_value(self, assignment: Mapping[VarRef, Fraction]) -> Fraction:
        total = Fraction(0)
        for v, c in self.terms:
            total += c * Fraction(assignment[v])
        return total

    def directional_key(self) -> tuple[tuple, bool]:
        """Sign-normalized LHS key plus whether it was flipped.

        Atoms over the same hyperplane (e <= b vs -e <= -b') share a key,
        which is how interval consolidation and equality detection pair
        lower with upper bounds.
        """
        if not self.terms:
            return ((), False)
        flipped = self.terms[0][1] < 0
        if flipped:
            key = tuple((v, -c) for v, c in self.terms)
        else:
            key = self.terms
        return (key, flipped)

    # -- text ----------------------------------------------------------

    def text(self) -> str:
        """Canonical constraint text, re-parseable by the constraint parser."""
        if not self.terms:
            lhs = "0"
        else:
            parts = []
            for i, (v, c) in enumerate(self.terms):
                mag = abs(c)
                body = str(v) if mag == 1 else f"{format_coefficient(mag)}*{v}"
                if i == 0:
                    parts.append(body if c > 0 else f"-{body}")
                else:
                    parts.append(("+" if c > 0 else "-") + body)
            lhs = "".join(parts)
        return f"{lhs}{self.rel}{format_coefficient(self.rhs)}"

    def __str__(self) -> str:
        return self.text()

"""Recursive-descent parser for constraint text.

Grammar (superset of what the UI builder emits):

    constraint := expr rel expr
    rel        := "=" | "<=" | ">=" | "<" | ">"
    expr       := ["+"|"-"] term (("+"|"-") term)*
    term       := [number "*"] varref | number | NAME
    varref     := NAME "." NAME ["[" NAME "]"]
    number     := digits["." digits] ["/" digits]

A bare NAME is only legal as a category literal, i.e. the right side of
``CE.race = Black``. Categorical features referenced without a coordinate
can only appear in literal form or equated to another categorical of the
same domain; anything else is a type error. There is no "!=": negative
categorical statements have to be written against the coordinates.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .atoms import EQ, LinearAtom, VarRef
from .errors import ConstraintSyntaxError, TypeMismatchError, UnknownNameError
from .rational import parse_number
from .schema import CATEGORICAL, FeatureSchema

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d*)?|\.\d+)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<rel><=|>=|<|>|=)"
    r"|(?P<sym>[-+*./\[\]()]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = len(text) - len(stripped)
            raise ConstraintSyntaxError(f"unexpected character {stripped[0]!r}", at)
        for kind in ("number", "name", "rel", "sym"):
            val = m.group(kind)
            if val is not None:
                tokens.append(_Token(kind, val, m.start(kind)))
                break
        pos = m.end()
    tokens.append(_Token("eof", "", len(text)))
    return tokens


@dataclass
class _CatRef:
    """A categorical feature mentioned without a coordinate."""

    instance: str
    feature: str
    pos: int


@dataclass
class _CatValue:
    name: str
    pos: int


class _Parser:
    def __init__(self, text: str, schema: FeatureSchema, instances: Sequence[str]):
        self.text = text
        self.schema = schema
        self.instances = set(instances)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, value: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value or kind
            raise ConstraintSyntaxError(f"expected {want}, found {tok.value or 'end of input'!r}", tok.pos)
        return self.advance()

    # -- grammar ---------------------------------------------------------

    def parse(self) -> list[LinearAtom]:
        left = self.parse_expr()
        rel_tok = self.peek()
        if rel_tok.kind != "rel":
            raise ConstraintSyntaxError("expected a relation (=, <=, >=, <, >)", rel_tok.pos)
        self.advance()
        right = self.parse_expr()
        end = self.peek()
        if end.kind != "eof":
            raise ConstraintSyntaxError(f"unexpected trailing input {end.value!r}", end.pos)
        return self.combine(left, rel_tok.value, right)

    def parse_expr(self):
        """Returns (terms, const, cats) where cats collects non-numeric parts."""
        terms: dict[VarRef, Fraction] = {}
        const = Fraction(0)
        cats: list = []
        sign = Fraction(1)
        tok = self.peek()
        if tok.kind == "sym" and tok.value in "+-":
            self.advance()
            sign = Fraction(-1) if tok.value == "-" else Fraction(1)
        while True:
            self.parse_term(sign, terms, cats)
            nxt = self.peek()
            if nxt.kind == "sym" and nxt.value in "+-":
                self.advance()
                sign = Fraction(-1) if nxt.value == "-" else Fraction(1)
                continue
            break
        if None in terms:  # constant bucket
            const = terms.pop(None)  # type: ignore[arg-type]
        return terms, const, cats

    def parse_number_token(self) -> Fraction:
        tok = self.expect("number")
        value = parse_number(tok.value)
        nxt = self.peek()
        if nxt.kind == "sym" and nxt.value == "/":
            self.advance()
            denom = self.expect("number")
            d = parse_number(denom.value)
            if d == 0:
                raise ConstraintSyntaxError("division by zero", denom.pos)
            value = value / d
        return value

    def parse_term(self, sign: Fraction, terms: dict, cats: list) -> None:
        tok = self.peek()
        if tok.kind == "number":
            value = self.parse_number_token()
            nxt = self.peek()
            if nxt.kind == "sym" and nxt.value == "*":
                self.advance()
                ref = self.parse_varref()
                self.accumulate(terms, cats, ref, sign * value)
            else:
                terms[None] = terms.get(None, Fraction(0)) + sign * value
            return
        if tok.kind == "name":
            ref = self.parse_varref()
            self.accumulate(terms, cats, ref, sign)
            return
        raise ConstraintSyntaxError(f"expected a term, found {tok.value or 'end of input'!r}", tok.pos)

    def accumulate(self, terms, cats, ref, coeff: Fraction) -> None:
        if isinstance(ref, (_CatRef, _CatValue)):
            if coeff != 1:
                pos = ref.pos
                raise TypeMismatchError(
                    "categorical references cannot be scaled or negated"
                )
            cats.append(ref)
            return
        terms[ref] = terms.get(ref, Fraction(0)) + coeff

    def parse_varref(self):
        first = self.expect("name")
        nxt = self.peek()
        if not (nxt.kind == "sym" and nxt.value == "."):
            # Bare name: category literal, resolved when combining sides.
            return _CatValue(first.value, first.pos)
        self.advance()
        feat_tok = self.expect("name")
        instance, feature = first.value, feat_tok.value
        if instance not in self.instances:
            raise UnknownNameError(f"unknown instance {instance!r}")
        spec = self.schema[feature]  # raises UnknownNameError
        coord = None
        nxt = self.peek()
        if nxt.kind == "sym" and nxt.value == "[":
            self.advance()
            coord_tok = self.expect("name")
            self.expect("sym", "]")
            if spec.kind != CATEGORICAL:
                raise TypeMismatchError(
                    f"feature {feature!r} is {spec.kind}, it has no coordinates"
                )
            if coord_tok.value not in spec.values:
                raise UnknownNameError(
                    f"{coord_tok.value!r} is not a category of feature {feature!r}"
                )
            coord = coord_tok.value
        if coord is None and spec.kind == CATEGORICAL:
            return _CatRef(instance, feature, first.pos)
        return VarRef(instance, feature, coord)

    # -- combining the two sides ------------------------------------------

    def combine(self, left, rel: str, right) -> list[LinearAtom]:
        lterms, lconst, lcats = left
        rterms, rconst, rcats = right
        if lcats or rcats:
            return self.combine_categorical(left, rel, right)
        diff = dict(lterms)
        for v, c in rterms.items():
            diff[v] = diff.get(v, Fraction(0)) - c
        return [LinearAtom.make(diff, rel, rconst - lconst)]

    def combine_categorical(self, left, rel: str, right) -> list[LinearAtom]:
        lterms, lconst, lcats = left
        rterms, rconst, rcats = right
        pure = (
            not lterms and not rterms and lconst == 0 and rconst == 0
            and len(lcats) == 1 and len(rcats) == 1
        )
        if not pure or rel != EQ:
            raise TypeMismatchError(
                "categorical features can only be used alone in equalities, "
                "e.g. CE.race = Black or CE.race = F.race"
            )
        a, b = lcats[0], rcats[0]
        if isinstance(a, _CatValue) and isinstance(b, _CatRef):
            a, b = b, a
        if isinstance(a, _CatRef) and isinstance(b, _CatValue):
            spec = self.schema[a.feature]
            if b.name not in spec.values:
                raise UnknownNameError(
                    f"{b.name!r} is not a category of feature {a.feature!r}"
                )
            return [LinearAtom.make({VarRef(a.instance, a.feature, b.name): Fraction(1)}, EQ, 1)]
        if isinstance(a, _CatRef) and isinstance(b, _CatRef):
            sa, sb = self.schema[a.feature], self.schema[b.feature]
            if set(sa.values) != set(sb.values):
                raise TypeMismatchError(
                    f"features {a.feature!r} and {b.feature!r} have different categories"
                )
            if (a.instance, a.feature) == (b.instance, b.feature):
                # X = X: the dict below would collapse each coordinate's
                # +1/-1 pair into a lone -1, turning a tautology into
                # contradictory pins. Keep the trivial atom instead.
                return [LinearAtom.make({}, EQ, Fraction(0))]
            return [
                LinearAtom.make(
                    {
                        VarRef(a.instance, a.feature, v): Fraction(1),
                        VarRef(b.instance, b.feature, v): Fraction(-1),
                    },
                    EQ,
                    0,
                )
                for v in sa.values
            ]
        raise TypeMismatchError("a category name needs a categorical feature beside it")


def parse_constraint(
    text: str, schema: FeatureSchema, instances: Sequence[str]
) -> list[LinearAtom]:
    """Parse constraint text into canonical atoms.

    Raises ConstraintSyntaxError (with position), UnknownNameError or
    TypeMismatchError; never returns partially-resolved atoms.
    """
    return _Parser(text, schema, instances).parse()


_L1_RE = re.compile(
    r"^\s*l1norm\s*\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*,\s*([A-Za-z_][A-Za-z0-9_]*)\s*\)\s*$"
)


def parse_distance_spec(text: str) -> tuple[str, str]:
    """Parse a minimize spec of the form ``l1norm(A, B)``."""
    m = _L1_RE.match(text)
    if not m:
        raise ConstraintSyntaxError(
            "minimize spec must look like l1norm(A, B)", 0
        )
    return m.group(1), m.group(2)

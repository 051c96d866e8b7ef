"""Text rendering of rules, answer constraints, and plot regions.

Everything here is deterministic string building; the exact shapes are
load-bearing for the golden transcripts. Thresholds and feature values
always carry a decimal point ("19.0"), confidences are rounded to four
places with trailing zeros stripped ("1.0", "0.9652"), rule atoms join
with a bare comma, and a feature's lower bound prints before its upper.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .atoms import EQ, LE, LT, LinearAtom, VarRef
from .rational import format_confidence, format_exact
from .schema import CATEGORICAL, FeatureSchema
from .tree import PathFact

_REL_PLAIN = {LE: "<=", LT: "<", EQ: "="}
_REL_FLIPPED = {LE: ">=", LT: ">", EQ: "="}


def render_rule(path: PathFact, instance: str | None, schema: FeatureSchema) -> str:
    """One-line rule text for a path, bound to an instance name.

    Per feature the tightest bounds win and appear where the feature was
    first split; a strict lower bound precedes the upper.
    """
    groups: dict[tuple[str, str | None], dict] = {}
    order: list[tuple[str, str | None]] = []
    for cond in path.conditions:
        key = (cond.feature, cond.coord)
        g = groups.get(key)
        if g is None:
            g = {"lower": None, "upper": None, "is_value": False, "not_value": False}
            groups[key] = g
            order.append(key)
        if cond.coord is not None:
            if cond.is_upper:
                g["not_value"] = True
            else:
                g["is_value"] = True
            continue
        if cond.is_upper:
            if g["upper"] is None or cond.threshold < g["upper"]:
                g["upper"] = cond.threshold
        else:
            if g["lower"] is None or cond.threshold > g["lower"]:
                g["lower"] = cond.threshold
    items: list[str] = []
    for feature, coord in order:
        g = groups[(feature, coord)]
        prefix = f"{instance}.{feature}" if instance else feature
        if coord is not None:
            if g["is_value"]:
                items.append(f"{prefix}={coord}")
            else:
                items.append(f"{prefix}!={coord}")
            continue
        if g["lower"] is not None:
            items.append(f"{prefix}>{format_exact(g['lower'])}")
        if g["upper"] is not None:
            items.append(f"{prefix}<={format_exact(g['upper'])}")
    conf = format_confidence(path.confidence)
    return f"IF {','.join(items)} THEN {path.label} [{conf}]"


def render_atom_plain(atom: LinearAtom) -> str:
    """Friendly display form; falls back to the canonical text."""
    if len(atom.terms) == 1:
        (var, coeff), = atom.terms
        value = atom.rhs / coeff
        rel = _REL_PLAIN[atom.rel] if coeff > 0 else _REL_FLIPPED[atom.rel]
        return f"{var}{rel}{format_exact(value)}"
    if len(atom.terms) == 2 and atom.rel == EQ and atom.rhs == 0:
        (v1, c1), (v2, c2) = atom.terms
        if c1 == -c2 and abs(c1) == 1:
            return f"{v1}={v2}" if c1 > 0 else f"{v2}={v1}"
    return atom.text()


def _atom_sort_key(atom: LinearAtom) -> tuple:
    if atom.rel == EQ:
        kind = 0
    elif len(atom.terms) == 1:
        kind = 1 if atom.terms[0][1] < 0 else 2  # lower bounds before uppers
    else:
        kind = 3
    return (kind, atom.text())


def render_answer_items(
    atoms: Sequence[LinearAtom],
    subjects: Sequence[str],
    schema: FeatureSchema,
) -> list[str]:
    """Answer lines, one batch per subject feature in schema order.

    A pinned one-hot coordinate renders as "CE.race=Black"; a pinned
    numeric as "CE.age=19.0"; an inter-instance equality as
    "CE.age=F.age". Atoms that touch no subject feature are context
    (projection anchors like a bare F.age) and get no line of their own.
    """
    touch: dict[tuple[str, str], list[LinearAtom]] = {}
    for atom in atoms:
        seen: set[tuple[str, str]] = set()
        for var in atom.variables():
            key = (var.instance, var.feature)
            if key in seen:
                continue
            seen.add(key)
            touch.setdefault(key, []).append(atom)
    consumed: set[int] = set()
    items: list[str] = []
    for subject in subjects:
        for spec in schema:
            group = [
                a
                for a in touch.get((subject, spec.name), [])
                if id(a) not in consumed
            ]
            if not group:
                continue
            if spec.kind == CATEGORICAL:
                items.extend(_categorical_items(group, subject, spec, consumed))
            else:
                items.extend(_numeric_items(group, subject, spec.name, consumed))
    return items


def _categorical_items(group, subject, spec, consumed) -> list[str]:
    var_of = {
        coord: VarRef(subject, spec.name, coord) for coord in spec.values
    }
    # A coordinate pinned to 1 settles the whole feature.
    for atom in group:
        if atom.rel != EQ or len(atom.terms) != 1:
            continue
        (var, coeff), = atom.terms
        if var.coord is not None and atom.rhs / coeff == 1:
            for a in group:
                consumed.add(id(a))
            return [f"{subject}.{spec.name}={var.coord}"]
    # All coordinates equal to another instance's: feature-level equality.
    partners: dict[str, set[str]] = {}
    partner_atoms: dict[str, list[LinearAtom]] = {}
    for atom in group:
        if atom.rel != EQ or len(atom.terms) != 2 or atom.rhs != 0:
            continue
        (v1, c1), (v2, c2) = atom.terms
        if c1 != -c2 or abs(c1) != 1:
            continue
        mine = v1 if v1.instance == subject else v2
        other = v2 if mine is v1 else v1
        if mine.feature != spec.name or other.feature != spec.name:
            continue
        if mine.coord is None or mine.coord != other.coord:
            continue
        partners.setdefault(other.instance, set()).add(mine.coord)
        partner_atoms.setdefault(other.instance, []).append(atom)
    out: list[str] = []
    for other, coords in partners.items():
        if coords == set(spec.values):
            for a in partner_atoms[other]:
                consumed.add(id(a))
            out.append(f"{subject}.{spec.name}={other}.{spec.name}")
    leftovers = [a for a in group if id(a) not in consumed]
    for atom in sorted(leftovers, key=_atom_sort_key):
        consumed.add(id(atom))
        out.append(render_atom_plain(atom))
    return out


def _numeric_items(group, subject, feature, consumed) -> list[str]:
    out: list[str] = []
    for atom in sorted(group, key=_atom_sort_key):
        if id(atom) in consumed:
            continue
        consumed.add(id(atom))
        if len(atom.terms) == 2 and atom.rel == EQ and atom.rhs == 0:
            (v1, c1), (v2, c2) = atom.terms
            if c1 == -c2 and abs(c1) == 1:
                mine = v1 if v1.instance == subject and v1.feature == feature else v2
                other = v2 if mine is v1 else v1
                out.append(f"{mine}={other}")
                continue
        out.append(render_atom_plain(atom))
    return out


def region_vertices(
    atoms: Iterable[LinearAtom], var_x: VarRef, var_y: VarRef
) -> list[tuple[Fraction, Fraction]] | None:
    """Polygon vertices of a 2-variable region's closure, or None.

    Intersects every boundary pair, keeps feasible points, and orders
    them counterclockwise. Returns None when the atoms mention any other
    variable or the region is empty/degenerate.
    """
    lines: list[tuple[Fraction, Fraction, Fraction]] = []  # ax + by <= c rows
    for atom in atoms:
        for var in atom.variables():
            if var not in (var_x, var_y):
                return None
        a = atom.coeff(var_x)
        b = atom.coeff(var_y)
        if atom.rel == EQ:
            lines.append((a, b, atom.rhs))
            lines.append((-a, -b, -atom.rhs))
        else:
            lines.append((a, b, atom.rhs))

    def feasible(x: Fraction, y: Fraction) -> bool:
        return all(a * x + b * y <= c for a, b, c in lines)

    points: list[tuple[Fraction, Fraction]] = []
    for i in range(len(lines)):
        a1, b1, c1 = lines[i]
        for j in range(i + 1, len(lines)):
            a2, b2, c2 = lines[j]
            det = a1 * b2 - a2 * b1
            if det == 0:
                continue
            x = (c1 * b2 - c2 * b1) / det
            y = (a1 * c2 - a2 * c1) / det
            if feasible(x, y) and (x, y) not in points:
                points.append((x, y))
    if len(points) < 3:
        return points or None
    cx = sum((p[0] for p in points), Fraction(0)) / len(points)
    cy = sum((p[1] for p in points), Fraction(0)) / len(points)
    points.sort(key=lambda p: math.atan2(float(p[1] - cy), float(p[0] - cx)))
    return points


def render_distance(value: Fraction, attained: bool) -> str:
    suffix = "" if attained else " (not attained)"
    return f"Distance: {format_exact(value)}{suffix}"

"""Interactive explanation sessions.

A session owns a decision tree, a set of named instances (possibly
under-specified), and an ordered list of retractable constraints. Its
``solveopt`` enumerates admissible path combinations (class label and
minimum confidence filter first, then exact feasibility), optionally
minimizes the L1 distance between two instances, projects the result
onto the requested variables, and renders rules, answer constraints and
distances as stable text.

``run_command`` is the single line-oriented entry point shared by the
CLI and the HTTP service, so both render identically by construction.
Command grammar:

    instance NAME [feature=value ...] [label=CLASS] [minconf=Q]
    constraint EXPR
    retract ID-or-exact-text
    solveopt [minimize=l1norm(A,B)] [project=A,B.feat,...] [verbose=0|1|2]
    paths
    regions NAME

``label`` and ``minconf`` are reserved keys of ``instance`` and cannot
be used as feature names there.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .atoms import EQ, LinearAtom, VarRef
from .distance import l1_encoding
from .errors import (
    BudgetExceededError,
    SessionError,
    UnknownNameError,
)
from .parser import parse_constraint, parse_distance_spec
from .rational import format_exact, parse_number
from .reasoner import (
    DEFAULT_NODE_LIMIT,
    OPTIMAL,
    UNSAT,
    OptimumResult,
    entails,
    is_satisfiable,
    minimize,
    project,
)
from .render import (
    region_vertices,
    render_answer_items,
    render_atom_plain,
    render_distance,
    render_rule,
)
from .schema import CATEGORICAL, FeatureSchema
from .store import ConstraintStore, domain_parts, feature_variables, instance_variables
from .tree import DecisionTree, PathFact

_NAME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")
_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass
class Instance:
    name: str
    fixed_values: dict[str, object] = field(default_factory=dict)
    class_requirement: str | None = None
    minconf: Fraction = _ZERO


@dataclass(frozen=True)
class ConstraintRecord:
    cid: int
    source: str
    atoms: tuple[LinearAtom, ...]
    declared_for: str | None = None
    declared_feature: str | None = None


@dataclass
class Solution:
    index: int
    path_assignment: dict[str, int]
    rules: dict[str, str]
    answer_atoms: tuple[LinearAtom, ...]
    answer_items: tuple[str, ...]
    distance: OptimumResult | None
    witness: dict[str, dict[str, str]]
    is_global_optimum: bool
    lp_relaxation: bool

    def to_json(self) -> dict:
        out = {
            "paths": dict(self.path_assignment),
            "rules": dict(self.rules),
            "answer_atoms": [a.text() for a in self.answer_atoms],
            "answer_items": list(self.answer_items),
            "witness": {k: dict(v) for k, v in self.witness.items()},
            "global_optimum": self.is_global_optimum,
            "lp_relaxation": self.lp_relaxation,
        }
        if self.distance is not None:
            out["distance"] = {
                "value": format_exact(self.distance.value),
                "float": float(self.distance.value),
                "attained": self.distance.attained,
            }
        else:
            out["distance"] = None
        return out


@dataclass
class SolveResult:
    solutions: list[Solution]
    lines: list[str]
    skipped: list[dict[str, int]]

    def to_json(self) -> dict:
        return {
            "solutions": [s.to_json() for s in self.solutions],
            "lines": list(self.lines),
            "budget_exceeded": [dict(s) for s in self.skipped],
        }


@dataclass
class CommandOutcome:
    lines: list[str]
    data: dict | None = None


class Session:
    def __init__(self, tree: DecisionTree, node_limit: int = DEFAULT_NODE_LIMIT):
        self.tree = tree
        self.schema: FeatureSchema = tree.schema
        self.instances: dict[str, Instance] = {}
        self.records: list[ConstraintRecord] = []
        self.next_cid = 1
        self.node_limit = node_limit
        self.version = 0
        self.transcript: list[dict] = []

    # -- state mutation ------------------------------------------------

    def declare_instance(
        self,
        name: str,
        values: Mapping[str, object] | None = None,
        class_requirement: str | None = None,
        minconf: Fraction | str | None = None,
    ) -> Instance:
        if not _NAME_RE.match(name):
            raise SessionError(f"invalid instance name {name!r}")
        if name in self.instances:
            raise SessionError(f"instance {name!r} already declared")
        if class_requirement is not None and class_requirement not in self.tree.classes:
            known = ", ".join(self.tree.classes)
            raise SessionError(
                f"unknown class label {class_requirement!r} (tree predicts: {known})"
            )
        mc = _ZERO if minconf is None else (
            minconf if isinstance(minconf, Fraction) else parse_number(str(minconf))
        )
        if not _ZERO <= mc <= _ONE:
            raise SessionError(f"minconf must lie in [0, 1], got {mc}")
        parsed: dict[str, object] = {}
        for feat, raw in (values or {}).items():
            spec = self.schema[feat]  # raises UnknownNameError
            parsed[feat] = spec.parse_value(raw)
        inst = Instance(name, {}, class_requirement, mc)
        self.instances[name] = inst
        for spec in self.schema:  # records in schema order, not input order
            if spec.name not in parsed:
                continue
            value = parsed[spec.name]
            inst.fixed_values[spec.name] = value
            if spec.kind == CATEGORICAL:
                source = f"{name}.{spec.name}={value}"
                atom = LinearAtom.make({VarRef(name, spec.name, value): _ONE}, EQ, _ONE)
            else:
                source = f"{name}.{spec.name}={format_exact(value)}"
                atom = LinearAtom.make({VarRef(name, spec.name): _ONE}, EQ, value)
            self.records.append(
                ConstraintRecord(self.next_cid, source, (atom,), name, spec.name)
            )
            self.next_cid += 1
        self.version += 1
        return inst

    def add_constraint(self, text: str) -> ConstraintRecord:
        atoms = parse_constraint(text, self.schema, list(self.instances))
        rec = ConstraintRecord(self.next_cid, text.strip(), tuple(atoms))
        self.records.append(rec)
        self.next_cid += 1
        self.version += 1
        return rec

    def retract(self, key: str) -> ConstraintRecord:
        k = key.strip()
        rec = None
        if re.fullmatch(r"\d+", k):
            cid = int(k)
            rec = next((r for r in self.records if r.cid == cid), None)
        else:
            rec = next((r for r in self.records if r.source == k), None)
        if rec is None:
            raise UnknownNameError(f"no constraint matching {key!r}")
        self.records.remove(rec)
        if rec.declared_for is not None:
            self.instances[rec.declared_for].fixed_values.pop(rec.declared_feature, None)
        self.version += 1
        return rec

    # -- stores ----------------------------------------------------------

    def _base_store(
        self, distance_pair: tuple[str, str] | None
    ):
        bounds: dict = {}
        atoms: list[LinearAtom] = []
        ints: set[VarRef] = set()
        order: list[VarRef] = []
        for name in self.instances:
            b, a, i = domain_parts(name, self.schema)
            bounds.update(b)
            atoms.extend(a)
            ints.update(i)
            order.extend(instance_variables(name, self.schema))
        for rec in self.records:
            atoms.extend(rec.atoms)
        enc = None
        if distance_pair is not None:
            enc = l1_encoding(self.schema, *distance_pair)
            atoms.extend(enc.atoms)
            bounds.update(enc.bounds)
            order.extend(enc.objective)
        return ConstraintStore.build(atoms, bounds, ints, order), enc

    def _domain_store(self) -> ConstraintStore:
        bounds: dict = {}
        atoms: list[LinearAtom] = []
        ints: set[VarRef] = set()
        order: list[VarRef] = []
        for name in self.instances:
            b, a, i = domain_parts(name, self.schema)
            bounds.update(b)
            atoms.extend(a)
            ints.update(i)
            order.extend(instance_variables(name, self.schema))
        return ConstraintStore.build(atoms, bounds, ints, order)

    def admissible_paths(self, inst: Instance) -> list[PathFact]:
        return [
            p
            for p in self.tree.paths
            if (inst.class_requirement is None or p.label == inst.class_requirement)
            and p.confidence >= inst.minconf
        ]

    # -- queries ---------------------------------------------------------

    def solveopt(
        self,
        minimize_spec: str | None = None,
        project_spec: Sequence[str] | None = None,
        verbose: int = 1,
    ) -> SolveResult:
        if verbose not in (0, 1, 2):
            raise SessionError(f"verbose must be 0, 1 or 2, got {verbose}")
        if not self.instances:
            raise SessionError("no instances declared")
        pair = None
        if minimize_spec:
            a, b = parse_distance_spec(minimize_spec)
            for n in (a, b):
                if n not in self.instances:
                    raise UnknownNameError(f"unknown instance {n!r} in minimize")
            pair = (a, b)
        keep_vars, subjects = self._resolve_projection(project_spec)
        store, enc = self._base_store(pair)
        names = list(self.instances)
        drafts = []
        skipped: list[dict[str, int]] = []
        for combo in itertools.product(
            *(self.admissible_paths(self.instances[n]) for n in names)
        ):
            path_atoms = [
                atom for n, p in zip(names, combo) for atom in p.atoms_for(n)
            ]
            s = store.add_atoms(path_atoms)
            try:
                if pair is not None:
                    opt = minimize(s, enc.objective, self.node_limit)
                    if opt.status == UNSAT:
                        continue
                    assert opt.status == OPTIMAL  # objective is bounded below by 0
                    drafts.append((combo, s, opt, opt.witness))
                else:
                    feas = is_satisfiable(s, self.node_limit)
                    if not feas.sat:
                        continue
                    drafts.append((combo, s, None, feas.witness))
            except BudgetExceededError:
                skipped.append({n: p.path_id for n, p in zip(names, combo)})
        if pair is not None:
            drafts.sort(
                key=lambda d: (d[2].value, tuple(p.path_id for p in d[0]))
            )
        else:
            drafts.sort(key=lambda d: tuple(p.path_id for p in d[0]))
        dom = self._domain_store()
        solutions: list[Solution] = []
        for i, (combo, s, opt, witness) in enumerate(drafts, start=1):
            answer_atoms, relaxed = self._answer_atoms(s, opt, enc, keep_vars, dom)
            items = render_answer_items(answer_atoms, subjects, self.schema)
            solutions.append(
                Solution(
                    index=i,
                    path_assignment={n: p.path_id for n, p in zip(names, combo)},
                    rules={
                        n: render_rule(p, n, self.schema) for n, p in zip(names, combo)
                    },
                    answer_atoms=tuple(answer_atoms),
                    answer_items=tuple(items),
                    distance=opt,
                    witness=self._witness_rows(witness),
                    is_global_optimum=(pair is not None and i == 1),
                    lp_relaxation=relaxed,
                )
            )
        lines = self._render_solveopt(solutions, skipped, names, pair, verbose)
        return SolveResult(solutions, lines, skipped)

    def _answer_atoms(
        self,
        s: ConstraintStore,
        opt: OptimumResult | None,
        enc,
        keep_vars: list[VarRef],
        dom: ConstraintStore,
    ) -> tuple[list[LinearAtom], bool]:
        """Projected answer, minus anything the domains alone entail.

        With a minimize the subject region is the optimal face of the
        closure (matching the reported closure optimum); without one it
        is the exact feasible region, strictness included.
        """
        if opt is not None:
            closed = tuple(a.closure() for a in s.atoms)
            face = LinearAtom.make(dict(enc.objective), EQ, opt.value)
            proj_store = ConstraintStore(
                closed + (face,), s.bounds, s.integer_vars, s.var_order
            )
        else:
            proj_store = s
        proj = project(proj_store, keep_vars, self.node_limit, prune=False)
        shown = [
            a for a in proj.atoms if not entails(dom, a, self.node_limit)
        ]

        def drop_priority(atom: LinearAtom) -> tuple:
            # Zero-pinned one-hot coordinates go first: redundancy between
            # "race[Black]=1" and "race[White]=0" should keep the positive pin.
            zero_pin = (
                atom.rel == EQ
                and len(atom.terms) == 1
                and atom.rhs == 0
                and atom.terms[0][0].coord is not None
            )
            return (0 if zero_pin else 1, atom.text())

        final = list(shown)
        for atom in sorted(shown, key=drop_priority):
            rest = [a for a in final if a is not atom]
            if entails(dom.add_atoms(rest), atom, self.node_limit):
                final = rest
        return final, proj.lp_relaxation

    def _resolve_projection(
        self, entries: Sequence[str] | None
    ) -> tuple[list[VarRef], list[str]]:
        if entries is None:
            subjects = list(self.instances)
            keep: list[VarRef] = []
            for name in subjects:
                keep.extend(instance_variables(name, self.schema))
            return keep, subjects
        keep = []
        subjects = []
        for entry in entries:
            e = entry.strip()
            if not e:
                continue
            if "." in e:
                inst, feat = e.split(".", 1)
                if inst not in self.instances:
                    raise UnknownNameError(f"unknown instance {inst!r} in project")
                coord = None
                if "[" in feat:
                    feat, _, rest = feat.partition("[")
                    if not rest.endswith("]"):
                        raise SessionError(f"bad projection entry {entry!r}")
                    coord = rest[:-1]
                spec = self.schema[feat]
                if coord is not None:
                    if spec.kind != CATEGORICAL or coord not in spec.values:
                        raise UnknownNameError(
                            f"{coord!r} is not a value of feature {feat!r}"
                        )
                    keep.append(VarRef(inst, feat, coord))
                else:
                    keep.extend(feature_variables(inst, spec))
            else:
                if e not in self.instances:
                    raise UnknownNameError(f"unknown instance {e!r} in project")
                subjects.append(e)
                keep.extend(instance_variables(e, self.schema))
        seen = set()
        unique = []
        for v in keep:
            if v not in seen:
                seen.add(v)
                unique.append(v)
        return unique, subjects

    def _witness_rows(
        self, witness: Mapping[VarRef, Fraction] | None
    ) -> dict[str, dict[str, str]]:
        rows: dict[str, dict[str, str]] = {}
        if witness is None:
            return rows
        for name in self.instances:
            row: dict[str, str] = {}
            for spec in self.schema:
                if spec.kind == CATEGORICAL:
                    chosen = None
                    for value in spec.values:
                        if witness.get(VarRef(name, spec.name, value)) == 1:
                            chosen = value
                            break
                    if chosen is not None:
                        row[spec.name] = chosen
                else:
                    val = witness.get(VarRef(name, spec.name))
                    if val is not None:
                        # feasibility witnesses can land on non-decimal
                        # rationals; fall back to p/q rather than raise
                        row[spec.name] = format_exact(val)
            rows[name] = row
        return rows

    def witness_values(
        self, sol: Solution, name: str
    ) -> dict[str, object]:
        """A witness row in schema value types (labels and Fractions)."""
        out: dict[str, object] = {}
        for spec in self.schema:
            raw = sol.witness.get(name, {}).get(spec.name)
            if raw is None:
                continue
            out[spec.name] = raw if spec.kind == CATEGORICAL else parse_number(raw)
        return out

    def _render_solveopt(
        self,
        solutions: list[Solution],
        skipped: list[dict[str, int]],
        names: list[str],
        pair: tuple[str, str] | None,
        verbose: int,
    ) -> list[str]:
        lines: list[str] = []
        for combo in skipped:
            ids = ", ".join(f"{n}:{combo[n]}" for n in names)
            lines.append(f"Budget exceeded for paths {ids}; combination skipped.")
        if not solutions:
            lines.append("No solution exists.")
            return lines
        for sol in solutions:
            tag = " (global optimum)" if sol.is_global_optimum else ""
            lines.append(f"Solution {sol.index}{tag}:")
            if verbose >= 2:
                for name in names:
                    lines.append(f"Rule satisfied by {name}:")
                    lines.append(sol.rules[name])
            if verbose >= 1 and sol.distance is not None:
                lines.append(
                    render_distance(sol.distance.value, sol.distance.attained)
                )
            if verbose >= 1 and sol.answer_items:
                lines.append("Answer constraint:")
                last = len(sol.answer_items) - 1
                for j, item in enumerate(sol.answer_items):
                    lines.append(item if j == last else item + ",")
        return lines

    def regions(self, name: str) -> dict:
        inst = self.instances.get(name)
        if inst is None:
            raise UnknownNameError(f"unknown instance {name!r}")
        store, _ = self._base_store(None)
        keep = instance_variables(name, self.schema)
        numeric_vars = [
            VarRef(name, spec.name)
            for spec in self.schema
            if spec.kind != CATEGORICAL
        ]
        entries = []
        for p in self.admissible_paths(inst):
            s = store.add_atoms(p.atoms_for(name))
            if not is_satisfiable(s, self.node_limit).sat:
                continue
            proj = project(s, keep, self.node_limit)
            entry = {
                "path_id": p.path_id,
                "label": p.label,
                "confidence": format_exact(p.confidence),
                "atoms": [render_atom_plain(a) for a in proj.atoms],
            }
            if len(numeric_vars) == 2 and len(keep) == 2:
                verts = region_vertices(proj.atoms, *numeric_vars)
                if verts:
                    entry["vertices"] = [
                        [format_exact(x), format_exact(y)] for x, y in verts
                    ]
            entries.append(entry)
        return {"instance": name, "regions": entries}

    # -- the shared command interpreter -----------------------------------

    def run_command(self, line: str) -> CommandOutcome:
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            return CommandOutcome([])
        cmd, _, rest = stripped.partition(" ")
        rest = rest.strip()
        if cmd == "instance":
            outcome = self._cmd_instance(rest)
        elif cmd == "constraint":
            if not rest:
                raise SessionError("usage: constraint EXPR")
            rec = self.add_constraint(rest)
            text = ", ".join(a.text() for a in rec.atoms)
            outcome = CommandOutcome(
                [f"Constraint {rec.cid} added: {text}"],
                {"constraint_id": rec.cid, "atoms": [a.text() for a in rec.atoms],
                 "version": self.version},
            )
        elif cmd == "retract":
            if not rest:
                raise SessionError("usage: retract ID-or-text")
            self.retract(rest)
            outcome = CommandOutcome(
                [f"Constraint retracted: {rest}"],
                {"retracted": rest, "version": self.version},
            )
        elif cmd == "solveopt":
            outcome = self._cmd_solveopt(rest)
        elif cmd == "paths":
            rows = [
                {
                    "path_id": p.path_id,
                    "label": p.label,
                    "confidence": format_exact(p.confidence),
                    "rule": render_rule(p, None, self.schema),
                }
                for p in self.tree.paths
            ]
            outcome = CommandOutcome(
                [f"Path {r['path_id']}: {r['rule']}" for r in rows],
                {"paths": rows},
            )
        elif cmd == "regions":
            if not rest:
                raise SessionError("usage: regions INSTANCE")
            data = self.regions(rest)
            outcome = CommandOutcome([json.dumps(data)], data)
        else:
            raise SessionError(f"unknown command {cmd!r}")
        self.transcript.append({"command": stripped, "output": list(outcome.lines)})
        return outcome

    def _cmd_instance(self, rest: str) -> CommandOutcome:
        tokens = rest.split()
        if not tokens:
            raise SessionError(
                "usage: instance NAME [feature=value ...] [label=CLASS] [minconf=Q]"
            )
        name = tokens[0]
        values: dict[str, str] = {}
        label = None
        minconf = None
        for tok in tokens[1:]:
            if "=" not in tok:
                raise SessionError(f"expected key=value, got {tok!r}")
            key, _, value = tok.partition("=")
            if key == "label":
                label = value
            elif key == "minconf":
                minconf = value
            else:
                values[key] = value
        self.declare_instance(name, values, label, minconf)
        return CommandOutcome(
            [f"Instance {name} declared."],
            {"instance": name, "version": self.version},
        )

    def _cmd_solveopt(self, rest: str) -> CommandOutcome:
        minimize_spec = None
        project_spec = None
        verbose = 1
        for tok in rest.split():
            key, sep, value = tok.partition("=")
            if not sep:
                raise SessionError(f"expected key=value, got {tok!r}")
            if key == "minimize":
                minimize_spec = value
            elif key == "project":
                project_spec = [p for p in value.split(",") if p]
            elif key == "verbose":
                if value not in ("0", "1", "2"):
                    raise SessionError(f"verbose must be 0, 1 or 2, got {value!r}")
                verbose = int(value)
            else:
                raise SessionError(f"unknown solveopt option {key!r}")
        result = self.solveopt(minimize_spec, project_spec, verbose)
        return CommandOutcome(result.lines, result.to_json())

    # -- transcripts -------------------------------------------------------

    def transcript_json(self) -> dict:
        return {"commands": [dict(entry) for entry in self.transcript]}

    @classmethod
    def replay(
        cls, tree: DecisionTree, commands: Iterable[str],
        node_limit: int = DEFAULT_NODE_LIMIT,
    ) -> "Session":
        session = cls(tree, node_limit)
        for command in commands:
            session.run_command(command)
        return session

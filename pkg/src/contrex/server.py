"""HTTP/JSON service over sessions.

Every dialogue mutation goes through ``Session.run_command``, the same
interpreter the CLI uses, so rendered lines are identical across both
front ends by construction. Exact values travel as strings ("5119.0",
"5119/99999"); any plain JSON float is an approximation and its field
name says so.

Error mapping: 400 parse/type/value problems (with character position
for syntax errors), 404 unknown session, constraint or instance
resource, 409 version conflict on a mutating call that carried
``expected_version``, 422 when the solver budget was exhausted for
every path combination.

Sessions live in memory. One lock per session serializes writers;
reads don't take it.
"""

from __future__ import annotations

import threading
import uuid
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from . import __version__
from .cart import train_cart
from .cli import infer_schema, read_csv_text
from .errors import (
    ConstraintSyntaxError,
    ContrexError,
    UnknownNameError,
)
from .parser import parse_constraint, parse_distance_spec
from .rational import format_exact
from .render import render_rule
from .session import Session
from .tree import tree_from_json


class CreateSessionBody(BaseModel):
    tree: Optional[dict] = None
    csv: Optional[str] = None
    label: Optional[str] = None
    max_depth: Optional[int] = None


class DeclareInstanceBody(BaseModel):
    name: str
    values: dict[str, str] = {}
    label: Optional[str] = None
    minconf: Optional[str] = None
    expected_version: Optional[int] = None


class AddConstraintBody(BaseModel):
    text: str
    expected_version: Optional[int] = None


class RetractBody(BaseModel):
    key: str
    expected_version: Optional[int] = None


class SolveOptBody(BaseModel):
    minimize: Optional[str] = None
    project: Optional[list[str]] = None
    verbose: int = 1
    expected_version: Optional[int] = None


class ParseBody(BaseModel):
    text: str


class _Entry:
    def __init__(self, session: Session):
        self.session = session
        self.lock = threading.Lock()


def _bad_request(exc: ContrexError) -> HTTPException:
    detail: dict = {"error": str(exc)}
    if isinstance(exc, ConstraintSyntaxError):
        detail["position"] = exc.position
    return HTTPException(400, detail)


def _no_space(kind: str, value: str) -> str:
    if value != value.strip() or any(c.isspace() for c in value):
        raise HTTPException(
            400, {"error": f"{kind} {value!r} must not contain whitespace"}
        )
    return value


def create_app() -> FastAPI:
    app = FastAPI(title="contrex", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, _Entry] = {}

    def entry_for(session_id: str) -> _Entry:
        entry = sessions.get(session_id)
        if entry is None:
            raise HTTPException(404, {"error": f"unknown session {session_id!r}"})
        return entry

    def check_version(session: Session, expected: Optional[int]) -> None:
        if expected is not None and expected != session.version:
            raise HTTPException(
                409,
                {
                    "error": "session was modified concurrently",
                    "expected_version": expected,
                    "version": session.version,
                },
            )

    def run(entry: _Entry, command: str, expected: Optional[int]) -> dict:
        with entry.lock:
            check_version(entry.session, expected)
            try:
                outcome = entry.session.run_command(command)
            except ContrexError as exc:
                raise _bad_request(exc) from exc
        data = dict(outcome.data or {})
        data["lines"] = outcome.lines
        data["version"] = entry.session.version
        return data

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        try:
            if body.tree is not None:
                tree = tree_from_json(body.tree)
            elif body.csv is not None and body.label:
                rows, labels = read_csv_text(body.csv, body.label)
                schema = infer_schema(rows, body.label)
                typed = [schema.validate_row(r) for r in rows]
                tree = train_cart(schema, typed, labels, max_depth=body.max_depth)
            else:
                raise HTTPException(
                    400, {"error": "provide either tree, or csv with label"}
                )
        except ContrexError as exc:
            raise _bad_request(exc) from exc
        session_id = uuid.uuid4().hex
        sessions[session_id] = _Entry(Session(tree))
        return {
            "session_id": session_id,
            "version": 0,
            "classes": list(tree.classes),
            "warnings": list(tree.warnings),
        }

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = entry_for(session_id).session
        instances = []
        for inst in session.instances.values():
            values = {
                feat: val if isinstance(val, str) else format_exact(val)
                for feat, val in inst.fixed_values.items()
            }
            instances.append(
                {
                    "name": inst.name,
                    "label": inst.class_requirement,
                    "minconf": format_exact(inst.minconf),
                    "values": values,
                }
            )
        return {
            "session_id": session_id,
            "version": session.version,
            "classes": list(session.tree.classes),
            "schema": session.schema.to_json(),
            "instances": instances,
            "constraints": [
                {
                    "id": rec.cid,
                    "source": rec.source,
                    "atoms": [a.text() for a in rec.atoms],
                    "declaration": rec.declared_for is not None,
                }
                for rec in session.records
            ],
        }

    @app.post("/sessions/{session_id}/instances")
    def declare_instance(session_id: str, body: DeclareInstanceBody):
        entry = entry_for(session_id)
        parts = ["instance", _no_space("instance name", body.name)]
        for feat, value in body.values.items():
            parts.append(f"{_no_space('feature', feat)}={_no_space('value', value)}")
        if body.label is not None:
            parts.append(f"label={_no_space('label', body.label)}")
        if body.minconf is not None:
            parts.append(f"minconf={_no_space('minconf', body.minconf)}")
        return run(entry, " ".join(parts), body.expected_version)

    @app.post("/sessions/{session_id}/constraints")
    def add_constraint(session_id: str, body: AddConstraintBody):
        entry = entry_for(session_id)
        if "\n" in body.text or "\r" in body.text:
            raise HTTPException(400, {"error": "constraint text must be one line"})
        return run(entry, f"constraint {body.text}", body.expected_version)

    @app.post("/sessions/{session_id}/retract")
    def retract(session_id: str, body: RetractBody):
        entry = entry_for(session_id)
        if "\n" in body.key or "\r" in body.key:
            raise HTTPException(400, {"error": "retract key must be one line"})
        with entry.lock:
            check_version(entry.session, body.expected_version)
            try:
                outcome = entry.session.run_command(f"retract {body.key}")
            except UnknownNameError as exc:
                raise HTTPException(404, {"error": str(exc)}) from exc
            except ContrexError as exc:
                raise _bad_request(exc) from exc
        data = dict(outcome.data or {})
        data["lines"] = outcome.lines
        data["version"] = entry.session.version
        return data

    @app.post("/sessions/{session_id}/solveopt")
    def solveopt(session_id: str, body: SolveOptBody):
        entry = entry_for(session_id)
        parts = ["solveopt"]
        if body.minimize:
            try:
                a, b = parse_distance_spec(body.minimize)
            except ContrexError as exc:
                raise _bad_request(exc) from exc
            parts.append(f"minimize=l1norm({a},{b})")
        if body.project:
            entries = [_no_space("projection entry", e) for e in body.project]
            parts.append(f"project={','.join(entries)}")
        if body.verbose not in (0, 1, 2):
            raise HTTPException(
                400, {"error": f"verbose must be 0, 1 or 2, got {body.verbose}"}
            )
        parts.append(f"verbose={body.verbose}")
        data = run(entry, " ".join(parts), body.expected_version)
        if data.get("budget_exceeded") and not data.get("solutions"):
            raise HTTPException(
                422,
                {
                    "error": "solver budget exceeded for every path combination",
                    "combinations": data["budget_exceeded"],
                },
            )
        return data

    @app.get("/sessions/{session_id}/paths")
    def list_paths(session_id: str):
        session = entry_for(session_id).session
        return {
            "paths": [
                {
                    "path_id": p.path_id,
                    "label": p.label,
                    "confidence": format_exact(p.confidence),
                    "rule": render_rule(p, None, session.schema),
                }
                for p in session.tree.paths
            ]
        }

    @app.get("/sessions/{session_id}/transcript")
    def transcript(session_id: str):
        return entry_for(session_id).session.transcript_json()

    @app.post("/sessions/{session_id}/parse")
    def parse_echo(session_id: str, body: ParseBody):
        session = entry_for(session_id).session
        try:
            atoms = parse_constraint(
                body.text, session.schema, list(session.instances)
            )
        except ContrexError as exc:
            raise _bad_request(exc) from exc
        return {"atoms": [a.text() for a in atoms]}

    @app.get("/sessions/{session_id}/regions/{instance}")
    def regions(session_id: str, instance: str):
        entry = entry_for(session_id)
        with entry.lock:
            try:
                outcome = entry.session.run_command(f"regions {instance}")
            except UnknownNameError as exc:
                raise HTTPException(404, {"error": str(exc)}) from exc
            except ContrexError as exc:
                raise _bad_request(exc) from exc
        return outcome.data

    return app


app = create_app()

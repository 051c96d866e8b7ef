"""Command line front end.

Subcommands:

    load    --tree T.json [--data D.csv --label COL [--max-depth N]]
    repl    --tree T.json
    solve   --tree T.json --script S.rx
    regions --tree T.json --instance NAME [--label CLASS] [--minconf Q]

``load`` without ``--data`` reads and validates a tree file. With
``--data`` it fits a tree to the CSV (schema inferred from the columns)
and writes it to the ``--tree`` path, so the same flag names one file in
both directions.

``solve`` echoes each script line behind a ``> `` prompt and stops at
the first error; the resulting stdout is the transcript format used by
the golden tests. ``repl`` is the same interpreter reading stdin, but it
keeps going after errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .cart import train_cart
from .errors import ContrexError, SchemaError
from .rational import parse_number
from .schema import CATEGORICAL, CONTINUOUS, FeatureSchema, FeatureSpec
from .session import Session
from .tree import load_tree


def infer_schema(rows: list[dict], label: str) -> FeatureSchema:
    """Column types from CSV content: all-numeric means continuous with
    observed bounds, anything else categorical in first-appearance order."""
    if not rows:
        raise SchemaError("empty CSV")
    specs = []
    for column in rows[0]:
        if column == label:
            continue
        raw = [r[column] for r in rows]
        try:
            nums = [parse_number(v) for v in raw]
        except ValueError:
            seen: dict[str, None] = {}
            for v in raw:
                seen.setdefault(v, None)
            specs.append(
                FeatureSpec(name=column, kind=CATEGORICAL, values=tuple(seen))
            )
            continue
        specs.append(
            FeatureSpec(name=column, kind=CONTINUOUS, min=min(nums), max=max(nums))
        )
    return FeatureSchema(specs)


def read_csv_text(text: str, label: str) -> tuple[list[dict], list[str]]:
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise SchemaError("no data rows in CSV")
    if label not in rows[0]:
        raise SchemaError(f"label column {label!r} not in CSV")
    labels = [r.pop(label) for r in rows]
    return rows, labels


def read_csv(path: str, label: str) -> tuple[list[dict], list[str]]:
    with open(path, newline="") as fh:
        return read_csv_text(fh.read(), label)


def _cmd_load(args) -> int:
    if args.data:
        if not args.label:
            raise SchemaError("--data needs --label")
        rows, labels = read_csv(args.data, args.label)
        schema = infer_schema(rows, args.label)
        typed = [schema.validate_row(r) for r in rows]
        tree = train_cart(schema, typed, labels, max_depth=args.max_depth)
        with open(args.tree, "w") as fh:
            json.dump(tree.to_json(), fh, indent=2)
            fh.write("\n")
        print(
            f"Trained tree with {len(tree.paths)} paths "
            f"on {len(rows)} rows; wrote {args.tree}"
        )
        return 0
    tree = load_tree(args.tree)
    for warning in tree.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    print(
        f"Loaded tree with {len(tree.paths)} paths "
        f"over {len(tree.schema)} features; classes: {', '.join(tree.classes)}"
    )
    return 0


def _cmd_repl(args) -> int:
    session = Session(load_tree(args.tree))
    interactive = sys.stdin.isatty()
    while True:
        try:
            line = input("> " if interactive else "")
        except EOFError:
            return 0
        try:
            for out in session.run_command(line).lines:
                print(out)
        except ContrexError as exc:
            print(f"error: {exc}")


def _cmd_solve(args) -> int:
    session = Session(load_tree(args.tree))
    with open(args.script) as fh:
        lines = fh.read().splitlines()
    for line in lines:
        if not line.strip():
            continue
        print(f"> {line}")
        for out in session.run_command(line).lines:
            print(out)
    return 0


def _cmd_regions(args) -> int:
    session = Session(load_tree(args.tree))
    session.declare_instance(args.instance, {}, args.label, args.minconf)
    print(json.dumps(session.regions(args.instance), indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contrex",
        description="Contrastive explanations for decision trees, exactly.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("load", help="validate a tree file or fit one from a CSV")
    p.add_argument("--tree", required=True, help="tree JSON path (output with --data)")
    p.add_argument("--data", help="CSV of training rows")
    p.add_argument("--label", help="label column of the CSV")
    p.add_argument("--max-depth", type=int, default=None)
    p.set_defaults(func=_cmd_load)

    p = sub.add_parser("repl", help="interactive session on stdin")
    p.add_argument("--tree", required=True)
    p.set_defaults(func=_cmd_repl)

    p = sub.add_parser("solve", help="run a .rx script and print the transcript")
    p.add_argument("--tree", required=True)
    p.add_argument("--script", required=True)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("regions", help="per-path projected regions as JSON")
    p.add_argument("--tree", required=True)
    p.add_argument("--instance", required=True)
    p.add_argument("--label", default=None, help="required class label")
    p.add_argument("--minconf", default=None, help="minimum path confidence")
    p.set_defaults(func=_cmd_regions)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ContrexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

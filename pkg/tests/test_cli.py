"""End-to-end CLI checks over subprocess boundaries."""

import json
import subprocess
import sys
from fractions import Fraction
from pathlib import Path

from contrex.parser import parse_constraint
from contrex.rational import parse_number
from contrex.tree import load_tree

ROOT = Path(__file__).resolve().parent.parent
TREE = ROOT / "data" / "synthetic_tree.json"
CREDIT_TREE = ROOT / "data" / "credit_tree.json"
CREDIT_SCRIPT = ROOT / "data" / "credit.rx"
CREDIT_GOLDEN = ROOT / "data" / "credit_golden.txt"


def run_cli(*argv, stdin=None):
    return subprocess.run(
        [sys.executable, "-m", "contrex.cli", *argv],
        input=stdin,
        capture_output=True,
        text=True,
        cwd=ROOT,
        timeout=120,
    )


def test_credit_transcript_matches_golden_bytes():
    res = run_cli(
        "solve", "--tree", str(CREDIT_TREE), "--script", str(CREDIT_SCRIPT)
    )
    assert res.returncode == 0
    assert res.stderr == ""
    assert res.stdout == CREDIT_GOLDEN.read_text()


def test_load_validates_and_summarizes():
    res = run_cli("load", "--tree", str(TREE))
    assert res.returncode == 0
    assert res.stdout == "Loaded tree with 8 paths over 2 features; classes: 0, 1\n"


def test_load_missing_file_fails_cleanly():
    res = run_cli("load", "--tree", "no_such_tree.json")
    assert res.returncode == 1
    assert res.stdout == ""
    assert res.stderr.startswith("error: ")


def test_train_roundtrip(tmp_path):
    csv_path = tmp_path / "toy.csv"
    csv_path.write_text(
        "feature1,feature2,target\n"
        + "".join(
            f"{x}.5,{y}.5,{'1' if x >= 5 else '0'}\n"
            for x in range(10)
            for y in range(3)
        )
    )
    out_tree = tmp_path / "fitted.json"
    res = run_cli(
        "load",
        "--tree", str(out_tree),
        "--data", str(csv_path),
        "--label", "target",
        "--max-depth", "3",
    )
    assert res.returncode == 0
    assert res.stdout.startswith("Trained tree with ")
    assert f"wrote {out_tree}" in res.stdout

    fitted = load_tree(out_tree)
    assert fitted.classes == ("0", "1")
    assert fitted.predict({"feature1": Fraction(2), "feature2": Fraction(1)}).label == "0"
    assert fitted.predict({"feature1": Fraction(8), "feature2": Fraction(1)}).label == "1"

    again = run_cli("load", "--tree", str(out_tree))
    assert again.returncode == 0
    assert "classes: 0, 1" in again.stdout


def test_solve_stops_at_first_error_with_partial_transcript():
    script = ROOT / "data" / "credit.rx"
    bad = "instance F feature1=2 feature2=3 label=0\nnonsense here\npaths\n"
    tmp = Path("/tmp/bad_script.rx")
    tmp.write_text(bad)
    res = run_cli("solve", "--tree", str(TREE), "--script", str(tmp))
    assert res.returncode == 1
    assert "> instance F feature1=2 feature2=3 label=0" in res.stdout
    assert "Instance F declared." in res.stdout
    assert "> nonsense here" in res.stdout
    assert "Path 0" not in res.stdout  # never reached
    assert res.stderr == "error: unknown command 'nonsense'\n"
    assert script.exists()  # unrelated inputs untouched


def test_repl_empty_stdin_exits_zero():
    res = run_cli("repl", "--tree", str(TREE), stdin="")
    assert res.returncode == 0
    assert res.stdout == ""


def test_repl_recovers_after_errors():
    stdin = (
        "instance F feature1=2 feature2=3 label=0\n"
        "bogus\n"
        "constraint F.feature1 <\n"
        "solveopt verbose=0\n"
    )
    res = run_cli("repl", "--tree", str(TREE), stdin=stdin)
    assert res.returncode == 0
    lines = res.stdout.splitlines()
    assert lines[0] == "Instance F declared."
    assert lines[1] == "error: unknown command 'bogus'"
    assert lines[2].startswith("error: expected a term")
    assert lines[3] == "Solution 1:"


def region_membership(entry, schema, x, y):
    from contrex.atoms import VarRef

    assignment = {
        VarRef("CE", "feature1"): x,
        VarRef("CE", "feature2"): y,
    }
    for text in entry["atoms"]:
        for atom in parse_constraint(text, schema, ["CE"]):
            if not atom.evaluate(assignment):
                return False
    return True


def test_regions_match_grid_oracle():
    res = run_cli(
        "regions",
        "--tree", str(TREE),
        "--instance", "CE",
        "--label", "1",
    )
    assert res.returncode == 0
    payload = json.loads(res.stdout)
    assert payload["instance"] == "CE"
    regions = {entry["path_id"]: entry for entry in payload["regions"]}
    assert set(regions) == {1, 4, 7}
    assert regions[1]["confidence"] == "1.0"

    closures = {
        1: ((4, 6), (0, 5)),
        4: ((6, 8), (5, 8)),
        7: ((8, 10), (8, 10)),
    }
    for pid, ((x0, x1), (y0, y1)) in closures.items():
        verts = {(parse_number(a), parse_number(b)) for a, b in regions[pid]["vertices"]}
        assert verts == {(x0, y0), (x1, y0), (x1, y1), (x0, y1)}

    tree = load_tree(TREE)
    conditions = {p.path_id: p.conditions for p in tree.paths}
    steps = 60
    for i in range(steps + 1):
        for j in range(steps + 1):
            x = Fraction(10 * i, steps)
            y = Fraction(10 * j, steps)
            for pid, entry in regions.items():
                want = all(
                    c.holds(x if c.feature == "feature1" else y)
                    for c in conditions[pid]
                )
                assert region_membership(entry, tree.schema, x, y) == want

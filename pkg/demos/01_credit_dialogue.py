"""Replay the recorded credit dialogue and narrate each exchange.

The script walks the same five queries the CLI transcript freezes:
a factual rule for a declined applicant, the contrastive rules above
a confidence floor, the effect of declaring age immutable, the closest
contrastive example, and the same question with age only bounded.

Run from the repository root:

    python3 demos/01_credit_dialogue.py
"""

from __future__ import annotations

from pathlib import Path

from contrex import Session, load_tree

ROOT = Path(__file__).resolve().parent.parent

COMMENTARY = {
    "instance F": "Declare the applicant as the factual instance F.",
    "instance CE": "Ask for a contrastive instance: same tree, the other label.",
    "constraint CE.age = F.age": "Age is immutable: tie CE's age to F's.",
    "solveopt minimize=l1norm(F,CE) project=CE verbose=2":
        "Closest contrastive example under the weighted L1 distance.",
    "retract F.age=19.0": "Drop the exact age declaration...",
    "constraint F.age<=19.0": "...and replace it with an upper bound.",
}


def caption(line: str) -> str | None:
    for prefix, text in COMMENTARY.items():
        if line.startswith(prefix):
            return text
    return None


def main() -> None:
    tree = load_tree(ROOT / "data" / "credit_tree.json")
    session = Session(tree)
    script = (ROOT / "data" / "credit.rx").read_text().splitlines()

    for line in script:
        if not line.strip():
            continue
        note = caption(line)
        if note:
            print(f"# {note}")
        print(f"> {line}")
        for out in session.run_command(line).lines:
            print(out)
        print()

    print(f"Session version after the dialogue: {session.version}")
    print(f"Constraints still in force: {[r.source for r in session.records]}")


if __name__ == "__main__":
    main()

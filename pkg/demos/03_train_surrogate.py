"""Fit a tree to generated data, persist it, and question it.

End-to-end loop: sample a two-blob dataset, train the exact CART on it,
write the tree document, reload it, and ask for the closest contrastive
example for one training row.

    python3 demos/03_train_surrogate.py
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

from contrex import Session, format_exact, load_tree, train_cart, two_gaussians


def main() -> None:
    schema, rows, labels = two_gaussians(240, seed=7)
    tree = train_cart(schema, rows, labels, max_depth=4)

    hits = sum(tree.predict(row).label == y for row, y in zip(rows, labels))
    print(f"Trained on {len(rows)} rows; {hits} classified correctly.")
    print(f"{len(tree.paths)} paths over {len(tree.schema)} features.\n")

    out = Path(tempfile.mkdtemp()) / "surrogate.json"
    out.write_text(json.dumps(tree.to_json(), indent=2) + "\n")
    reloaded = load_tree(out)
    print(f"Wrote and reloaded {out}; classes {reloaded.classes}.\n")

    # Interrogate the surrogate about its first label-0 training row.
    row = next(r for r, y in zip(rows, labels) if y == "0")
    session = Session(reloaded)
    session.run_command(
        "instance F "
        f"feature1={format_exact(row['feature1'])} "
        f"feature2={format_exact(row['feature2'])} label=0"
    )
    session.run_command("instance CE label=1")
    result = session.solveopt(minimize_spec="l1norm(F,CE)", verbose=2)
    print("Closest contrastive example for the first label-0 row:")
    for line in result.lines:
        print(line)


if __name__ == "__main__":
    main()

"""Tour the two-feature fixture tree's contrastive geometry.

The fixture classifies [0,10]^2 with three label-1 pockets. Declaring a
contrastive instance with no pinned features projects each admissible
path onto the plane, which is small enough to sketch in the terminal.

    python3 demos/02_synthetic_regions.py
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from contrex import Session, load_tree, parse_number

ROOT = Path(__file__).resolve().parent.parent
CELL = Fraction(1, 2)  # half-unit raster for the sketch


def sketch(regions: list[dict]) -> str:
    """ASCII raster of the projected regions, origin bottom-left."""
    marks = "ABC"
    grid = {}
    for mark, entry in zip(marks, regions):
        (x0, y0), (x1, y1) = corner_box(entry["vertices"])
        x = x0
        while x <= x1:
            y = y0
            while y <= y1:
                grid[(x, y)] = mark
                y += CELL
            x += CELL
    lines = []
    y = Fraction(10)
    while y >= 0:
        row = "".join(grid.get((x * CELL, y), ".") for x in range(21))
        lines.append(row)
        y -= CELL
    return "\n".join(lines)


def corner_box(vertices):
    xs = [parse_number(x) for x, _ in vertices]
    ys = [parse_number(y) for _, y in vertices]
    return (min(xs), min(ys)), (max(xs), max(ys))


def main() -> None:
    tree = load_tree(ROOT / "data" / "synthetic_tree.json")
    session = Session(tree)
    session.run_command("instance CE label=1")
    data = session.regions("CE")

    print(f"Contrastive regions for label 1 ({len(data['regions'])} paths):\n")
    for entry in data["regions"]:
        print(f"Path {entry['path_id']} (confidence {entry['confidence']}):")
        for atom in entry["atoms"]:
            print(f"  {atom}")
        print(f"  closure corners: {entry['vertices']}")
        print()

    print(sketch(data["regions"]))
    print("\nKeys: A/B/C the three regions' closures, '.' label-0 territory.")
    print("Region boundaries shared with label 0 are open on the region")
    print("side wherever the rendered atoms above are strict.")


if __name__ == "__main__":
    main()

"""The constraint reasoner on its own, no trees involved.

Four operations drive everything else in the package: satisfiability
with strict inequalities decided exactly, entailment, minimization with
an attainment flag, and projection. Each gets a tiny worked example.

    python3 demos/04_reasoner_tour.py
"""

from __future__ import annotations

from fractions import Fraction

from contrex import (
    ConstraintStore,
    LinearAtom,
    VarRef,
    entails,
    format_exact,
    is_satisfiable,
    minimize,
    project,
)

x = VarRef(None, "x")
y = VarRef(None, "y")
BOX = {x: (Fraction(0), Fraction(10)), y: (Fraction(0), Fraction(10))}


def show(title: str) -> None:
    print(f"\n-- {title} " + "-" * max(0, 60 - len(title)))


def main() -> None:
    show("satisfiability is exact on open regions")
    open_sliver = ConstraintStore.build(
        [
            LinearAtom.make({x: Fraction(1), y: Fraction(1)}, "<", Fraction(4)),
            LinearAtom.make({x: Fraction(1), y: Fraction(1)}, ">", Fraction(39, 10)),
        ],
        BOX, (), (x, y),
    )
    feas = is_satisfiable(open_sliver)
    w = {v.feature: format_exact(val) for v, val in feas.witness.items()}
    print(f"3.9 < x+y < 4 over [0,10]^2: {feas.status}, witness {w}")

    show("entailment = unsatisfiability of the negation")
    store = ConstraintStore.build(
        [LinearAtom.make({x: Fraction(1)}, "<=", Fraction(3))], BOX, (), (x, y)
    )
    claim_true = LinearAtom.make({x: Fraction(2), y: Fraction(1)}, "<=", Fraction(16))
    claim_false = LinearAtom.make({x: Fraction(1)}, "<=", Fraction(2))
    print(f"x<=3 entails 2x+y<=16: {entails(store, claim_true)}")
    print(f"x<=3 entails x<=2:     {entails(store, claim_false)}")

    show("minimize reports the infimum and whether it is attained")
    strict = ConstraintStore.build(
        [LinearAtom.make({x: Fraction(1)}, ">", Fraction(5, 2))], BOX, (), (x,)
    )
    opt = minimize(strict, {x: Fraction(1)})
    print(f"min x s.t. x>5/2 (continuous): {format_exact(opt.value)}, "
          f"attained={opt.attained}")
    stepped = ConstraintStore.build(
        [LinearAtom.make({x: Fraction(1)}, ">", Fraction(5, 2))],
        {x: (Fraction(0), Fraction(10))}, (x,), (x,),
    )
    opt = minimize(stepped, {x: Fraction(1)})
    print(f"min x s.t. x>5/2 (integer):    {format_exact(opt.value)}, "
          f"attained={opt.attained}")

    show("projection keeps strictness through elimination")
    wedge = ConstraintStore.build(
        [
            LinearAtom.make({x: Fraction(1), y: Fraction(1)}, "<=", Fraction(4)),
            LinearAtom.make({y: Fraction(1)}, ">", Fraction(1)),
        ],
        BOX, (), (x, y),
    )
    shadow = project(wedge, [x])
    print("project x+y<=4, y>1 onto x:")
    for atom in shadow.atoms:
        print(f"  {atom.text()}")
    print(f"(lp_relaxation={shadow.lp_relaxation}; exact, no integers here)")


if __name__ == "__main__":
    main()

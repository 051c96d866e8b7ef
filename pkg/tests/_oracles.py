"""Brute-force grid oracles for the reasoner tests.

Two random store families over integer boxes [0,6]^k:

* general stores: small random integer-coefficient atoms. The solver is
  integer-exact on these, so enumerating the finite grid is a complete
  oracle for satisfiability, entailment, and minimization.
* difference stores: atoms of the shapes +/-x <= c, x - y <= c, x - y = c
  with integer right-hand sides. These systems are totally unimodular and
  closed under variable elimination, so the rational shadow computed by
  project() contains exactly the integer points of the integer shadow;
  grid membership is a complete oracle for projection as well.
"""

import itertools
import random
from fractions import Fraction

from contrex.atoms import EQ, LE, LT, LinearAtom, VarRef
from contrex.store import ConstraintStore

BOX_LO = 0
BOX_HI = 6


def box_vars(k):
    return [VarRef(None, f"x{i}") for i in range(k)]


def integer_box_store(variables, atoms):
    bounds = {v: (Fraction(BOX_LO), Fraction(BOX_HI)) for v in variables}
    return ConstraintStore.build(atoms, bounds, variables, variables)


def random_general_store(rng: random.Random):
    k = rng.randint(1, 4)
    variables = box_vars(k)
    atoms = []
    for _ in range(rng.randint(1, 4)):
        coeffs = {}
        for v in variables:
            if rng.random() < 0.7:
                c = rng.randint(-3, 3)
                if c:
                    coeffs[v] = Fraction(c)
        if not coeffs:
            coeffs[rng.choice(variables)] = Fraction(1)
        rel = rng.choice([LE, LE, LE, LT, EQ])
        rhs = Fraction(rng.randint(-8, 20))
        atoms.append(LinearAtom.make(coeffs, rel, rhs))
    return integer_box_store(variables, atoms), variables


def random_difference_store(rng: random.Random):
    """(store, variables, kept) with kept a proper nonempty subset."""
    k = rng.randint(2, 4)
    variables = box_vars(k)
    atoms = []
    for _ in range(rng.randint(2, 5)):
        kind = rng.random()
        if kind < 0.35:
            v = rng.choice(variables)
            if rng.random() < 0.5:
                atoms.append(LinearAtom.make({v: Fraction(1)}, LE, Fraction(rng.randint(0, 6))))
            else:
                atoms.append(LinearAtom.make({v: Fraction(-1)}, LE, Fraction(-rng.randint(0, 6))))
        else:
            a, b = rng.sample(variables, 2)
            rel = EQ if kind > 0.85 else LE
            span = 3 if rel == EQ else 4
            atoms.append(
                LinearAtom.make(
                    {a: Fraction(1), b: Fraction(-1)}, rel, Fraction(rng.randint(-span, span))
                )
            )
    kept = sorted(rng.sample(variables, rng.randint(1, k - 1)), key=variables.index)
    return integer_box_store(variables, atoms), variables, kept


def compile_atoms(atoms, variables):
    """Atoms as (indexed int terms, rel, rhs) for fast grid evaluation."""
    index = {v: i for i, v in enumerate(variables)}
    return [
        (tuple((index[v], int(c)) for v, c in atom.terms), atom.rel, atom.rhs)
        for atom in atoms
    ]


def point_satisfies(compiled, point) -> bool:
    for terms, rel, rhs in compiled:
        lhs = sum(point[i] * c for i, c in terms)
        if rel == LE:
            ok = lhs <= rhs
        elif rel == LT:
            ok = lhs < rhs
        else:
            ok = lhs == rhs
        if not ok:
            return False
    return True


def grid_solutions(store, variables):
    """Integer box points, as tuples, satisfying every atom of the store."""
    compiled = compile_atoms(store.atoms, variables)
    return [
        pt
        for pt in itertools.product(range(BOX_LO, BOX_HI + 1), repeat=len(variables))
        if point_satisfies(compiled, pt)
    ]


def as_assignment(variables, point):
    return {v: Fraction(c) for v, c in zip(variables, point)}


def grid_min(points, variables, objective):
    weights = [objective.get(v, Fraction(0)) for v in variables]
    return min(sum(w * c for w, c in zip(weights, pt)) for pt in points)

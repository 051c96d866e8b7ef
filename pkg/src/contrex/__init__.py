"""Contrastive explanations for decision trees over exact linear constraints.

The package compiles root-to-leaf paths of a decision tree into linear
atoms over rational numbers, then answers factual-rule, contrastive-rule
and closest-contrastive-example queries with an exact constraint
reasoner (satisfiability, entailment, optimization and projection), so
every threshold, distance and region boundary comes back as a rational
number rather than a float.

Typical use::

    from contrex import Session, load_tree

    session = Session(load_tree("tree.json"))
    session.run_command("instance F age=19 ... label=<=50K")
    session.run_command("instance CE label=>50K minconf=0.8")
    for line in session.run_command("solveopt minimize=l1norm(F,CE)").lines:
        print(line)
"""

from .atoms import EQ, LE, LT, LinearAtom, VarRef
from .cart import train_cart
from .datasets import two_gaussians
from .distance import l1_encoding, l1_value
from .errors import (
    BudgetExceededError,
    ConstraintSyntaxError,
    ContrexError,
    SchemaError,
    SessionError,
    TreeFormatError,
    TypeMismatchError,
    UnknownNameError,
)
from .parser import parse_constraint, parse_distance_spec
from .rational import format_decimal, format_exact, parse_number, to_fraction
from .reasoner import (
    DEFAULT_NODE_LIMIT,
    OPTIMAL,
    SAT,
    UNBOUNDED,
    UNSAT,
    FeasibilityResult,
    OptimumResult,
    Projection,
    entails,
    fm_eliminate,
    is_satisfiable,
    minimize,
    project,
)
from .render import render_answer_items, render_atom_plain, render_rule
from .schema import CATEGORICAL, CONTINUOUS, ORDINAL, FeatureSchema, FeatureSpec
from .session import (
    CommandOutcome,
    ConstraintRecord,
    Instance,
    Session,
    Solution,
    SolveResult,
)
from .store import ConstraintStore, domain_parts, instance_variables
from .tree import DecisionTree, Leaf, PathFact, Split, load_tree, tree_from_json

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "CATEGORICAL",
    "CONTINUOUS",
    "CommandOutcome",
    "ConstraintRecord",
    "ConstraintStore",
    "ConstraintSyntaxError",
    "ContrexError",
    "DEFAULT_NODE_LIMIT",
    "DecisionTree",
    "EQ",
    "FeasibilityResult",
    "FeatureSchema",
    "FeatureSpec",
    "Instance",
    "LE",
    "LT",
    "Leaf",
    "LinearAtom",
    "OPTIMAL",
    "OptimumResult",
    "ORDINAL",
    "PathFact",
    "Projection",
    "SAT",
    "SchemaError",
    "Session",
    "SessionError",
    "Solution",
    "SolveResult",
    "Split",
    "TreeFormatError",
    "TypeMismatchError",
    "UNBOUNDED",
    "UNSAT",
    "UnknownNameError",
    "VarRef",
    "domain_parts",
    "entails",
    "fm_eliminate",
    "format_decimal",
    "format_exact",
    "instance_variables",
    "is_satisfiable",
    "l1_encoding",
    "l1_value",
    "load_tree",
    "minimize",
    "parse_constraint",
    "parse_distance_spec",
    "parse_number",
    "project",
    "render_answer_items",
    "render_atom_plain",
    "render_rule",
    "to_fraction",
    "train_cart",
    "tree_from_json",
    "two_gaussians",
    "__version__",
]

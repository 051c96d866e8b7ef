"""Decision procedures over constraint stores.

Four operations, all exact over rationals with integer marks honored via
branch-and-bound:

* ``is_satisfiable`` — strictness-aware feasibility. The closure is solved
  first; if any strict atoms remain, a slack variable t is pushed into
  every strict row (e < b becomes e + t <= b) and t is driven positive.
  The region is nonempty iff some integral-feasible point allows t > 0,
  so a region that is nonempty only in closure is correctly UNSAT.
* ``entails`` — refutation of the negated atom. Negating an equality
  produces two branches; both must be UNSAT.
* ``minimize`` — branch-and-bound around the exact simplex. The reported
  value is the closure optimum together with an ``attained`` flag telling
  whether a strictly feasible point achieves it; for the L1-style
  objectives used by sessions the closure optimum is the infimum.
* ``project`` — Fourier-Motzkin elimination, substituting through
  equalities where possible. Integer marks do not participate in
  elimination; a projection that involves integer variables describes the
  LP relaxation and says so in its metadata.

Branching is deterministic: most-fractional variable first (ties broken
by store variable order), floor branch explored first, best-bound
pruning, and a hard node budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .atoms import EQ, LE, LT, LinearAtom, VarRef
from .errors import BudgetExceededError
from .simplex import INFEASIBLE, LPRow, OPTIMAL as LP_OPTIMAL, UNBOUNDED as LP_UNBOUNDED, solve_lp
from .store import Bounds, ConstraintStore

SAT = "sat"
UNSAT = "unsat"
OPTIMAL = "optimal"
UNBOUNDED = "unbounded"

DEFAULT_NODE_LIMIT = 100_000

_ZERO = Fraction(0)
_ONE = Fraction(1)

Assignment = dict[VarRef, Fraction]


@dataclass(frozen=True)
class FeasibilityResult:
    status: str  # sat | unsat
    witness: Assignment | None = None

    @property
    def sat(self) -> bool:
        return self.status == SAT


@dataclass(frozen=True)
class OptimumResult:
    status: str  # optimal | unsat | unbounded
    value: Fraction | None = None
    attained: bool = False
    witness: Assignment | None = None


@dataclass(frozen=True)
class Projection:
    """Atoms describing the shadow, plus metadata about integer variables."""

    atoms: tuple[LinearAtom, ...]
    lp_relaxation: bool
    integer_vars: frozenset[VarRef]

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self):
        return len(self.atoms)

    def __getitem__(self, i):
        return self.atoms[i]


# ---------------------------------------------------------------------------
# presolve
# ---------------------------------------------------------------------------


@dataclass
class _Presolved:
    unsat: bool
    atoms: list[LinearAtom]
    bounds: dict[VarRef, Bounds]
    pins: Assignment


def _tighten_integer_atom(atom: LinearAtom, ints: frozenset[VarRef]) -> LinearAtom | None:
    """Round an all-integer atom to its integer-exact non-strict form.

    Returns None for atoms that become unsatisfiable (integral equality
    with fractional right side).
    """
    if not atom.terms or not all(v in ints for v in atom.variables()):
        return atom
    scale = math.lcm(*(c.denominator for _, c in atom.terms))
    terms = {v: c * scale for v, c in atom.terms}
    rhs = atom.rhs * scale
    # Divide out the coefficient gcd: the lhs then takes every integer
    # value, so the rhs rounds to the nearest attainable one. Without
    # this a singleton like -3x <= -7 would fold the loose bound 7/3
    # into an integer variable's range.
    g = math.gcd(*(int(c) for c in terms.values()))
    terms = {v: c / g for v, c in terms.items()}
    rhs = rhs / g
    if atom.rel == EQ:
        if rhs.denominator != 1:
            return None
        return LinearAtom.make(terms, EQ, rhs)
    if atom.rel == LT:
        limit = rhs - 1 if rhs.denominator == 1 else Fraction(math.floor(rhs))
        return LinearAtom.make(terms, LE, limit)
    return LinearAtom.make(terms, LE, Fraction(math.floor(rhs)))


def _presolve(
    atoms: Sequence[LinearAtom],
    bounds: Mapping[VarRef, Bounds],
    ints: frozenset[VarRef],
) -> _Presolved:
    """Pin singleton equalities, fold singleton bounds, detect trivia.

    Works on the exact (strictness-preserving) store. Returns unsat=True
    only when the region itself is empty.
    """
    work: list[LinearAtom] = []
    for a in atoms:
        t = _tighten_integer_atom(a, ints)
        if t is None:
            return _Presolved(True, [], {}, {})
        work.append(t)
    bnds: dict[VarRef, Bounds] = dict(bounds)
    for var in ints:
        lo, hi = bnds.get(var, (None, None))
        if lo is not None:
            lo = Fraction(math.ceil(lo))
        if hi is not None:
            hi = Fraction(math.floor(hi))
        if var in bnds:
            bnds[var] = (lo, hi)
    pins: Assignment = {}

    def pin(var: VarRef, value: Fraction) -> bool:
        """Record var = value; False means contradiction."""
        if var in pins:
            return pins[var] == value
        if var in ints and value.denominator != 1:
            return False
        lo, hi = bnds.pop(var, (None, None))
        if lo is not None and value < lo:
            return False
        if hi is not None and value > hi:
            return False
        pins[var] = value
        return True

    changed = True
    while changed:
        changed = False
        # Bounds that collapse to a point become pins.
        for var, (lo, hi) in list(bnds.items()):
            if lo is not None and hi is not None:
                if lo > hi:
                    return _Presolved(True, [], {}, {})
                if lo == hi:
                    if not pin(var, lo):
                        return _Presolved(True, [], {}, {})
                    changed = True
        nxt: list[LinearAtom] = []
        for atom in work:
            if pins and any(v in pins for v in atom.variables()):
                acc = {v: c for v, c in atom.terms if v not in pins}
                shift = sum(
                    (c * pins[v] for v, c in atom.terms if v in pins), _ZERO
                )
                atom = LinearAtom.make(acc, atom.rel, atom.rhs - shift)
                changed = True
            t = _tighten_integer_atom(atom, ints)
            if t is None:
                return _Presolved(True, [], {}, {})
            atom = t
            if atom.is_ground():
                if not atom.ground_truth():
                    return _Presolved(True, [], {}, {})
                continue
            if len(atom.terms) == 1:
                var, coeff = atom.terms[0]
                val = atom.rhs / coeff
                if atom.rel == EQ:
                    if not pin(var, val):
                        return _Presolved(True, [], {}, {})
                    changed = True
                    continue
                upper = coeff > 0  # var <= val / var >= val after sign
                if var in pins:
                    nxt.append(atom)  # will ground out next pass
                    continue
                lo, hi = bnds.get(var, (None, None))
                if atom.rel == LE:
                    if upper:
                        hi = val if hi is None else min(hi, val)
                    else:
                        lo = val if lo is None else max(lo, val)
                    bnds[var] = (lo, hi)
                    changed = True
                    continue
                # Strict singletons on continuous variables keep their atom
                # (strictness must survive for the feasibility push) but
                # still contribute their closure value to the bounds.
                if upper:
                    hi = val if hi is None else min(hi, val)
                else:
                    lo = val if lo is None else max(lo, val)
                bnds[var] = (lo, hi)
                nxt.append(atom)
                continue
            nxt.append(atom)
        work = nxt

    # A strict singleton whose bound got pinned elsewhere grounds out above;
    # here every remaining atom has >= 1 free variable.
    return _Presolved(False, work, bnds, pins)


# ---------------------------------------------------------------------------
# lowering to the standard-form LP
# ---------------------------------------------------------------------------


@dataclass
class _Lowered:
    rows: list[LPRow]
    num_cols: int
    shift: dict[VarRef, tuple[str, int, Fraction | None]]  # mode, col, anchor
    objective: dict[int, Fraction]
    offset: Fraction
    t_col: int | None


def _lower(
    atoms: Sequence[LinearAtom],
    bounds: Mapping[VarRef, Bounds],
    objective: Mapping[VarRef, Fraction],
    push: bool,
) -> _Lowered:
    """Map a presolved store onto nonnegative LP columns.

    Variables with a finite lower bound are shifted, ones with only an
    upper bound are mirrored, free variables are split into a difference
    of two nonnegative columns.
    """
    in_use: list[VarRef] = []
    seen = set()
    for atom in atoms:
        for v in atom.variables():
            if v not in seen:
                seen.add(v)
                in_use.append(v)
    for v in objective:
        if v not in seen:
            seen.add(v)
            in_use.append(v)

    shift: dict[VarRef, tuple[str, int, Fraction | None]] = {}
    rows: list[LPRow] = []
    col = 0
    for var in in_use:
        lo, hi = bounds.get(var, (None, None))
        if lo is not None:
            shift[var] = ("lo", col, lo)
            if hi is not None:
                rows.append(LPRow({col: _ONE}, LE, hi - lo))
            col += 1
        elif hi is not None:
            shift[var] = ("hi", col, hi)
            col += 1
        else:
            shift[var] = ("free", col, None)
            col += 2

    t_col = None
    if push:
        t_col = col
        col += 1
        rows.append(LPRow({t_col: _ONE}, LE, _ONE))

    def map_terms(terms: Iterable[tuple[VarRef, Fraction]]) -> tuple[dict[int, Fraction], Fraction]:
        cols: dict[int, Fraction] = {}
        shift_total = _ZERO
        for var, coeff in terms:
            mode, c0, anchor = shift[var]
            if mode == "lo":
                cols[c0] = cols.get(c0, _ZERO) + coeff
                shift_total += coeff * anchor
            elif mode == "hi":
                cols[c0] = cols.get(c0, _ZERO) - coeff
                shift_total += coeff * anchor
            else:
                cols[c0] = cols.get(c0, _ZERO) + coeff
                cols[c0 + 1] = cols.get(c0 + 1, _ZERO) - coeff
        return cols, shift_total

    for atom in atoms:
        cols, shift_total = map_terms(atom.terms)
        rhs = atom.rhs - shift_total
        if atom.rel == EQ:
            rows.append(LPRow(cols, "=", rhs))
        elif atom.rel == LT and push:
            cols[t_col] = cols.get(t_col, _ZERO) + _ONE
            rows.append(LPRow(cols, LE, rhs))
        else:  # closure of strict atoms when not pushing
            rows.append(LPRow(cols, LE, rhs))

    obj_cols, obj_shift = map_terms(objective.items())
    return _Lowered(rows, col, shift, obj_cols, obj_shift, t_col)


def _reconstruct(
    lowered: _Lowered, lp_assignment: Sequence[Fraction]
) -> Assignment:
    out: Assignment = {}
    for var, (mode, c0, anchor) in lowered.shift.items():
        if mode == "lo":
            out[var] = anchor + lp_assignment[c0]
        elif mode == "hi":
            out[var] = anchor - lp_assignment[c0]
        else:
            out[var] = lp_assignment[c0] - lp_assignment[c0 + 1]
    return out


def _default_value(lo: Fraction | None, hi: Fraction | None) -> Fraction:
    if lo is not None:
        return lo
    if hi is not None:
        return hi
    return _ZERO


def _complete(
    store_vars: Iterable[VarRef],
    pins: Assignment,
    solved: Assignment,
    bounds: Mapping[VarRef, Bounds],
) -> Assignment:
    """Full witness over every store variable, deterministic defaults."""
    out: Assignment = {}
    for var in store_vars:
        if var in solved:
            out[var] = solved[var]
        elif var in pins:
            out[var] = pins[var]
        else:
            lo, hi = bounds.get(var, (None, None))
            out[var] = _default_value(lo, hi)
    out.update(pins)
    for var, val in solved.items():
        out[var] = val
    return out


# ---------------------------------------------------------------------------
# branch and bound
# ---------------------------------------------------------------------------


@dataclass
class _MilpOutcome:
    status: str  # optimal | unsat | unbounded
    value: Fraction | None
    assignment: Assignment | None  # over store variables (pins included)


def _solve_milp(
    atoms: Sequence[LinearAtom],
    bounds: Mapping[VarRef, Bounds],
    ints: frozenset[VarRef],
    objective: Mapping[VarRef, Fraction],
    var_order: Sequence[VarRef],
    *,
    push: bool,
    node_limit: int,
    stop_below: Fraction | None = None,
    prune_at: Fraction | None = None,
) -> _MilpOutcome:
    """Depth-first branch-and-bound; the LP relaxation bounds every node.

    ``push`` adds the strictness slack t (and the objective is then
    expected to be -t). ``stop_below``: return the first integral point
    whose value is strictly below the threshold. ``prune_at``: discard
    nodes whose relaxation value is >= the threshold.
    """
    order_pos = {v: i for i, v in enumerate(var_order)}
    stack: list[dict[VarRef, Bounds]] = [dict(bounds)]
    best: _MilpOutcome | None = None
    nodes = 0
    while stack:
        node_bounds = stack.pop()
        nodes += 1
        if nodes > node_limit:
            raise BudgetExceededError(
                f"branch-and-bound exceeded {node_limit} nodes"
            )
        pre = _presolve(atoms, node_bounds, ints)
        if pre.unsat:
            continue
        # Pinned variables left in the objective would lower as free
        # columns; their contribution is restored via pinned_obj below.
        live_obj = {v: c for v, c in objective.items() if v not in pre.pins}
        lowered = _lower(pre.atoms, pre.bounds, live_obj, push)
        obj = dict(lowered.objective)
        if push:
            obj[lowered.t_col] = obj.get(lowered.t_col, _ZERO) - _ONE
        res = solve_lp(lowered.num_cols, lowered.rows, obj)
        if res.status == INFEASIBLE:
            continue
        if res.status == LP_UNBOUNDED:
            return _MilpOutcome(UNBOUNDED, None, None)
        pinned_obj = sum(
            (c * pre.pins[v] for v, c in objective.items() if v in pre.pins), _ZERO
        )
        value = res.value + lowered.offset + pinned_obj
        if prune_at is not None and value >= prune_at:
            continue
        if best is not None and best.value is not None and value >= best.value:
            continue
        solved = _reconstruct(lowered, res.assignment)
        fractional: VarRef | None = None
        worst = _ZERO
        for var in ints:
            val = solved.get(var, pre.pins.get(var))
            if val is None or val.denominator == 1:
                continue
            frac = val - math.floor(val)
            dist = min(frac, 1 - frac)
            key = order_pos.get(var, len(order_pos))
            if fractional is None or dist > worst or (
                dist == worst and key < order_pos.get(fractional, len(order_pos))
            ):
                fractional, worst = var, dist
        if fractional is None:
            candidate = _MilpOutcome(
                OPTIMAL,
                value,
                _complete(var_order, pre.pins, solved, pre.bounds),
            )
            if best is None or candidate.value < best.value:
                best = candidate
            if stop_below is not None and best.value < stop_below:
                return best
            continue
        val = solved[fractional]
        lo, hi = node_bounds.get(fractional, (None, None))
        floor_v = Fraction(math.floor(val))
        up = dict(node_bounds)
        up[fractional] = (max(lo, floor_v + 1) if lo is not None else floor_v + 1, hi)
        down = dict(node_bounds)
        down[fractional] = (lo, min(hi, floor_v) if hi is not None else floor_v)
        stack.append(up)
        stack.append(down)  # floor branch explored first
    if best is None:
        return _MilpOutcome(UNSAT, None, None)
    return best


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def is_satisfiable(
    store: ConstraintStore, node_limit: int = DEFAULT_NODE_LIMIT
) -> FeasibilityResult:
    """Exact feasibility of the store, strictness and integrality included."""
    var_order = store.variables()
    pre = _presolve(store.atoms, store.bounds, store.integer_vars)
    if pre.unsat:
        return FeasibilityResult(UNSAT)
    has_strict = any(a.is_strict for a in pre.atoms)
    if has_strict:
        outcome = _solve_milp(
            pre.atoms,
            pre.bounds,
            store.integer_vars,
            {},
            var_order,
            push=True,
            node_limit=node_limit,
            stop_below=_ZERO,
            prune_at=_ZERO,
        )
        if outcome.status != OPTIMAL or outcome.value >= 0:
            return FeasibilityResult(UNSAT)
        witness = dict(outcome.assignment)
        witness.update(pre.pins)
        return FeasibilityResult(SAT, _complete(var_order, pre.pins, witness, store.bounds))
    outcome = _solve_milp(
        pre.atoms,
        pre.bounds,
        store.integer_vars,
        {},
        var_order,
        push=False,
        node_limit=node_limit,
        stop_below=_ONE,  # any integral point has value 0 < 1
    )
    if outcome.status != OPTIMAL:
        return FeasibilityResult(UNSAT)
    witness = dict(outcome.assignment)
    witness.update(pre.pins)
    return FeasibilityResult(SAT, _complete(var_order, pre.pins, witness, store.bounds))


def entails(
    store: ConstraintStore, atom: LinearAtom, node_limit: int = DEFAULT_NODE_LIMIT
) -> bool:
    """True iff every solution of the store satisfies the atom."""
    for branch in atom.negate():
        if is_satisfiable(store.add_atoms([branch]), node_limit).sat:
            return False
    return True


def minimize(
    store: ConstraintStore,
    objective: Mapping[VarRef, Fraction],
    node_limit: int = DEFAULT_NODE_LIMIT,
) -> OptimumResult:
    """Minimize a linear objective over the store.

    The value is the optimum over the closure, which for the objectives
    used here equals the infimum over the (possibly open) region; the
    ``attained`` flag reports whether a strictly feasible point reaches
    it. UNSAT means the region itself is empty.
    """
    feas = is_satisfiable(store, node_limit)
    if not feas.sat:
        return OptimumResult(UNSAT)
    var_order = store.variables()
    # Integer tightening must precede the closure: an all-integer strict
    # atom like x > 0 steps to x >= 1, while its closure would relax to
    # x >= 0 and undercut the true infimum.
    tightened = []
    for a in store.atoms:
        t = _tighten_integer_atom(a, store.integer_vars)
        assert t is not None  # the region is nonempty
        tightened.append(t)
    closure = [a.closure() for a in tightened]
    pre = _presolve(closure, store.bounds, store.integer_vars)
    assert not pre.unsat  # the exact region is nonempty, so its closure is too
    # Presolve pins leave both the atoms and the bounds, so their share of
    # the objective and the witness must be reattached here.
    outcome = _solve_milp(
        pre.atoms,
        pre.bounds,
        store.integer_vars,
        {v: c for v, c in objective.items() if v not in pre.pins},
        var_order,
        push=False,
        node_limit=node_limit,
    )
    if outcome.status == UNBOUNDED:
        return OptimumResult(UNBOUNDED)
    assert outcome.status == OPTIMAL
    value = outcome.value + sum(
        (c * pre.pins[v] for v, c in objective.items() if v in pre.pins), _ZERO
    )
    attained_witness = dict(outcome.assignment)
    attained_witness.update(pre.pins)
    if not any(a.is_strict for a in store.atoms):
        return OptimumResult(OPTIMAL, value, True, attained_witness)
    pinned = store.add_atoms([LinearAtom.make(dict(objective), EQ, value)])
    exact = is_satisfiable(pinned, node_limit)
    if exact.sat:
        return OptimumResult(OPTIMAL, value, True, exact.witness)
    return OptimumResult(OPTIMAL, value, False, attained_witness)


# ---------------------------------------------------------------------------
# Fourier-Motzkin elimination and projection
# ---------------------------------------------------------------------------


def _eliminate_var(atoms: list[LinearAtom], var: VarRef) -> list[LinearAtom]:
    """One elimination step over an atom list (bounds already material)."""
    for i, atom in enumerate(atoms):
        if atom.rel == EQ and atom.coeff(var) != 0:
            coeff = atom.coeff(var)
            expr = {v: -c / coeff for v, c in atom.terms if v != var}
            const = atom.rhs / coeff
            out = []
            for j, other in enumerate(atoms):
                if j == i:
                    continue
                out.append(other.substitute(var, expr, const))
            return out
    uppers: list[LinearAtom] = []
    lowers: list[LinearAtom] = []
    rest: list[LinearAtom] = []
    for atom in atoms:
        c = atom.coeff(var)
        if c > 0:
            uppers.append(atom)
        elif c < 0:
            lowers.append(atom)
        else:
            rest.append(atom)
    for low in lowers:
        a = low.coeff(var)  # negative
        for up in uppers:
            b = up.coeff(var)  # positive
            terms: dict[VarRef, Fraction] = {}
            for v, c in low.terms:
                if v != var:
                    terms[v] = terms.get(v, _ZERO) + b * c
            for v, c in up.terms:
                if v != var:
                    terms[v] = terms.get(v, _ZERO) + (-a) * c
            rhs = b * low.rhs + (-a) * up.rhs
            rel = LT if (low.is_strict or up.is_strict) else LE
            combined = LinearAtom.make(terms, rel, rhs)
            if combined.is_ground() and combined.ground_truth():
                continue
            rest.append(combined)
    return rest


def _dominance_prune(atoms: Iterable[LinearAtom]) -> list[LinearAtom]:
    """Cheap pairwise pruning: same hyperplane, keep the tighter side."""
    groups: dict[tuple, dict] = {}
    ground_false = None
    order: list[tuple] = []
    for atom in atoms:
        if atom.is_ground():
            if not atom.ground_truth():
                ground_false = atom
            continue
        key, flipped = atom.directional_key()
        g = groups.get(key)
        if g is None:
            g = {"low": None, "low_strict": False, "up": None, "up_strict": False,
                 "eq": None}
            groups[key] = g
            order.append(key)
        if atom.rel == EQ:
            val = atom.rhs if not flipped else -atom.rhs
            if g["eq"] is not None and g["eq"] != val:
                ground_false = LinearAtom.make({}, LT, _ZERO)
            g["eq"] = val
            continue
        if flipped:  # -e <= b  =>  e >= -b
            val = -atom.rhs
            if g["low"] is None or val > g["low"] or (
                val == g["low"] and atom.is_strict
            ):
                g["low"], g["low_strict"] = val, atom.is_strict
        else:
            val = atom.rhs
            if g["up"] is None or val < g["up"] or (
                val == g["up"] and atom.is_strict
            ):
                g["up"], g["up_strict"] = val, atom.is_strict
    if ground_false is not None:
        return [ground_false]
    out: list[LinearAtom] = []
    for key in order:
        g = groups[key]
        terms = dict(key)
        lo, hi = g["low"], g["up"]
        if g["eq"] is not None:
            eq = g["eq"]
            bad = (
                (lo is not None and (eq < lo or (eq == lo and g["low_strict"])))
                or (hi is not None and (eq > hi or (eq == hi and g["up_strict"])))
            )
            if bad:
                return [LinearAtom.make({}, LT, _ZERO)]
            out.append(LinearAtom.make(terms, EQ, eq))
            continue
        if lo is not None and hi is not None:
            if lo > hi or (lo == hi and (g["low_strict"] or g["up_strict"])):
                return [LinearAtom.make({}, LT, _ZERO)]
            if lo == hi:
                out.append(LinearAtom.make(terms, EQ, lo))
                continue
        if lo is not None:
            rel = LT if g["low_strict"] else LE
            out.append(LinearAtom.make({v: -c for v, c in terms.items()}, rel, -lo))
        if hi is not None:
            rel = LT if g["up_strict"] else LE
            out.append(LinearAtom.make(terms, rel, hi))
    return out


def fm_eliminate(store: ConstraintStore, var: VarRef) -> ConstraintStore:
    """Eliminate one variable; the result has the exact shadow over the rest.

    The variable's interval bounds join the elimination as atoms; other
    variables keep their structural bounds. Combined atoms are strict iff
    either parent was strict.
    """
    atoms = list(store.atoms) + store.bound_atoms([var])
    out = _dominance_prune(_eliminate_var(atoms, var))
    bounds = {v: b for v, b in store.bounds.items() if v != var}
    return ConstraintStore(
        tuple(out),
        bounds,
        store.integer_vars - {var},
        tuple(v for v in store.var_order if v != var),
    )


def _elimination_order(
    atoms: Sequence[LinearAtom], candidates: Sequence[VarRef]
) -> VarRef | None:
    """Next variable to eliminate: fewest combinations first, stable ties."""
    best = None
    best_cost = None
    for pos, var in enumerate(candidates):
        ups = lows = 0
        has_eq = False
        for atom in atoms:
            c = atom.coeff(var)
            if c == 0:
                continue
            if atom.rel == EQ:
                has_eq = True
                break
            if c > 0:
                ups += 1
            else:
                lows += 1
        cost = (-1 if has_eq else ups * lows, pos)
        if best_cost is None or cost < best_cost:
            best, best_cost = var, cost
    return best


def _lp_extremes(
    atoms: Sequence[LinearAtom],
    bounds: Mapping[VarRef, Bounds],
    var: VarRef,
) -> tuple[str, Fraction | None, Fraction | None]:
    """Range of one variable over the closure's LP relaxation."""
    closed = [a.closure() for a in atoms]
    pre = _presolve(closed, bounds, frozenset())
    if pre.unsat:
        return UNSAT, None, None
    if var in pre.pins:
        return SAT, pre.pins[var], pre.pins[var]
    extremes: list[Fraction | None] = []
    for sign in (_ONE, -_ONE):
        lowered = _lower(pre.atoms, pre.bounds, {var: sign}, push=False)
        res = solve_lp(lowered.num_cols, lowered.rows, lowered.objective)
        if res.status == INFEASIBLE:
            return UNSAT, None, None
        if res.status == LP_UNBOUNDED:
            extremes.append(None)
        else:
            extremes.append(sign * (res.value + lowered.offset))
    return SAT, extremes[0], extremes[1]


def _substitute_pins(
    atoms: Sequence[LinearAtom], pins: Assignment
) -> list[LinearAtom] | None:
    """Apply pins; None signals a grounded-out contradiction."""
    out: list[LinearAtom] = []
    for atom in atoms:
        if any(v in pins for v in atom.variables()):
            acc = {v: c for v, c in atom.terms if v not in pins}
            shift = sum((c * pins[v] for v, c in atom.terms if v in pins), _ZERO)
            atom = LinearAtom.make(acc, atom.rel, atom.rhs - shift)
        if atom.is_ground():
            if not atom.ground_truth():
                return None
            continue
        out.append(atom)
    return out


_FALSE = LinearAtom.make({}, LT, _ZERO)


def project(
    store: ConstraintStore,
    keep: Iterable[VarRef],
    node_limit: int = DEFAULT_NODE_LIMIT,
    prune: bool = True,
) -> Projection:
    """Shadow of the store's solution set on the kept variables.

    Integer variables are projected at the LP relaxation; the result is
    flagged accordingly. Variables whose value the store forces are
    probed with two LPs and substituted outright, which keeps the
    Fourier-Motzkin stage away from the combinatorial worst case on
    equality-heavy stores (distance encodings pin almost everything).
    Redundant atoms are dropped: syntactic dominance always, then
    pairwise entailment when ``prune`` is set.
    """
    keep_set = set(keep)
    relaxed = bool(store.integer_vars)
    kept_ints = frozenset(v for v in store.integer_vars if v in keep_set)
    drop = [v for v in store.variables() if v not in keep_set]
    atoms = list(store.atoms)
    bounds = dict(store.bounds)

    pins: Assignment = {}
    for var in drop:
        status, lo, hi = _lp_extremes(atoms, bounds, var)
        if status == UNSAT:
            return Projection((_FALSE,), relaxed, kept_ints)
        if lo is not None and lo == hi:
            pins[var] = lo
    if pins:
        substituted = _substitute_pins(atoms, pins)
        if substituted is None:
            return Projection((_FALSE,), relaxed, kept_ints)
        atoms = substituted
        for var in pins:
            bounds.pop(var, None)

    remaining = [v for v in drop if v not in pins]
    helper = ConstraintStore((), bounds)
    while remaining:
        var = _elimination_order(atoms, remaining)
        remaining.remove(var)
        atoms = _dominance_prune(_eliminate_var(atoms + helper.bound_atoms([var]), var))
        if len(atoms) == 1 and atoms[0].is_ground():
            return Projection((_FALSE,), relaxed, kept_ints)
    atoms += helper.bound_atoms([v for v in store.variables() if v in keep_set])
    atoms = _dominance_prune(atoms)
    if len(atoms) == 1 and atoms[0].is_ground() and not atoms[0].ground_truth():
        return Projection((_FALSE,), relaxed, kept_ints)
    atoms.sort(key=lambda a: a.text())
    if prune and len(atoms) > 1:
        kept: list[LinearAtom] = list(atoms)
        for atom in list(atoms):
            others = [a for a in kept if a is not atom]
            if not others:
                break
            probe = ConstraintStore(tuple(others))
            if entails(probe, atom, node_limit):
                kept = others
        atoms = kept
    return Projection(tuple(atoms), relaxed, kept_ints)

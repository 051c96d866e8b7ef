"""Two-phase primal simplex over exact rationals.

Standard form: minimize c.x subject to rows of ``a.x <= b`` or ``a.x = b``
with every structural variable constrained to x >= 0. All arithmetic is
fractions.Fraction; there are no tolerances anywhere. Bland's rule picks
pivots, which makes the solver deterministic and cycle-free at the cost
of a few extra iterations — the systems solved here are desk-sized.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass
class LPRow:
    coeffs: Mapping[int, Fraction]  # column index -> coefficient
    rel: str  # "<=" or "="
    rhs: Fraction


@dataclass
class LPResult:
    status: str
    value: Fraction | None = None
    assignment: list[Fraction] | None = None


def solve_lp(num_vars: int, rows: Sequence[LPRow], objective: Mapping[int, Fraction]) -> LPResult:
    """Minimize objective over the rows; every variable is nonnegative."""
    m = len(rows)
    # Column layout: structural | one slack/surplus per inequality | artificials.
    slack_of: dict[int, int] = {}
    next_col = num_vars
    for i, row in enumerate(rows):
        if row.rel == "<=":
            slack_of[i] = next_col
            next_col += 1
        elif row.rel != "=":
            raise ValueError(f"rows must be <= or =, got {row.rel!r}")
    art_of: dict[int, int] = {}

    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    for i, row in enumerate(rows):
        flip = row.rhs < 0
        line = [_ZERO] * next_col
        for j, c in row.coeffs.items():
            if j >= num_vars:
                raise ValueError("row references a column beyond num_vars")
            line[j] = -c if flip else c
        rhs = -row.rhs if flip else row.rhs
        if i in slack_of:
            line[slack_of[i]] = -_ONE if flip else _ONE
        line.append(rhs)
        tableau.append(line)
        basis.append(-1)

    # Rows without a usable basic column get an artificial variable.
    for i, row in enumerate(rows):
        line = tableau[i]
        if i in slack_of and line[slack_of[i]] == _ONE:
            basis[i] = slack_of[i]
    art_cols: list[int] = []
    for i in range(m):
        if basis[i] == -1:
            art_of[i] = next_col
            art_cols.append(next_col)
            basis[i] = next_col
            next_col += 1
    total_cols = next_col
    for i in range(m):
        line = tableau[i]
        rhs = line.pop()
        line.extend([_ZERO] * (total_cols - len(line)))
        if i in art_of:
            line[art_of[i]] = _ONE
        line.append(rhs)

    def pivot(row_i: int, col_j: int, cost: list[Fraction]) -> None:
        line = tableau[row_i]
        inv = _ONE / line[col_j]
        if inv != _ONE:
            tableau[row_i] = line = [v * inv for v in line]
        for r in range(m):
            if r == row_i:
                continue
            factor = tableau[r][col_j]
            if factor:
                other = tableau[r]
                tableau[r] = [a - factor * b for a, b in zip(other, line)]
        factor = cost[col_j]
        if factor:
            for k in range(total_cols + 1):
                cost[k] -= factor * line[k]
        basis[row_i] = col_j

    art_set = set()

    def run(cost: list[Fraction], banned: set[int]) -> str:
        while True:
            enter = -1
            for j in range(total_cols):
                if j in banned:
                    continue
                if cost[j] < 0:
                    enter = j
                    break
            if enter == -1:
                return OPTIMAL
            leave = -1
            best: Fraction | None = None
            for i in range(m):
                a = tableau[i][enter]
                if a > 0:
                    ratio = tableau[i][total_cols] / a
                    if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[leave]
                    ):
                        best = ratio
                        leave = i
            if leave == -1:
                return UNBOUNDED
            leaving = basis[leave]
            pivot(leave, enter, cost)
            if leaving in art_set:  # once out, an artificial never returns
                banned.add(leaving)

    def cost_row(coeffs: Mapping[int, Fraction]) -> list[Fraction]:
        cost = [_ZERO] * (total_cols + 1)
        for j, c in coeffs.items():
            cost[j] = c
        # Express over the nonbasic variables: zero out basic columns.
        for i in range(m):
            factor = cost[basis[i]]
            if factor:
                line = tableau[i]
                for k in range(total_cols + 1):
                    cost[k] -= factor * line[k]
        return cost

    banned: set[int] = set()
    if art_cols:
        art_set.update(art_cols)
        phase1 = cost_row({j: _ONE for j in art_cols})
        status = run(phase1, banned)
        assert status == OPTIMAL  # phase 1 is bounded below by zero
        if -phase1[total_cols] > 0:  # cost row stores -(objective value)
            return LPResult(INFEASIBLE)
        # Pivot remaining zero-level artificials out of the basis.
        for i in range(m):
            if basis[i] in art_of.values():
                line = tableau[i]
                for j in range(total_cols):
                    if j not in art_cols and line[j] != 0:
                        pivot(i, j, phase1)
                        break
                # A row with no eligible pivot is redundant; its artificial
                # stays basic at zero, which is harmless once banned.
        banned = set(art_cols)

    phase2 = cost_row(objective)
    status = run(phase2, banned)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    assignment = [_ZERO] * num_vars
    for i in range(m):
        if basis[i] < num_vars:
            assignment[basis[i]] = tableau[i][total_cols]
    value = sum((objective.get(j, _ZERO) * assignment[j] for j in range(num_vars)), _ZERO)
    return LPResult(OPTIMAL, value, assignment)

"""
Exact rational simplex, used as a reference oracle for `solve_lp` on small LPs.

Same two-phase Bland scheme as the floating solver, but every comparison is
exact, so its status and optimal value are ground truth.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from app.lib.lp.simplex import LpStatus


@dataclass(frozen=True)
class ExactLpResult:
    status: LpStatus
    x: Optional[List[Fraction]] = None
    value: Optional[Fraction] = None


def _pivot(tableau: List[List[Fraction]], row: int, col: int):
    pivot = tableau[row][col]
    tableau[row] = [v / pivot for v in tableau[row]]
    for i, other in enumerate(tableau):
        factor = other[col]
        if i != row and factor != 0:
            tableau[i] = [u - factor * v for u, v in zip(other, tableau[row])]


def _run(tableau, basis, cost) -> LpStatus:
    width = len(cost)
    while True:
        entering = None
        for j in range(width):
            if j in basis:
                continue
            reduced = cost[j] - sum(cost[basis[i]] * tableau[i][j] for i in range(len(basis)))
            if reduced > 0:
                entering = j
                break
        if entering is None:
            return LpStatus.OPTIMAL
        best = None
        for i in range(len(basis)):
            coef = tableau[i][entering]
            if coef > 0:
                key = (tableau[i][-1] / coef, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return LpStatus.UNBOUNDED
        row = best[1]
        _pivot(tableau, row, entering)
        basis[row] = entering


def solve_lp_exact(c: Sequence, a_ub: Sequence[Sequence] = (), b_ub: Sequence = (),
                   a_eq: Sequence[Sequence] = (), b_eq: Sequence = ()) -> ExactLpResult:
    c = [Fraction(v) for v in c]
    n = len(c)
    ub = [[Fraction(v) for v in row] for row in a_ub]
    eq = [[Fraction(v) for v in row] for row in a_eq]
    p, q = len(ub), len(eq)
    rhs = [Fraction(v) for v in b_ub] + [Fraction(v) for v in b_eq]

    rows = []
    for i, row in enumerate(ub):
        rows.append(row + [Fraction(int(k == i)) for k in range(p)])
    for row in eq:
        rows.append(row + [Fraction(0)] * p)

    artificial_rows = []
    basis = []
    for i in range(p + q):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
        if i < p and rows[i][n + i] == 1:
            basis.append(n + i)
        else:
            basis.append(None)
            artificial_rows.append(i)

    num_art = len(artificial_rows)
    tableau = []
    for i in range(p + q):
        art = [Fraction(int(i == r)) for r in artificial_rows]
        tableau.append(rows[i] + art + [rhs[i]])
    for k, i in enumerate(artificial_rows):
        basis[i] = n + p + k

    if num_art:
        phase_one = [Fraction(0)] * (n + p) + [Fraction(-1)] * num_art
        _run(tableau, basis, phase_one)
        if sum(tableau[i][-1] for i in range(len(basis)) if basis[i] >= n + p) > 0:
            return ExactLpResult(LpStatus.INFEASIBLE)
        keep = []
        for i in range(len(basis)):
            if basis[i] >= n + p:
                col = next((j for j in range(n + p) if tableau[i][j] != 0), None)
                if col is None:
                    continue
                _pivot(tableau, i, col)
                basis[i] = col
            keep.append(i)
        tableau = [tableau[i][:n + p] + [tableau[i][-1]] for i in keep]
        basis = [basis[i] for i in keep]

    cost = c + [Fraction(0)] * p
    if _run(tableau, basis, cost) is LpStatus.UNBOUNDED:
        return ExactLpResult(LpStatus.UNBOUNDED)
    x = [Fraction(0)] * (n + p)
    for i, j in enumerate(basis):
        x[j] = tableau[i][-1]
    value = sum(ci * xi for ci, xi in zip(c, x[:n]))
    return ExactLpResult(LpStatus.OPTIMAL, x=x[:n], value=value)

"""
Dense two-phase simplex for `maximize c.x  s.t.  A_ub x <= b_ub, A_eq x = b_eq, x >= 0`.

Bland's rule is always on: the decomposition LPs are highly degenerate
(every equilibrium row has a zero right-hand side) and cycle under Dantzig.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from app.core.config import DEFAULT_TOLERANCES, Tolerances
from app.core.errors import InternalSolverError, LpInputError

logger = logging.getLogger(__name__)

MAX_PIVOTS = 200_000


class LpStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass(frozen=True, eq=False)
class LinearProgram:
    c: np.ndarray
    a_ub: np.ndarray
    b_ub: np.ndarray
    a_eq: np.ndarray
    b_eq: np.ndarray

    @classmethod
    def build(cls, c: Sequence[float], a_ub=None, b_ub=None, a_eq=None, b_eq=None) -> "LinearProgram":
        c = np.asarray(c, dtype=float)
        num_vars = c.shape[0] if c.ndim == 1 else -1
        return cls(
            c=c,
            a_ub=_as_matrix(a_ub, num_vars),
            b_ub=np.asarray(b_ub if b_ub is not None else [], dtype=float),
            a_eq=_as_matrix(a_eq, num_vars),
            b_eq=np.asarray(b_eq if b_eq is not None else [], dtype=float),
        )

    @property
    def num_vars(self) -> int:
        return self.c.shape[0]

    def validate(self) -> "LinearProgram":
        if self.c.ndim != 1:
            raise LpInputError("objective must be a vector")
        n = self.num_vars
        for name, a, b in (("A_ub", self.a_ub, self.b_ub), ("A_eq", self.a_eq, self.b_eq)):
            if a.ndim != 2 or a.shape[1] != n:
                raise LpInputError(f"{name} rows must have length {n}, got shape {a.shape}")
            if b.shape != (a.shape[0],):
                raise LpInputError(f"{name} has {a.shape[0]} rows but its right side has {b.size} entries")
            if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
                raise LpInputError(f"{name} has non-finite entries")
        if not np.all(np.isfinite(self.c)):
            raise LpInputError("objective has non-finite entries")
        return self


@dataclass(frozen=True, eq=False)
class LpResult:
    status: LpStatus
    x: Optional[np.ndarray] = None
    value: Optional[float] = None
    dual_ub: Optional[np.ndarray] = None
    dual_eq: Optional[np.ndarray] = None
    max_violation: float = 0.0
    pivots: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


def _as_matrix(a, num_vars: int) -> np.ndarray:
    if a is None:
        return np.zeros((0, max(num_vars, 0)))
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return np.zeros((0, max(num_vars, 0)))
    return a


def _pivot(tableau: np.ndarray, row: int, col: int):
    tableau[row] /= tableau[row, col]
    factors = tableau[:, col].copy()
    factors[row] = 0.0
    tableau -= np.outer(factors, tableau[row])


def _run_simplex(tableau: np.ndarray, basis: list, cost: np.ndarray, eps: float) -> tuple:
    """Maximize cost over the tableau's columns from a feasible basis. Returns (status, pivots)."""
    pivots = 0
    while True:
        reduced = cost - cost[basis] @ tableau[:, :-1]
        reduced[basis] = 0.0
        entering = np.flatnonzero(reduced > eps)
        if entering.size == 0:
            return LpStatus.OPTIMAL, pivots
        col = int(entering[0])
        column = tableau[:, col]
        rows = np.flatnonzero(column > eps)
        if rows.size == 0:
            return LpStatus.UNBOUNDED, pivots
        ratios = tableau[rows, -1] / column[rows]
        tied = rows[ratios <= ratios.min() + eps]
        row = int(min(tied, key=lambda i: basis[i]))
        _pivot(tableau, row, col)
        basis[row] = col
        np.maximum(tableau[:, -1], 0.0, out=tableau[:, -1])
        pivots += 1
        if pivots > MAX_PIVOTS:
            raise InternalSolverError(f"simplex exceeded {MAX_PIVOTS} pivots")


def solve_lp(lp: LinearProgram, tol: Tolerances = DEFAULT_TOLERANCES) -> LpResult:
    """
    Solve a linear program with the two-phase simplex.

    Args:
        lp: Program in maximization form with nonnegative variables
        tol: Pivot and feasibility tolerances

    Returns:
        LpResult with status; on Optimal also x, value and the duals of the
        inequality and equality rows

    Raises:
        LpInputError: shapes or entries are invalid
        InternalSolverError: pivot limit reached, or the optimal basis
            violates the constraints
    """
    lp.validate()
    eps = tol.pivot_eps
    n = lp.num_vars
    p, q = lp.b_ub.size, lp.b_eq.size
    rows = p + q

    a = np.zeros((rows, n + p))
    a[:p, :n] = lp.a_ub
    a[:p, n:] = np.eye(p)
    a[p:, :n] = lp.a_eq
    b = np.concatenate([lp.b_ub, lp.b_eq])
    sign = np.where(b < 0, -1.0, 1.0)
    a *= sign[:, None]
    b = b * sign

    basis = [-1] * rows
    artificial_rows = [i for i in range(p) if sign[i] < 0] + list(range(p, rows))
    for i in range(p):
        if sign[i] > 0:
            basis[i] = n + i
    num_art = len(artificial_rows)
    width = n + p + num_art

    tableau = np.zeros((rows, width + 1))
    tableau[:, :n + p] = a
    tableau[:, -1] = b
    for k, i in enumerate(artificial_rows):
        tableau[i, n + p + k] = 1.0
        basis[i] = n + p + k

    pivots = 0
    kept_rows = np.arange(rows)
    if num_art:
        phase_one = np.zeros(width)
        phase_one[n + p:] = -1.0
        _, pivots = _run_simplex(tableau, basis, phase_one, eps)
        infeasibility = float(-(phase_one[basis] @ tableau[:, -1]))
        if infeasibility > tol.feasibility_eps:
            logger.debug("phase one ended with infeasibility %.3e", infeasibility)
            return LpResult(LpStatus.INFEASIBLE, pivots=pivots)

        redundant = []
        for i in range(rows):
            if basis[i] < n + p:
                continue
            candidates = np.flatnonzero(np.abs(tableau[i, :n + p]) > eps)
            if candidates.size:
                _pivot(tableau, i, int(candidates[0]))
                basis[i] = int(candidates[0])
            else:
                redundant.append(i)
        if redundant:
            logger.debug("dropping %d redundant rows", len(redundant))
            kept_rows = np.delete(kept_rows, redundant)
            tableau = np.delete(tableau, redundant, axis=0)
            basis = [basis[i] for i in kept_rows]
        tableau = np.hstack([tableau[:, :n + p], tableau[:, -1:]])

    cost = np.zeros(n + p)
    cost[:n] = lp.c
    status, phase_two_pivots = _run_simplex(tableau, basis, cost, eps)
    pivots += phase_two_pivots
    if status is LpStatus.UNBOUNDED:
        return LpResult(LpStatus.UNBOUNDED, pivots=pivots)

    values = np.zeros(n + p)
    values[basis] = tableau[:, -1]
    x = np.maximum(values[:n], 0.0)
    value = float(lp.c @ x)

    duals = np.zeros(rows)
    if len(basis):
        basis_matrix = a[kept_rows][:, basis]
        signed, *_ = np.linalg.lstsq(basis_matrix.T, cost[basis], rcond=None)
        duals[kept_rows] = signed * sign[kept_rows]

    violation = 0.0
    if p:
        violation = max(violation, float(np.max(lp.a_ub @ x - lp.b_ub)))
    if q:
        violation = max(violation, float(np.max(np.abs(lp.a_eq @ x - lp.b_eq))))
    if violation > tol.feasibility_eps:
        raise InternalSolverError(f"optimal basis violates constraints by {violation:.3e}")

    logger.debug("lp solved: %d vars, %d rows, %d pivots, value %.9g", n, rows, pivots, value)
    return LpResult(LpStatus.OPTIMAL, x=x, value=value, dual_ub=duals[:p], dual_eq=duals[p:],
                    max_violation=max(violation, 0.0), pivots=pivots)


def check_feasible(a_ub=None, b_ub=None, a_eq=None, b_eq=None,
                   tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """True unless the system A_ub x <= b_ub, A_eq x = b_eq, x >= 0 is infeasible."""
    widths = [np.asarray(a).shape[1] for a in (a_ub, a_eq) if a is not None and np.asarray(a).size]
    if not widths:
        raise LpInputError("feasibility check needs at least one constraint row")
    lp = LinearProgram.build(np.zeros(widths[0]), a_ub, b_ub, a_eq, b_eq)
    return solve_lp(lp, tol).status is not LpStatus.INFEASIBLE

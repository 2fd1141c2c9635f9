"""Dense two-phase simplex for small linear programs with free variables.

Minimizes c.x subject to rows of the form a.x <= b or a.x == b, with every
variable unrestricted in sign.  Internally each variable is split into a
difference of nonnegative parts, slack columns absorb the inequalities, and
phase one drives artificial columns out of the basis.  Bland's smallest
index rule is used for both the entering and the leaving choice, which
rules out cycling.  Problems here have at most a few dozen rows, so a dense
numpy tableau is the whole story.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

LEQ = "<="
EQ = "="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

Constraint = Tuple[Sequence[float], str, float]


@dataclass(frozen=True)
class LPProblem:
    """minimize objective . x  subject to  rows (coefs, relation, bound)."""

    objective: Tuple[float, ...]
    constraints: Tuple[Constraint, ...]
    n_vars: int


@dataclass(frozen=True)
class LPSolution:
    status: str
    values: Tuple[float, ...]
    objective: float


def _validate(problem: LPProblem) -> None:
    n = problem.n_vars
    if n < 1:
        raise ValueError(f"n_vars must be >= 1, got {n}")
    if len(problem.objective) != n:
        raise ValueError("objective length does not match n_vars")
    for coefs, rel, bound in problem.constraints:
        if len(coefs) != n:
            raise ValueError("constraint row length does not match n_vars")
        if rel not in (LEQ, EQ):
            raise ValueError(f"relation must be '<=' or '=', got {rel!r}")
        if not all(math.isfinite(float(c)) for c in coefs) or not math.isfinite(
            float(bound)
        ):
            raise ValueError("constraint coefficients must be finite")
    if not all(math.isfinite(float(c)) for c in problem.objective):
        raise ValueError("objective coefficients must be finite")


def _reduced_cost_row(tableau: np.ndarray, basis: np.ndarray, cost: np.ndarray):
    """Row of reduced costs (last entry = minus the current objective)."""
    z = np.zeros(tableau.shape[1])
    z[:-1] = cost
    for i, j in enumerate(basis):
        if cost[j] != 0.0:
            z -= cost[j] * tableau[i]
    return z


def _pivot(tableau: np.ndarray, z: np.ndarray, basis: np.ndarray, row: int, col: int):
    tableau[row] /= tableau[row, col]
    for i in range(tableau.shape[0]):
        if i != row and tableau[i, col] != 0.0:
            tableau[i] -= tableau[i, col] * tableau[row]
    if z[col] != 0.0:
        z -= z[col] * tableau[row]
    basis[row] = col


def _pivot_loop(
    tableau: np.ndarray,
    z: np.ndarray,
    basis: np.ndarray,
    feas_tol: float,
    opt_tol: float,
    max_iter: int,
) -> str:
    m, width = tableau.shape
    for _ in range(max_iter):
        enter = -1
        for j in range(width - 1):
            if z[j] < -opt_tol:
                enter = j
                break
        if enter < 0:
            return OPTIMAL
        ratios = []
        for i in range(m):
            a = tableau[i, enter]
            if a > feas_tol:
                ratios.append((tableau[i, -1] / a, basis[i], i))
        if not ratios:
            return UNBOUNDED
        smallest = min(r for r, _, _ in ratios)
        # Bland tie-break: smallest basic-variable index among minimal ratios
        leave = min((bv, i) for r, bv, i in ratios if r <= smallest + 1e-12)[1]
        _pivot(tableau, z, basis, leave, enter)
    raise ArithmeticError("simplex iteration limit exceeded")


def lp_solve(
    problem: LPProblem, feas_tol: float = 1e-9, opt_tol: float = 1e-9, max_iter: int = 50000
) -> LPSolution:
    """Solve the program; status is one of optimal/infeasible/unbounded.

    On an optimal outcome every constraint is satisfied within the
    feasibility tolerance and no reduced cost is below minus the optimality
    tolerance.
    """
    _validate(problem)
    n = problem.n_vars
    rows = problem.constraints
    m = len(rows)
    obj = np.array([float(c) for c in problem.objective])

    if m == 0:
        if np.any(obj != 0.0):
            return LPSolution(UNBOUNDED, (), math.nan)
        return LPSolution(OPTIMAL, (0.0,) * n, 0.0)

    n_slack = sum(1 for _, rel, _ in rows if rel == LEQ)
    width = 2 * n + n_slack
    A = np.zeros((m, width))
    b = np.zeros(m)
    basis = np.full(m, -1, dtype=int)
    art_rows = []
    scol = 2 * n
    for i, (coefs, rel, bound) in enumerate(rows):
        a = np.array([float(c) for c in coefs])
        bi = float(bound)
        flipped = bi < 0
        if flipped:
            a = -a
            bi = -bi
        A[i, :n] = a
        A[i, n : 2 * n] = -a
        b[i] = bi
        if rel == LEQ:
            A[i, scol] = -1.0 if flipped else 1.0
            if flipped:
                art_rows.append(i)
            else:
                basis[i] = scol
            scol += 1
        else:
            art_rows.append(i)

    n_art = len(art_rows)
    total = width + n_art
    tableau = np.zeros((m, total + 1))
    tableau[:, :width] = A
    tableau[:, -1] = b
    for k, i in enumerate(art_rows):
        tableau[i, width + k] = 1.0
        basis[i] = width + k

    if n_art:
        cost1 = np.zeros(total)
        cost1[width:] = 1.0
        z = _reduced_cost_row(tableau, basis, cost1)
        status = _pivot_loop(tableau, z, basis, feas_tol, opt_tol, max_iter)
        if status != OPTIMAL:
            raise ArithmeticError("phase one cannot be unbounded")
        if -z[-1] > feas_tol:
            return LPSolution(INFEASIBLE, (), math.nan)
        # drive leftover artificials out of the basis; drop redundant rows
        keep = []
        for i in range(m):
            if basis[i] >= width:
                pivot_col = -1
                for j in range(width):
                    if abs(tableau[i, j]) > feas_tol:
                        pivot_col = j
                        break
                if pivot_col >= 0:
                    _pivot(tableau, z, basis, i, pivot_col)
                    keep.append(i)
                # else: row is redundant, drop it
            else:
                keep.append(i)
        tableau = tableau[keep][:, list(range(width)) + [total]]
        basis = basis[keep]
        m = len(keep)

    cost2 = np.zeros(width)
    cost2[:n] = obj
    cost2[n : 2 * n] = -obj
    z = _reduced_cost_row(tableau, basis, cost2)
    status = _pivot_loop(tableau, z, basis, feas_tol, opt_tol, max_iter)
    if status == UNBOUNDED:
        return LPSolution(UNBOUNDED, (), math.nan)

    full = np.zeros(width)
    for i in range(m):
        full[basis[i]] = tableau[i, -1]
    x = full[:n] - full[n : 2 * n]
    return LPSolution(OPTIMAL, tuple(float(v) for v in x), float(obj @ x))

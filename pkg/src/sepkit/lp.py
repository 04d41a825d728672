"""Exact two-phase simplex over Fractions with Bland's anti-cycling rule."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _pivot(tab, basis, row, col):
    piv = tab[row][col]
    tab[row] = [v / piv for v in tab[row]]
    for r in range(len(tab)):
        if r != row and tab[r][col] != 0:
            f = tab[r][col]
            src = tab[row]
            tab[r] = [a - f * b for a, b in zip(tab[r], src)]
    basis[row] = col


def _simplex(tab, basis, cost, allowed):
    """Minimize cost . x over the tableau (last column = rhs).

    Returns False if unbounded.  Columns outside `allowed` never enter.
    """
    m = len(tab)
    ncols = len(tab[0]) - 1
    while True:
        # reduced costs c_j - c_B B^-1 A_j
        entering = None
        for j in range(ncols):
            if j not in allowed or j in basis:
                continue
            red = cost[j] - sum(cost[basis[i]] * tab[i][j] for i in range(m))
            if red < 0:
                entering = j
                break
        if entering is None:
            return True
        best = None
        for i in range(m):
            a = tab[i][entering]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(tab, basis, best[1], entering)


def lp_feasible_min(objective: Sequence, A_ub=(), b_ub=(), A_eq=(), b_eq=(), free=()) -> LPResult:
    """Minimize objective . x subject to A_ub x <= b_ub and A_eq x = b_eq.

    Variables are nonnegative except those whose indices are in `free`.
    All data are converted to Fractions; the result is exact.
    """
    c = [Fraction(v) for v in objective]
    n = len(c)
    free = sorted(set(free))
    rows = [([Fraction(v) for v in a], Fraction(b), True) for a, b in zip(A_ub, b_ub)]
    rows += [([Fraction(v) for v in a], Fraction(b), False) for a, b in zip(A_eq, b_eq)]
    for a, _, _ in rows:
        if len(a) != n:
            raise ValueError("constraint width does not match the objective")

    if not rows:
        if any(v < 0 or (v != 0 and j in free) for j, v in enumerate(c)):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, Fraction(0), (Fraction(0),) * n)

    # columns: original vars, negative parts of free vars, slacks, artificials
    neg_col = {j: n + t for t, j in enumerate(free)}
    n_struct = n + len(free)
    n_slack = sum(1 for _, _, ub in rows if ub)
    m = len(rows)
    width = n_struct + n_slack + m
    tab, basis = [], []
    slack = n_struct
    for i, (a, b, ub) in enumerate(rows):
        row = a + [-a[j] for j in free] + [Fraction(0)] * (n_slack + m) + [b]
        if ub:
            row[slack] = Fraction(1)
            slack += 1
        if b < 0:
            row = [-v for v in row]
        row[n_struct + n_slack + i] = Fraction(1)
        tab.append(row)
        basis.append(n_struct + n_slack + i)

    all_cols = set(range(width))
    art = set(range(n_struct + n_slack, width))
    phase1 = [Fraction(0)] * (n_struct + n_slack) + [Fraction(1)] * m
    _simplex(tab, basis, phase1, all_cols)
    if any(tab[i][-1] != 0 for i in range(m) if basis[i] in art):
        return LPResult(INFEASIBLE)

    # drive zero-level artificials out of the basis, dropping redundant rows
    keep = []
    for i in range(m):
        if basis[i] in art:
            col = next((j for j in range(n_struct + n_slack) if tab[i][j] != 0), None)
            if col is None:
                continue
            _pivot(tab, basis, i, col)
        keep.append(i)
    tab = [tab[i] for i in keep]
    basis = [basis[i] for i in keep]

    cost = c + [-c[j] for j in free] + [Fraction(0)] * (n_slack + m)
    if not _simplex(tab, basis, cost, all_cols - art):
        return LPResult(UNBOUNDED)
    sol = [Fraction(0)] * width
    for i, j in enumerate(basis):
        sol[j] = tab[i][-1]
    x = tuple(sol[j] - (sol[neg_col[j]] if j in neg_col else 0) for j in range(n))
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, value, x)

"""Exact rational linear programming (two-phase primal simplex, Bland's rule).

max c·x subject to A x <= b with x free: internally x = u - w with
u, w >= 0 plus one slack per row.  All arithmetic over Fraction, so
results are exact; Bland's rule guarantees termination.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
OPTIMAL = "optimal"


def _pivot(T: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    piv = T[row][col]
    inv = Fraction(1) / piv
    T[row] = [x * inv for x in T[row]]
    for i in range(len(T)):
        if i != row and T[i][col] != 0:
            f = T[i][col]
            T[i] = [a - f * b for a, b in zip(T[i], T[row])]
    basis[row] = col


def _simplex_loop(T: list[list[Fraction]], basis: list[int], enter_cols: int,
                  rhs_col: int) -> str:
    """Maximize the objective in the last tableau row; Bland's rule.

    Only columns below enter_cols may enter; the right-hand side lives at
    rhs_col (artificial columns may sit in between).
    """
    m = len(T) - 1
    while True:
        obj = T[m]
        col = next((j for j in range(enter_cols) if obj[j] < 0), None)
        if col is None:
            return OPTIMAL
        row = None
        best = None
        for i in range(m):
            if T[i][col] > 0:
                ratio = T[i][rhs_col] / T[i][col]
                if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[row]):
                    best, row = ratio, i
        if row is None:
            return UNBOUNDED
        _pivot(T, basis, row, col)


def lp_max(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction],
           c: Sequence[Fraction]):
    """(status, value, point) for max c·x s.t. Ax <= b over free rationals."""
    m = len(A)
    n = len(c)
    # columns: u_1..u_n, w_1..w_n, slacks s_1..s_m, artificials (phase 1)
    base_cols = 2 * n + m
    rows = []
    art_cols = []
    for i in range(m):
        row = [Fraction(x) for x in A[i]] + [Fraction(-x) for x in A[i]]
        row += [Fraction(int(j == i)) for j in range(m)]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        rows.append((row, rhs))
    # mark rows that need an artificial: slack coefficient became -1
    for i, (row, rhs) in enumerate(rows):
        if row[2 * n + i] == -1:
            art_cols.append(i)
    ncols = base_cols + len(art_cols)
    T: list[list[Fraction]] = []
    basis: list[int] = []
    art_index = {}
    for k, i in enumerate(art_cols):
        art_index[i] = base_cols + k
    for i, (row, rhs) in enumerate(rows):
        full = row + [Fraction(0)] * len(art_cols) + [rhs]
        if i in art_index:
            full[art_index[i]] = Fraction(1)
            basis.append(art_index[i])
        else:
            basis.append(2 * n + i)
        T.append(full)

    if art_cols:
        # phase 1: maximize -(sum of artificials); objective row in z-row
        # convention (entry -c_j), then eliminate the basic artificials
        objrow = [Fraction(0)] * (ncols + 1)
        for k in art_index.values():
            objrow[k] = Fraction(1)
        for r in range(m):
            if basis[r] >= base_cols:
                f = objrow[basis[r]]
                objrow = [a - f * bb for a, bb in zip(objrow, T[r])]
        T.append(objrow)
        status = _simplex_loop(T, basis, ncols, ncols)
        assert status == OPTIMAL  # phase 1 is bounded below by 0
        if T[m][ncols] != 0:
            return INFEASIBLE, None, None
        # drive leftover artificials out of the basis when possible
        for r in range(m):
            if basis[r] >= base_cols:
                col = next((j for j in range(base_cols) if T[r][j] != 0), None)
                if col is not None:
                    _pivot(T, basis, r, col)
        T.pop()

    # phase 2
    obj = [Fraction(0)] * (ncols + 1)
    for j in range(n):
        obj[j] = -Fraction(c[j])
        obj[n + j] = Fraction(c[j])
    # express over the current basis
    for r in range(m):
        j = basis[r]
        if basis[r] >= base_cols:
            continue
        if obj[j] != 0:
            f = obj[j]
            obj = [a - f * bb for a, bb in zip(obj, T[r])]
    # freeze any artificial still basic (degenerate zero rows)
    for k in range(base_cols, ncols):
        obj[k] = Fraction(0)
    T.append(obj)
    status = _simplex_loop(T, basis, base_cols, ncols)
    if status == UNBOUNDED:
        return UNBOUNDED, None, None
    m_row = len(T) - 1
    value = T[m_row][ncols]
    point = [Fraction(0)] * n
    for r in range(m):
        j = basis[r]
        if j < n:
            point[j] += T[r][ncols]
        elif j < 2 * n:
            point[j - n] -= T[r][ncols]
    return OPTIMAL, value, tuple(point)


def lp_feasible_point(A, b) -> Optional[tuple[Fraction, ...]]:
    n = len(A[0]) if A else 0
    status, _v, pt = lp_max(A, b, [Fraction(0)] * n)
    return pt if status == OPTIMAL else None

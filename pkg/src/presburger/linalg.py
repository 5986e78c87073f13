"""Small exact linear algebra over Fraction / int.

Vectors are tuples, matrices are tuples of row tuples.  Everything here is
dimension-capped by the callers, so O(n^3) Gaussian elimination with exact
rationals is fine.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

Vec = tuple
Mat = tuple


def frac_mat(rows) -> Mat:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def frac_vec(v) -> Vec:
    return tuple(Fraction(x) for x in v)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def mat_vec(A: Sequence, x: Sequence) -> Vec:
    return tuple(dot(row, x) for row in A)


def mat_mul(A: Sequence, B: Sequence) -> Mat:
    cols = list(zip(*B))
    return tuple(tuple(dot(row, c) for c in cols) for row in A)


def transpose(A: Sequence) -> Mat:
    return tuple(zip(*A))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * x for x in v)


def _echelon(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place row echelon form; returns (rows, pivot column indices)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(A: Sequence) -> int:
    rows = [[Fraction(x) for x in row] for row in A]
    _, pivots = _echelon(rows)
    return len(pivots)


def solve(A: Sequence, b: Sequence) -> Optional[Vec]:
    """Unique solution of a square system, or None if singular."""
    n = len(A)
    if n == 0:
        return ()
    rows = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(A, b)]
    rows, pivots = _echelon(rows)
    if pivots != list(range(n)):
        return None
    return tuple(rows[i][n] for i in range(n))


def solve_bareiss(A: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[Vec]:
    """Unique solution of an integer square system, fraction-free forward pass.

    Much faster than Fraction elimination on the hot vertex-enumeration path.
    """
    n = len(A)
    if n == 0:
        return ()
    M = [list(map(int, row)) + [int(bi)] for row, bi in zip(A, b)]
    prev = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return None
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
        pk = M[k][k]
        for i in range(k + 1, n):
            mik = M[i][k]
            row_i, row_k = M[i], M[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * pk - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pk
    x: list[Fraction] = [Fraction(0)] * n
    for k in range(n - 1, -1, -1):
        acc = Fraction(M[k][n])
        row = M[k]
        for j in range(k + 1, n):
            if row[j]:
                acc -= row[j] * x[j]
        x[k] = acc / row[k]
    return tuple(x)


def det(A: Sequence) -> Fraction:
    n = len(A)
    rows = [[Fraction(x) for x in row] for row in A]
    d = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            d = -d
        d *= rows[c][c]
        inv = Fraction(1) / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c] != 0:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return d


def inverse(A: Sequence) -> Optional[Mat]:
    n = len(A)
    rows = [
        [Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(A)
    ]
    rows, pivots = _echelon(rows)
    if pivots != list(range(n)):
        return None
    return tuple(tuple(row[n:]) for row in rows)


def nullspace(A: Sequence, ncols: Optional[int] = None) -> list[Vec]:
    """Basis of {x : Ax = 0}."""
    if not A:
        return [tuple(Fraction(int(i == j)) for j in range(ncols or 0)) for i in range(ncols or 0)]
    n = ncols if ncols is not None else len(A[0])
    rows = [[Fraction(x) for x in row] for row in A]
    rows, pivots = _echelon(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(tuple(v))
    return basis


def primitive(v: Sequence) -> tuple[int, ...]:
    """Smallest positive integer multiple of a rational vector, as ints."""
    fracs = [Fraction(x) for x in v]
    if all(x == 0 for x in fracs):
        return tuple(0 for _ in fracs)
    denom = 1
    for x in fracs:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in fracs]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    return tuple(x // g for x in ints)


def lcm_list(xs) -> int:
    out = 1
    for x in xs:
        x = abs(int(x))
        if x:
            out = out * x // gcd(out, x)
    return out


# -- integer linear systems ---------------------------------------------------

def _column_hnf(A: list[list[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Column-style Hermite reduction: returns (H, U) with A·U = H, U unimodular."""
    m = len(A)
    n = len(A[0]) if m else 0
    H = [row[:] for row in A]
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_cols(j, k):
        for M in (H, U):
            for row in M:
                row[j], row[k] = row[k], row[j]

    def sub_col(j, k, q):
        # col_j -= q * col_k
        for M in (H, U):
            for row in M:
                row[j] -= q * row[k]

    def neg_col(j):
        for M in (H, U):
            for row in M:
                row[j] = -row[j]

    r = 0
    for i in range(m):
        while True:
            nz = [j for j in range(r, n) if H[i][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(H[i][j]))
            if j0 != r:
                swap_cols(r, j0)
            done = True
            for j in range(r + 1, n):
                if H[i][j] != 0:
                    sub_col(j, r, H[i][j] // H[i][r])
                    if H[i][j] != 0:
                        done = False
            if done:
                if H[i][r] < 0:
                    neg_col(r)
                r += 1
                break
        if r == n:
            break
    return H, U


def solve_integer(A: Sequence[Sequence[int]], b: Sequence[int]):
    """All integer solutions of Ax = b: returns (x0, basis) or None.

    x0 is one solution, basis spans the integer kernel lattice.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return tuple([0] * n), [tuple(int(i == j) for j in range(n)) for i in range(n)]
    H, U = _column_hnf([[int(x) for x in row] for row in A])
    # Solve H y = b by forward substitution over the staircase columns.
    y = [0] * n
    col = 0
    for i in range(m):
        lead = H[i][col] if col < n else 0
        acc = int(b[i]) - sum(H[i][j] * y[j] for j in range(col))
        if col < n and H[i][col] != 0:
            if acc % H[i][col] != 0:
                return None
            y[col] = acc // H[i][col]
            col += 1
        else:
            if acc != 0:
                return None
    x0 = tuple(sum(U[i][j] * y[j] for j in range(n)) for i in range(n))
    kernel = []
    for j in range(col, n):
        kernel.append(tuple(U[i][j] for i in range(n)))
    return x0, kernel


# -- lattice reduction --------------------------------------------------------

def lll(basis: Sequence[Sequence[Fraction]], delta: Fraction = Fraction(3, 4)) -> list[Vec]:
    """Exact LLL over the rationals (used at tiny fixed dimensions)."""
    basis = [list(Fraction(x) for x in v) for v in basis]
    n = len(basis)
    if n == 0:
        return []

    def gram_schmidt():
        ortho, mu = [], [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            v = list(basis[i])
            for j in range(i):
                denom = dot(ortho[j], ortho[j])
                mu[i][j] = dot(basis[i], ortho[j]) / denom if denom else Fraction(0)
                v = [a - mu[i][j] * b for a, b in zip(v, ortho[j])]
            ortho.append(v)
        return ortho, mu

    ortho, mu = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = mu[k][j]
            # exact round-half-up
            r = (2 * q.numerator + q.denominator) // (2 * q.denominator)
            if r:
                basis[k] = [a - r * b for a, b in zip(basis[k], basis[j])]
                ortho, mu = gram_schmidt()
        lhs = dot(ortho[k], ortho[k])
        rhs = (delta - mu[k][k - 1] ** 2) * dot(ortho[k - 1], ortho[k - 1])
        if lhs >= rhs:
            k += 1
        else:
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            ortho, mu = gram_schmidt()
            k = max(k - 1, 1)
    return [tuple(v) for v in basis]

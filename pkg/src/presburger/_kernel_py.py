"""Pure-Python evaluation kernels.

Same flat interface as the compiled extension (_kernel.pyx); selected at
import time by presburger.kernel.  Arbitrary-precision, so this backend
also serves as the overflow-safe fallback for huge coefficients.

Flat encodings
--------------
blocks: parallel lists (start, dim, quant) with quant 0 = exists,
1 = forall.  Coordinates of block j occupy vals[start : start+dim];
coordinate i ranges over [los[i], his[i]] (lo > hi is an empty domain).

atoms: CSR arrays (ptr, vars, coefs) plus rhs and rel (0: <=, 1: <, 2: ==).

code: flat [op, arg, ...] postfix with op 0 = push atom #arg, 1 = AND of
top arg entries, 2 = OR, 3 = NOT, 4 = push constant arg.
"""

from __future__ import annotations

IMPL = "python"


def _eval_matrix(code, aptr, avars, acoefs, arhs, arel, vals) -> bool:
    stack = []
    i = 0
    n = len(code)
    while i < n:
        op, arg = code[i], code[i + 1]
        i += 2
        if op == 0:
            s = 0
            for k in range(aptr[arg], aptr[arg + 1]):
                s += acoefs[k] * vals[avars[k]]
            r = arel[arg]
            if r == 0:
                stack.append(s <= arhs[arg])
            elif r == 1:
                stack.append(s < arhs[arg])
            else:
                stack.append(s == arhs[arg])
        elif op == 1:
            v = True
            for _ in range(arg):
                v = stack.pop() and v
            stack.append(v)
        elif op == 2:
            v = False
            for _ in range(arg):
                v = stack.pop() or v
            stack.append(v)
        elif op == 3:
            stack.append(not stack.pop())
        else:
            stack.append(bool(arg))
    return stack[-1]


def _eval_blocks(b, nblocks, starts, dims, quants, los, his,
                 code, aptr, avars, acoefs, arhs, arel, vals) -> bool:
    if b == nblocks:
        return _eval_matrix(code, aptr, avars, acoefs, arhs, arel, vals)
    start, dim = starts[b], dims[b]
    exists = quants[b] == 0
    if any(los[start + j] > his[start + j] for j in range(dim)):
        return not exists
    for j in range(dim):
        vals[start + j] = los[start + j]
    while True:
        r = _eval_blocks(b + 1, nblocks, starts, dims, quants, los, his,
                         code, aptr, avars, acoefs, arhs, arel, vals)
        if r == exists:
            return exists
        j = 0
        while j < dim:
            vals[start + j] += 1
            if vals[start + j] <= his[start + j]:
                break
            vals[start + j] = los[start + j]
            j += 1
        if j == dim:
            return not exists


def decide(nvars, starts, dims, quants, los, his,
           code, aptr, avars, acoefs, arhs, arel) -> bool:
    vals = [0] * nvars
    return _eval_blocks(0, len(starts), starts, dims, quants, los, his,
                        code, aptr, avars, acoefs, arhs, arel, vals)


def free_scan(free_dim, nvars, starts, dims, quants, los, his,
              code, aptr, avars, acoefs, arhs, arel) -> list[tuple[int, ...]]:
    """Satisfying assignments of the free coordinates vals[0:free_dim].

    The free box is los[0:free_dim] .. his[0:free_dim]; results are in
    lexicographic order.
    """
    vals = [0] * nvars
    out = []
    if any(los[j] > his[j] for j in range(free_dim)):
        return out
    point = [los[j] for j in range(free_dim)]
    nblocks = len(starts)
    while True:
        for j in range(free_dim):
            vals[j] = point[j]
        if _eval_blocks(0, nblocks, starts, dims, quants, los, his,
                        code, aptr, avars, acoefs, arhs, arel, vals):
            out.append(tuple(point))
        j = free_dim - 1
        while j >= 0:
            point[j] += 1
            if point[j] <= his[j]:
                break
            point[j] = los[j]
            j -= 1
        if j < 0:
            return out


# -- integer lattice scans over A x <= b with box bounds ----------------------

def lattice_scan(A, b, lows, highs, limit, collect):
    """DFS with interval propagation over {x in box : Ax <= b}.

    Returns (points, hit_limit): points in lexicographic order; when collect
    is false the scan stops at the first point.
    """
    m = len(A)
    n = len(lows)
    if any(lows[j] > highs[j] for j in range(n)):
        return [], False
    if n == 0:
        ok = all(0 <= b[i] for i in range(m))
        return ([()] if ok else []), False
    # fmins[i][j] = min over the box of sum_{l>j} A[i][l]*x_l
    fmins = [[0] * n for _ in range(m)]
    for i in range(m):
        acc = 0
        for j in range(n - 1, -1, -1):
            fmins[i][j] = acc
            c = A[i][j]
            acc += c * lows[j] if c >= 0 else c * highs[j]
    partial = [0] * m
    x = [0] * n
    out = []
    hit = [False]

    def rec(j):
        if j == n:
            out.append(tuple(x))
            return not collect  # stop signal on first point
        lo, hi = lows[j], highs[j]
        for i in range(m):
            c = A[i][j]
            room = b[i] - partial[i] - fmins[i][j]
            if c > 0:
                q = room // c
                if q < hi:
                    hi = q
            elif c < 0:
                # ceil(room / c) with c < 0 equals -floor(room / -c)
                q = -(room // -c)
                if q > lo:
                    lo = q
            elif room < 0:
                return False
        v = lo
        while v <= hi:
            x[j] = v
            for i in range(m):
                partial[i] += A[i][j] * v
            stop = rec(j + 1)
            for i in range(m):
                partial[i] -= A[i][j] * v
            if stop:
                return True
            if collect and len(out) >= limit:
                hit[0] = True
                return True
            v += 1
        return False

    rec(0)
    return out, hit[0]


def lattice_feasible(A, b, lows, highs):
    pts, _ = lattice_scan(A, b, lows, highs, 1, False)
    return pts[0] if pts else None


def feasible_over_range(A, alpha, nu, lows, highs, zlo, zhi):
    """Witness (or None) for {x in box : Ax <= alpha z + nu} per integer z."""
    out = []
    m = len(A)
    for z in range(zlo, zhi + 1):
        b = [alpha[i] * z + nu[i] for i in range(m)]
        out.append(lattice_feasible(A, b, lows, highs))
    return out

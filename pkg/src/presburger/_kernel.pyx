# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels (int64).

Mirrors presburger._kernel_py; the dispatcher routes here only when the
caller-computed worst-case partial sums fit in int64.
"""

from libc.stdlib cimport malloc, free
from libc.stdint cimport int64_t

IMPL = "cython"


cdef int64_t* _alloc(list xs) except NULL:
    cdef Py_ssize_t n = len(xs)
    cdef int64_t* p = <int64_t*> malloc((n if n else 1) * sizeof(int64_t))
    if p == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        p[i] = xs[i]
    return p


cdef struct Prog:
    Py_ssize_t nblocks
    int64_t* starts
    int64_t* dims
    int64_t* quants
    int64_t* los
    int64_t* his
    Py_ssize_t ncode
    int64_t* code
    int64_t* aptr
    int64_t* avars
    int64_t* acoefs
    int64_t* arhs
    int64_t* arel
    int64_t* vals
    int64_t* stack


cdef bint _eval_matrix(Prog* p) noexcept:
    cdef Py_ssize_t i = 0, sp = 0
    cdef int64_t op, arg, s, k, r, j
    cdef bint v
    while i < p.ncode:
        op = p.code[i]
        arg = p.code[i + 1]
        i += 2
        if op == 0:
            s = 0
            for k in range(p.aptr[arg], p.aptr[arg + 1]):
                s += p.acoefs[k] * p.vals[p.avars[k]]
            r = p.arel[arg]
            if r == 0:
                p.stack[sp] = s <= p.arhs[arg]
            elif r == 1:
                p.stack[sp] = s < p.arhs[arg]
            else:
                p.stack[sp] = s == p.arhs[arg]
            sp += 1
        elif op == 1:
            v = True
            for j in range(arg):
                sp -= 1
                if not p.stack[sp]:
                    v = False
            p.stack[sp] = v
            sp += 1
        elif op == 2:
            v = False
            for j in range(arg):
                sp -= 1
                if p.stack[sp]:
                    v = True
            p.stack[sp] = v
            sp += 1
        elif op == 3:
            p.stack[sp - 1] = not p.stack[sp - 1]
        else:
            p.stack[sp] = arg != 0
            sp += 1
    return p.stack[sp - 1] != 0


cdef bint _eval_blocks(Prog* p, Py_ssize_t b) noexcept:
    if b == p.nblocks:
        return _eval_matrix(p)
    cdef int64_t start = p.starts[b], dim = p.dims[b]
    cdef bint exists = p.quants[b] == 0
    cdef int64_t j
    cdef bint r
    for j in range(dim):
        if p.los[start + j] > p.his[start + j]:
            return not exists
        p.vals[start + j] = p.los[start + j]
    while True:
        r = _eval_blocks(p, b + 1)
        if r == exists:
            return exists
        j = 0
        while j < dim:
            p.vals[start + j] += 1
            if p.vals[start + j] <= p.his[start + j]:
                break
            p.vals[start + j] = p.los[start + j]
            j += 1
        if j == dim:
            return not exists


cdef Prog* _build(Py_ssize_t nvars, list starts, list dims, list quants,
                  list los, list his, list code, list aptr, list avars,
                  list acoefs, list arhs, list arel) except NULL:
    cdef Prog* p = <Prog*> malloc(sizeof(Prog))
    if p == NULL:
        raise MemoryError()
    p.nblocks = len(starts)
    p.ncode = len(code)
    p.starts = _alloc(starts)
    p.dims = _alloc(dims)
    p.quants = _alloc(quants)
    p.los = _alloc(los)
    p.his = _alloc(his)
    p.code = _alloc(code)
    p.aptr = _alloc(aptr)
    p.avars = _alloc(avars)
    p.acoefs = _alloc(acoefs)
    p.arhs = _alloc(arhs)
    p.arel = _alloc(arel)
    p.vals = <int64_t*> malloc((nvars if nvars else 1) * sizeof(int64_t))
    p.stack = <int64_t*> malloc((p.ncode + 1) * sizeof(int64_t))
    if p.vals == NULL or p.stack == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(nvars):
        p.vals[i] = 0
    return p


cdef void _release(Prog* p) noexcept:
    free(p.starts); free(p.dims); free(p.los); free(p.his); free(p.quants)
    free(p.code); free(p.aptr); free(p.avars); free(p.acoefs)
    free(p.arhs); free(p.arel); free(p.vals); free(p.stack)
    free(p)


def decide(nvars, starts, dims, quants, los, his,
           code, aptr, avars, acoefs, arhs, arel):
    cdef Prog* p = _build(nvars, starts, dims, quants, los, his,
                          code, aptr, avars, acoefs, arhs, arel)
    try:
        return bool(_eval_blocks(p, 0))
    finally:
        _release(p)


def free_scan(free_dim, nvars, starts, dims, quants, los, his,
              code, aptr, avars, acoefs, arhs, arel):
    cdef Prog* p = _build(nvars, starts, dims, quants, los, his,
                          code, aptr, avars, acoefs, arhs, arel)
    cdef list out = []
    cdef Py_ssize_t fd = free_dim
    cdef Py_ssize_t j
    try:
        for j in range(fd):
            if p.los[j] > p.his[j]:
                return out
            p.vals[j] = p.los[j]
        while True:
            if _eval_blocks(p, 0):
                out.append(tuple([p.vals[j] for j in range(fd)]))
            j = fd - 1
            while j >= 0:
                p.vals[j] += 1
                if p.vals[j] <= p.his[j]:
                    break
                p.vals[j] = p.los[j]
                j -= 1
            if j < 0:
                return out
    finally:
        _release(p)


# -- integer lattice scans -----------------------------------------------------

cdef struct Scan:
    Py_ssize_t m
    Py_ssize_t n
    int64_t* A        # row-major m*n
    int64_t* b
    int64_t* lows
    int64_t* highs
    int64_t* fmins    # m*n, min over box of sum_{l>j} A[i][l] x_l
    int64_t* partial
    int64_t* x
    Py_ssize_t limit
    bint collect
    bint hit


cdef bint _scan_rec(Scan* s, list out, Py_ssize_t j) except? -1:
    cdef Py_ssize_t i
    cdef bint r
    cdef int64_t lo, hi, c, room, q, v
    if j == s.n:
        out.append(tuple([s.x[i] for i in range(s.n)]))
        return not s.collect
    lo = s.lows[j]
    hi = s.highs[j]
    for i in range(s.m):
        c = s.A[i * s.n + j]
        room = s.b[i] - s.partial[i] - s.fmins[i * s.n + j]
        if c > 0:
            q = _floordiv(room, c)
            if q < hi:
                hi = q
        elif c < 0:
            q = -_floordiv(room, -c)
            if q > lo:
                lo = q
        elif room < 0:
            return False
    v = lo
    while v <= hi:
        s.x[j] = v
        for i in range(s.m):
            s.partial[i] += s.A[i * s.n + j] * v
        r = _scan_rec(s, out, j + 1)
        for i in range(s.m):
            s.partial[i] -= s.A[i * s.n + j] * v
        if r:
            return True
        if s.collect and len(out) >= s.limit:
            s.hit = True
            return True
        v += 1
    return False


cdef inline int64_t _floordiv(int64_t a, int64_t b) noexcept:
    # b > 0; with cdivision, // truncates toward zero
    cdef int64_t q = a // b
    if a % b != 0 and a < 0:
        q -= 1
    return q


def lattice_scan(A, b, lows, highs, limit, collect):
    cdef Py_ssize_t m = len(A)
    cdef Py_ssize_t n = len(lows)
    cdef Py_ssize_t i, j
    if any(lows[j] > highs[j] for j in range(n)):
        return [], False
    if n == 0:
        ok = all(bi >= 0 for bi in b)
        return ([()] if ok else []), False
    cdef Scan s
    cdef list out = []
    s.m = m
    s.n = n
    s.limit = limit
    s.collect = bool(collect)
    s.hit = False
    s.A = <int64_t*> malloc((m * n if m else 1) * sizeof(int64_t))
    s.b = <int64_t*> malloc((m if m else 1) * sizeof(int64_t))
    s.fmins = <int64_t*> malloc((m * n if m else 1) * sizeof(int64_t))
    s.partial = <int64_t*> malloc((m if m else 1) * sizeof(int64_t))
    s.lows = _alloc(list(lows))
    s.highs = _alloc(list(highs))
    s.x = <int64_t*> malloc(n * sizeof(int64_t))
    if s.A == NULL or s.b == NULL or s.fmins == NULL or s.partial == NULL or s.x == NULL:
        raise MemoryError()
    cdef int64_t acc, c
    try:
        for i in range(m):
            s.b[i] = b[i]
            s.partial[i] = 0
            row = A[i]
            for j in range(n):
                s.A[i * n + j] = row[j]
        for i in range(m):
            acc = 0
            for j in range(n - 1, -1, -1):
                s.fmins[i * n + j] = acc
                c = s.A[i * n + j]
                if c >= 0:
                    acc += c * s.lows[j]
                else:
                    acc += c * s.highs[j]
        _scan_rec(&s, out, 0)
        return out, s.hit
    finally:
        free(s.A); free(s.b); free(s.fmins); free(s.partial)
        free(s.lows); free(s.highs); free(s.x)


def lattice_feasible(A, b, lows, highs):
    pts, _ = lattice_scan(A, b, lows, highs, 1, False)
    return pts[0] if pts else None


def feasible_over_range(A, alpha, nu, lows, highs, zlo, zhi):
    cdef list out = []
    cdef int64_t z
    cdef Py_ssize_t m = len(A)
    for z in range(zlo, zhi + 1):
        bz = [alpha[i] * z + nu[i] for i in range(m)]
        out.append(lattice_feasible(A, bz, lows, highs))
    return out

"""Kernel selection and formula compilation for the hot inner loops.

The compiled extension (presburger._kernel, Cython) and the pure-Python
twin (presburger._kernel_py) expose the same flat-array interface.  The
compiled kernel works in int64, so callers are routed back to the Python
twin whenever a worst-case bound on any partial sum would not fit.

Set PRESBURGER_PURE_PYTHON=1 to force the Python backend.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from . import _kernel_py
from .formula.ast import (
    And,
    Atom,
    BoolExpr,
    Const,
    Formula,
    Not,
    Or,
    UnboundedError,
)

_compiled = None
if os.environ.get("PRESBURGER_PURE_PYTHON") != "1":
    try:
        from . import _kernel as _compiled  # type: ignore
    except ImportError:
        _compiled = None

INT64_SAFE = 2**62


def impl_name() -> str:
    return "cython" if _compiled is not None else "python"


def backend(max_abs: int):
    """Pick the kernel able to evaluate sums bounded by max_abs."""
    if _compiled is not None and max_abs < INT64_SAFE:
        return _compiled
    return _kernel_py


@dataclass
class Program:
    """A formula flattened for the kernels; bounds are per coordinate."""

    nvars: int
    starts: list[int]
    dims: list[int]
    quants: list[int]  # 0 exists, 1 forall
    los: list[int]
    his: list[int]
    code: list[int]
    aptr: list[int]
    avars: list[int]
    acoefs: list[int]
    arhs: list[int]
    arel: list[int]
    free_dim: int  # 0 when compiling a sentence
    max_abs: int
    search_space: int


def _top_conjuncts(e: BoolExpr):
    if isinstance(e, And):
        for c in e.children:
            yield from _top_conjuncts(c)
    else:
        yield e


def compile_formula(f: Formula) -> Program:
    """Flatten blocks, atoms and the Boolean tree into kernel arrays.

    Existential and free coordinates are tightened by single-variable
    atoms conjoined at the top of the matrix (values outside them cannot
    satisfy the matrix, so skipping them is sound; universal blocks are
    never tightened).
    """
    if not f.all_bounded():
        raise UnboundedError("all blocks must be bounded")
    layout: dict = {}
    nvars = 0
    free_dim = 0
    los: list[int] = []
    his: list[int] = []
    tightenable: list[bool] = []
    if f.free is not None:
        free_dim = f.free.dim
        lo, hi = f.free.bound
        for j in range(f.free.dim):
            layout[(f.free.name, j)] = nvars
            los.append(lo)
            his.append(hi)
            tightenable.append(True)
            nvars += 1
    starts, dims, quants = [], [], []
    for b in f.prefix:
        starts.append(nvars)
        dims.append(b.dim)
        quants.append(0 if b.quantifier == "E" else 1)
        lo, hi = b.bound
        for j in range(b.dim):
            layout[(b.name, j)] = nvars
            los.append(lo)
            his.append(hi)
            tightenable.append(b.quantifier == "E")
            nvars += 1

    for e in _top_conjuncts(f.matrix):
        if not isinstance(e, Atom) or len(e.atom.coeffs) != 1:
            continue
        (ref, c), = e.atom.coeffs
        if ref not in layout or not tightenable[layout[ref]]:
            continue
        i = layout[ref]
        rhs = e.atom.rhs - (1 if e.atom.rel == "<" else 0)
        if e.atom.rel in ("<=", "<"):
            if c > 0:
                his[i] = min(his[i], rhs // c)
            else:
                # c x <= rhs with c < 0 means x >= ceil(rhs / c)
                los[i] = max(los[i], -((-rhs) // c))
        elif e.atom.rel == "=":
            if rhs % c == 0:
                los[i] = max(los[i], rhs // c)
                his[i] = min(his[i], rhs // c)
            else:
                los[i], his[i] = 0, -1

    maxabs = [max(abs(lo), abs(hi), 1) for lo, hi in zip(los, his)]

    atoms: list = []
    code: list[int] = []

    def emit(e: BoolExpr):
        if isinstance(e, Const):
            code.extend((4, int(e.value)))
        elif isinstance(e, Atom):
            idx = len(atoms)
            atoms.append(e.atom)
            code.extend((0, idx))
        elif isinstance(e, Not):
            emit(e.child)
            code.extend((3, 0))
        elif isinstance(e, And):
            for c in e.children:
                emit(c)
            code.extend((1, len(e.children)))
        else:
            for c in e.children:
                emit(c)
            code.extend((2, len(e.children)))

    emit(f.matrix)

    aptr, avars, acoefs, arhs, arel = [0], [], [], [], []
    rel_code = {"<=": 0, "<": 1, "=": 2}
    max_abs = 0
    for a in atoms:
        bound = abs(a.rhs)
        for r, c in a.coeffs:
            avars.append(layout[r])
            acoefs.append(c)
            bound += abs(c) * maxabs[layout[r]]
        aptr.append(len(avars))
        arhs.append(a.rhs)
        arel.append(rel_code[a.rel])
        max_abs = max(max_abs, bound)

    space = 1
    for lo, hi in zip(los, his):
        space *= max(0, hi - lo + 1)

    return Program(nvars, starts, dims, quants, los, his, code,
                   aptr, avars, acoefs, arhs, arel,
                   free_dim, max_abs, space)


def decide(p: Program) -> bool:
    if p.free_dim:
        raise ValueError("formula has a free block; use free_scan")
    k = backend(p.max_abs)
    return bool(k.decide(p.nvars, p.starts, p.dims, p.quants, p.los, p.his,
                         p.code, p.aptr, p.avars, p.acoefs, p.arhs, p.arel))


def decide_parallel(p: Program, jobs: int) -> bool:
    """Split the outermost block's first coordinate range across processes."""
    if jobs <= 1 or not p.starts:
        return decide(p)
    first = p.starts[0]
    lo, hi = p.los[first], p.his[first]
    if lo > hi:
        return decide(p)
    from concurrent.futures import ProcessPoolExecutor

    width = hi - lo + 1
    jobs = min(jobs, width)
    step = (width + jobs - 1) // jobs
    chunks = [(c0, min(c0 + step - 1, hi)) for c0 in range(lo, hi + 1, step)]
    exists = p.quants[0] == 0
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        results = list(ex.map(_decide_chunk, [(p, a, b) for a, b in chunks]))
    return any(results) if exists else all(results)


def _decide_chunk(arg) -> bool:
    p, lo, hi = arg
    los = list(p.los)
    his = list(p.his)
    first = p.starts[0]
    los[first], his[first] = lo, hi
    k = backend(p.max_abs)
    return bool(k.decide(p.nvars, p.starts, p.dims, p.quants, los, his,
                         p.code, p.aptr, p.avars, p.acoefs, p.arhs, p.arel))


def free_scan(p: Program) -> list[tuple[int, ...]]:
    if not p.free_dim:
        raise ValueError("formula has no free block")
    k = backend(p.max_abs)
    return [tuple(pt) for pt in k.free_scan(
        p.free_dim, p.nvars, p.starts, p.dims, p.quants, p.los, p.his,
        p.code, p.aptr, p.avars, p.acoefs, p.arhs, p.arel)]


# -- integer lattice scans -----------------------------------------------------

def _scan_bound(A, b, lows, highs) -> int:
    bound = 0
    for row, bi in zip(A, b):
        s = abs(bi)
        for c, lo, hi in zip(row, lows, highs):
            s += abs(c) * max(abs(lo), abs(hi))
        bound = max(bound, s)
    return bound


def _column_order(A, lows, highs) -> list[int]:
    """Branch strongly-constrained coordinates first.

    Large coefficients (binary digit and decompression rows) propagate the
    hardest, so sort by the largest absolute coefficient touching each
    column, then by narrower domains.
    """
    n = len(lows)
    maxcoef = [0] * n
    for row in A:
        for j in range(n):
            c = abs(row[j])
            if c > maxcoef[j]:
                maxcoef[j] = c
    return sorted(range(n),
                  key=lambda j: (-maxcoef[j], highs[j] - lows[j], j))


def _permute(A, lows, highs, perm):
    A2 = [[row[j] for j in perm] for row in A]
    return A2, [lows[j] for j in perm], [highs[j] for j in perm]


def _unpermute_point(pt, perm):
    out = [0] * len(perm)
    for pos, j in enumerate(perm):
        out[j] = pt[pos]
    return tuple(out)


def lattice_feasible(A, b, lows, highs):
    """A point of {x in box : Ax <= b} or None (deterministic choice)."""
    perm = _column_order(A, lows, highs)
    A2, lo2, hi2 = _permute(A, lows, highs, perm)
    k = backend(_scan_bound(A, b, lows, highs))
    pt = k.lattice_feasible(A2, b, lo2, hi2)
    return _unpermute_point(pt, perm) if pt is not None else None


def lattice_enumerate(A, b, lows, highs, limit):
    """All points of {x in box : Ax <= b}, lexicographically sorted."""
    perm = _column_order(A, lows, highs)
    A2, lo2, hi2 = _permute(A, lows, highs, perm)
    k = backend(_scan_bound(A, b, lows, highs))
    pts, hit = k.lattice_scan(A2, b, lo2, hi2, limit, True)
    if hit:
        from .config import CapExceeded

        raise CapExceeded("max_lattice_points", f"more than {limit} points")
    return sorted(_unpermute_point(p, perm) for p in pts)


def feasible_over_range(A, alpha, nu, lows, highs, zlo, zhi):
    """Per-z witness of {x in box : Ax <= alpha z + nu} (deterministic)."""
    if zhi < zlo:
        return []
    zabs = max(abs(zlo), abs(zhi))
    b = [abs(al) * zabs + abs(n) for al, n in zip(alpha, nu)]
    perm = _column_order(A, lows, highs)
    A2, lo2, hi2 = _permute(A, lows, highs, perm)
    k = backend(_scan_bound(A, b, lows, highs))
    out = k.feasible_over_range(A2, alpha, nu, lo2, hi2, zlo, zhi)
    return [_unpermute_point(w, perm) if w is not None else None for w in out]

"""Exact rational polyhedra in fixed small dimension.

H-form is rows a·x <= b (or strict a·x < b for open facets); equalities are
encoded as paired inequalities.  Emptiness and coordinate ranges run through
Fourier-Motzkin elimination; vertex enumeration checks feasible n-subsets of
rows; facet enumeration works within the affine hull, by subset search in
tiny cases and an incremental hull otherwise.  No floating point anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, ceil, floor
from typing import Optional, Sequence

from . import kernel, linalg, lp
from .config import DEFAULT, CapExceeded, Limits


class EmptyPolyhedronError(ValueError):
    pass


class UnboundedPolyhedronError(ValueError):
    pass


@dataclass(frozen=True)
class HPolyhedron:
    A: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    strict: tuple[bool, ...]
    n: int

    @staticmethod
    def make(rows: Sequence[Sequence], rhs: Sequence, n: int,
             strict: Optional[Sequence[bool]] = None) -> "HPolyhedron":
        A = tuple(tuple(Fraction(x) for x in row) for row in rows)
        b = tuple(Fraction(x) for x in rhs)
        s = tuple(bool(x) for x in strict) if strict is not None else (False,) * len(A)
        assert all(len(row) == n for row in A) and len(b) == len(A) == len(s)
        return HPolyhedron(A, b, s, n)

    @staticmethod
    def box(bounds: Sequence[tuple[int, int]]) -> "HPolyhedron":
        n = len(bounds)
        rows, rhs = [], []
        for j, (lo, hi) in enumerate(bounds):
            e = [0] * n
            e[j] = 1
            rows.append(e[:])
            rhs.append(hi)
            e[j] = -1
            rows.append(e)
            rhs.append(-lo)
        return HPolyhedron.make(rows, rhs, n)

    @property
    def m(self) -> int:
        return len(self.A)

    def stack(self, other: "HPolyhedron") -> "HPolyhedron":
        assert self.n == other.n
        return HPolyhedron(self.A + other.A, self.b + other.b,
                           self.strict + other.strict, self.n)

    def rows(self):
        return list(zip(self.A, self.b, self.strict))

    def contains(self, point: Sequence) -> bool:
        pt = [Fraction(x) for x in point]
        for a, b, s in self.rows():
            v = linalg.dot(a, pt)
            if (v > b) or (s and v == b):
                return False
        return True

    def closure(self) -> "HPolyhedron":
        return HPolyhedron(self.A, self.b, (False,) * self.m, self.n)

    def integer_rows(self) -> tuple[list[list[int]], list[int]]:
        """Integer-cleared rows with strictness folded in.

        Valid for integer points only: a·x < b over Z equals a·x <= ceil(b)-1
        after clearing denominators.
        """
        rows, rhs = [], []
        for a, b, s in self.rows():
            denom = linalg.lcm_list([x.denominator for x in a] + [b.denominator])
            ia = [int(x * denom) for x in a]
            ib = b * denom
            if s:
                rows.append(ia)
                rhs.append(ceil(ib) - 1)
            else:
                rows.append(ia)
                rhs.append(floor(ib))
        return rows, rhs

    def to_json(self) -> dict:
        return {
            "A": [[str(x) for x in row] for row in self.A],
            "b": [str(x) for x in self.b],
            "strict": list(self.strict),
        }

    @staticmethod
    def from_json(d: dict) -> "HPolyhedron":
        A = [[Fraction(x) for x in row] for row in d["A"]]
        n = len(A[0]) if A else 0
        return HPolyhedron.make(A, [Fraction(x) for x in d["b"]], n,
                                d.get("strict"))


@dataclass(frozen=True)
class VPolytope:
    vertices: tuple[tuple[Fraction, ...], ...]
    n: int

    @staticmethod
    def make(points: Sequence[Sequence]) -> "VPolytope":
        pts = sorted({tuple(Fraction(x) for x in p) for p in points})
        if not pts:
            raise EmptyPolyhedronError("vertex list is empty")
        return VPolytope(tuple(pts), len(pts[0]))

    def to_json(self) -> dict:
        return {"vertices": [[str(x) for x in p] for p in self.vertices]}

    @staticmethod
    def from_json(d: dict) -> "VPolytope":
        return VPolytope.make([[Fraction(x) for x in p] for p in d["vertices"]])


@dataclass(frozen=True)
class Interval:
    """Rational interval, possibly half-open or unbounded; or the empty one."""

    lo: Optional[Fraction]
    hi: Optional[Fraction]
    lo_open: bool = False
    hi_open: bool = False
    empty: bool = False

    @staticmethod
    def closed(lo, hi) -> "Interval":
        return Interval(Fraction(lo), Fraction(hi))

    @staticmethod
    def half_open(lo, hi) -> "Interval":
        return Interval(Fraction(lo), Fraction(hi), False, True)

    @staticmethod
    def make_empty() -> "Interval":
        return Interval(None, None, empty=True)

    def contains(self, q) -> bool:
        if self.empty:
            return False
        q = Fraction(q)
        if self.lo is not None and (q < self.lo or (self.lo_open and q == self.lo)):
            return False
        if self.hi is not None and (q > self.hi or (self.hi_open and q == self.hi)):
            return False
        return True

    def int_lo(self) -> int:
        assert self.lo is not None and not self.empty
        v = ceil(self.lo)
        if self.lo_open and v == self.lo:
            v += 1
        return v

    def int_hi(self) -> int:
        assert self.hi is not None and not self.empty
        v = floor(self.hi)
        if self.hi_open and v == self.hi:
            v -= 1
        return v

    def ints(self) -> range:
        if self.empty:
            return range(0)
        return range(self.int_lo(), self.int_hi() + 1)

    def to_json(self):
        if self.empty:
            return {"empty": True}
        return {
            "lo": None if self.lo is None else str(self.lo),
            "hi": None if self.hi is None else str(self.hi),
            "lo_open": self.lo_open,
            "hi_open": self.hi_open,
        }


# -- Fourier-Motzkin ----------------------------------------------------------

Row = tuple[tuple[Fraction, ...], Fraction, bool]


def _normalize_row(a, b, s) -> Row:
    nz = [x for x in a if x != 0]
    if nz:
        scale = 1 / abs(nz[0])
        a = tuple(x * scale for x in a)
        b = b * scale
    return (tuple(a), b, s)


def _fm_step(rows: list[Row], j: int) -> list[Row]:
    """Eliminate variable j from rows over it."""
    pos, neg, zero = [], [], []
    for a, b, s in rows:
        if a[j] > 0:
            pos.append((a, b, s))
        elif a[j] < 0:
            neg.append((a, b, s))
        else:
            zero.append((a, b, s))
    out = list(zero)
    for ap, bp, sp in pos:
        for an, bn, sn in neg:
            # scale to cancel coordinate j
            cp, cn = ap[j], -an[j]
            a = tuple(cn * x + cp * y for x, y in zip(ap, an))
            b = cn * bp + cp * bn
            out.append(_normalize_row(a, b, sp or sn))
    seen = set()
    dedup = []
    for r in out:
        if r not in seen:
            seen.add(r)
            dedup.append(r)
    return dedup


def _rows_consistent(rows: list[Row]) -> bool:
    for a, b, s in rows:
        if all(x == 0 for x in a):
            if b < 0 or (s and b == 0):
                return False
    return True


def is_empty_fm(p: HPolyhedron) -> bool:
    """Emptiness by Fourier-Motzkin; exact but explosive beyond ~5 variables.

    Retained as an independent cross-check of the simplex route.
    """
    rows = [_normalize_row(a, b, s) for a, b, s in p.rows()]
    for j in range(p.n):
        if not _rows_consistent(rows):
            return True
        rows = _fm_step(rows, j)
    return not _rows_consistent(rows)


def _strict_slack_lp(p: HPolyhedron):
    """LP data: max s with strict rows tightened by s, 0 <= s <= 1."""
    rows, rhs = [], []
    for a, b, s in p.rows():
        rows.append(list(a) + [Fraction(1 if s else 0)])
        rhs.append(Fraction(b))
    e = [Fraction(0)] * p.n
    rows.append(e + [Fraction(1)])
    rhs.append(Fraction(1))
    rows.append(e + [Fraction(-1)])
    rhs.append(Fraction(0))
    c = e + [Fraction(1)]
    return rows, rhs, c


def is_empty(p: HPolyhedron) -> bool:
    """Exact rational emptiness via simplex (strict rows respected)."""
    if not any(p.strict):
        return lp.lp_feasible_point([list(a) for a in p.A], list(p.b)) is None
    rows, rhs, c = _strict_slack_lp(p)
    status, value, _pt = lp.lp_max(rows, rhs, c)
    return status == lp.INFEASIBLE or (status == lp.OPTIMAL and value <= 0)


def feasible_point(p: HPolyhedron) -> Optional[tuple[Fraction, ...]]:
    """A rational point of p (strictly inside open facets), or None."""
    if not any(p.strict):
        return lp.lp_feasible_point([list(a) for a in p.A], list(p.b))
    rows, rhs, c = _strict_slack_lp(p)
    status, value, pt = lp.lp_max(rows, rhs, c)
    if status != lp.OPTIMAL or value <= 0:
        return None
    return pt[: p.n]


def coordinate_range(p: HPolyhedron, j: int) -> Interval:
    """Range of x_j over the closure of p (open flags not reported)."""
    rows = [list(a) for a in p.A]
    rhs = list(p.b)
    c = [Fraction(0)] * p.n
    c[j] = Fraction(1)
    status, hi, _ = lp.lp_max(rows, rhs, c)
    if status == lp.INFEASIBLE:
        return Interval.make_empty()
    c[j] = Fraction(-1)
    status2, lo_neg, _ = lp.lp_max(rows, rhs, c)
    lo = -lo_neg if status2 == lp.OPTIMAL else None
    return Interval(lo, hi if status == lp.OPTIMAL else None)


def is_bounded(p: HPolyhedron) -> bool:
    """Recession cone of the closure is trivial.

    Fast path: every coordinate carries single-variable rows in both
    directions (the common box-row shape); otherwise 2n recession LPs.
    """
    lo_ok = [False] * p.n
    hi_ok = [False] * p.n
    for a, _b, _s in p.rows():
        nz = [j for j in range(p.n) if a[j] != 0]
        if len(nz) == 1:
            (hi_ok if a[nz[0]] > 0 else lo_ok)[nz[0]] = True
    if all(lo_ok) and all(hi_ok):
        return True
    rows = [list(a) for a in p.A]
    zero = [Fraction(0)] * p.m
    for j in range(p.n):
        for sgn in (1, -1):
            if (hi_ok if sgn > 0 else lo_ok)[j]:
                continue
            c = [Fraction(0)] * p.n
            c[j] = Fraction(sgn)
            status, _v, _pt = lp.lp_max(rows, zero, c)
            if status == lp.UNBOUNDED:
                return False
    return True


# -- vertex and facet enumeration ----------------------------------------------

def _scaled_irredundant_rows(p: HPolyhedron) -> tuple[list[list[int]], list[int]]:
    """Integer rows with duplicates and dominated copies removed.

    Rows sharing a primitive normal keep only the tightest right-hand side;
    this does not change the solution set.
    """
    best: dict[tuple[int, ...], Fraction] = {}
    for a, b, _s in p.rows():
        denom = linalg.lcm_list([x.denominator for x in a] + [b.denominator])
        ia = tuple(int(x * denom) for x in a)
        g = 0
        for x in ia:
            g = gcd_int(g, abs(x))
        if g == 0:
            continue
        ia = tuple(x // g for x in ia)
        ib = Fraction(b * denom, g)
        if ia not in best or ib < best[ia]:
            best[ia] = ib
    rows, rhs = [], []
    for ia, ib in sorted(best.items()):
        denom = ib.denominator
        rows.append([x * denom for x in ia])
        rhs.append(ib.numerator)
    return rows, rhs


def gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def vertices_from_facets(p: HPolyhedron, limits: Limits = DEFAULT) -> VPolytope:
    """Exact vertex set by enumerating feasible n-subsets of rows."""
    if p.n > limits.dim_cap:
        raise CapExceeded("dim_cap", f"dimension {p.n}")
    if any(p.strict):
        raise ValueError("vertex enumeration expects closed facets")
    if is_empty(p):
        raise EmptyPolyhedronError("polyhedron is empty")
    if not is_bounded(p):
        raise UnboundedPolyhedronError("polyhedron is unbounded")
    rows, rhs = _scaled_irredundant_rows(p)
    m = len(rows)
    verts = set()
    for subset in combinations(range(m), p.n):
        A = [rows[i] for i in subset]
        b = [rhs[i] for i in subset]
        x = linalg.solve_bareiss(A, b)
        if x is None or x in verts:
            continue
        den = linalg.lcm_list([v.denominator for v in x])
        nums = [int(v * den) for v in x]
        if all(
            sum(r[j] * nums[j] for j in range(p.n)) <= bb * den
            for r, bb in zip(rows, rhs)
        ):
            verts.add(x)
    return VPolytope.make(verts)


def _affine_rank(points) -> tuple[int, list[int]]:
    """(rank of differences, pivot coordinate columns)."""
    if len(points) <= 1:
        return 0, []
    p0 = points[0]
    diffs = [[x - y for x, y in zip(p, p0)] for p in points[1:]]
    rows = [[Fraction(v) for v in d] for d in diffs]
    reduced, pivots = linalg._echelon(rows)
    return len(pivots), pivots


def facets_from_vertices(v: VPolytope, limits: Limits = DEFAULT) -> HPolyhedron:
    """Irredundant H-form of conv(v); carries equality pairs when degenerate."""
    if v.n > limits.dim_cap:
        raise CapExceeded("dim_cap", f"dimension {v.n}")
    pts = list(v.vertices)
    n = v.n
    d, pivots = _affine_rank(pts)
    eq_rows: list[tuple[tuple[Fraction, ...], Fraction]] = []
    if d < n:
        p0 = pts[0]
        diffs = [[x - y for x, y in zip(p, p0)] for p in pts[1:]]
        for c in linalg.nullspace(diffs, ncols=n):
            c = tuple(Fraction(x) for x in linalg.primitive(c))
            eq_rows.append((c, linalg.dot(c, p0)))
    if d == 0:
        rows, rhs = [], []
        for c, val in eq_rows:
            rows.append(c)
            rhs.append(val)
            rows.append(tuple(-x for x in c))
            rhs.append(-val)
        return HPolyhedron.make(rows, rhs, n)
    if d < n:
        proj = [tuple(p[j] for j in pivots) for p in pts]
        sub = _full_dim_facets(proj, d, limits)
        rows, rhs = [], []
        for c, val in eq_rows:
            rows.append(c)
            rhs.append(val)
            rows.append(tuple(-x for x in c))
            rhs.append(-val)
        for c, val in sub:
            full = [Fraction(0)] * n
            for cj, j in zip(c, pivots):
                full[j] = cj
            rows.append(tuple(full))
            rhs.append(val)
        return HPolyhedron.make(rows, rhs, n)
    facets = _full_dim_facets(pts, n, limits)
    return HPolyhedron.make([c for c, _ in facets], [val for _, val in facets], n)


def _hyperplane(points, n) -> Optional[tuple[tuple[Fraction, ...], Fraction]]:
    """Hyperplane through n affinely independent points of R^n."""
    p0 = points[0]
    diffs = [[x - y for x, y in zip(p, p0)] for p in points[1:]]
    ns = linalg.nullspace(diffs, ncols=n)
    if len(ns) != 1:
        return None
    c = tuple(Fraction(x) for x in linalg.primitive(ns[0]))
    return c, linalg.dot(c, p0)


def _full_dim_facets(pts, n, limits) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    if n == 1:
        vals = [p[0] for p in pts]
        return [((Fraction(1),), max(vals)), ((Fraction(-1),), -min(vals))]
    if comb(len(pts), n) <= 30000:
        cands = _facets_by_subsets(pts, n)
    else:
        cands = _facets_incremental(pts, n)
    # keep supporting hyperplanes whose contact set has affine rank n-1
    out = []
    seen = set()
    for c, val in cands:
        key = (c, val)
        if key in seen:
            continue
        seen.add(key)
        contact = [p for p in pts if linalg.dot(c, p) == val]
        r, _ = _affine_rank(contact)
        if r == n - 1:
            out.append((c, val))
    return out


def _facets_by_subsets(pts, n):
    out = []
    for subset in combinations(pts, n):
        h = _hyperplane(list(subset), n)
        if h is None:
            continue
        c, val = h
        side = [linalg.dot(c, p) - val for p in pts]
        if all(s <= 0 for s in side):
            out.append((c, val))
        elif all(s >= 0 for s in side):
            out.append((tuple(-x for x in c), -val))
    return out


def _facets_incremental(pts, n):
    """Beneath-beyond insertion; assumes the points affinely span R^n."""
    # greedy affinely independent seed of n+1 points
    seed = [pts[0]]
    for p in pts[1:]:
        if _affine_rank(seed + [p])[0] > _affine_rank(seed)[0]:
            seed.append(p)
        if len(seed) == n + 1:
            break
    interior = tuple(sum(c) / (n + 1) for c in zip(*seed))
    facets: list[tuple[tuple[Fraction, ...], Fraction, set[int]]] = []

    def orient(c, val):
        return (c, val) if linalg.dot(c, interior) < val else (tuple(-x for x in c), -val)

    index = {p: i for i, p in enumerate(pts)}

    def facet_points(c, val):
        return {i for i, p in enumerate(pts) if linalg.dot(c, p) == val}

    for subset in combinations(seed, n):
        h = _hyperplane(list(subset), n)
        if h is None:
            continue
        c, val = orient(*h)
        facets.append((c, val, {index[p] for p in subset}))

    processed = set(seed)
    for p in pts:
        if p in processed:
            continue
        processed.add(p)
        pi = index[p]
        violated, kept = [], []
        on_plane = []
        for f in facets:
            v = linalg.dot(f[0], p) - f[1]
            if v > 0:
                violated.append(f)
            else:
                kept.append(f)
                if v == 0:
                    on_plane.append(f)
        if not violated:
            for f in on_plane:
                f[2].add(pi)
            continue
        new_facets = list(kept)
        for f in on_plane:
            f[2].add(pi)
        for fv in violated:
            for fk in kept:
                ridge = fv[2] & fk[2]
                if len(ridge) < n - 1:
                    continue
                rp = [pts[i] for i in ridge]
                if _affine_rank(rp)[0] != n - 2:
                    continue
                base = _independent_subset(rp, n - 2)
                if len(base) != n - 1:
                    continue
                h = _hyperplane(base + [p], n)
                if h is None:
                    continue
                c, val = orient(*h)
                if any(linalg.dot(c, q) > val for q in processed):
                    continue
                if all(not (c == g[0] and val == g[1]) for g in new_facets):
                    new_facets.append((c, val, facet_points(c, val)))
        facets = new_facets
    return [(c, val) for c, val, _ in facets]


def _independent_subset(points, target_rank):
    """Affinely independent subset of size target_rank + 1."""
    out = [points[0]]
    for p in points[1:]:
        if _affine_rank(out + [p])[0] > _affine_rank(out)[0]:
            out.append(p)
        if _affine_rank(out)[0] == target_rank:
            break
    return out


# -- lattice points -------------------------------------------------------------

def integer_box(p: HPolyhedron) -> Optional[list[tuple[int, int]]]:
    """Integer bounding box of p, or None when p is rationally empty."""
    box = []
    for j in range(p.n):
        iv = coordinate_range(p, j)
        if iv.empty:
            return None
        if iv.lo is None or iv.hi is None:
            raise UnboundedPolyhedronError(f"coordinate {j} unbounded")
        box.append((iv.int_lo(), iv.int_hi()))
    return box


def enumerate_lattice_points(p: HPolyhedron, limits: Limits = DEFAULT) -> list[tuple[int, ...]]:
    """All integer points, lexicographically sorted; strict rows respected."""
    box = integer_box(p)
    if box is None:
        return []
    rows, rhs = p.integer_rows()
    lows = [lo for lo, _ in box]
    highs = [hi for _, hi in box]
    return kernel.lattice_enumerate(rows, rhs, lows, highs, limits.max_lattice_points)


def lattice_feasible_point(p: HPolyhedron) -> Optional[tuple[int, ...]]:
    box = integer_box(p)
    if box is None:
        return None
    rows, rhs = p.integer_rows()
    return kernel.lattice_feasible(rows, rhs, [lo for lo, _ in box],
                                   [hi for _, hi in box])

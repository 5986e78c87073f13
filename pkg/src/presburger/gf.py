"""Short rational generating functions over integer exponents.

A ShortGF is a sum of terms c·t^a / ∏(1 − t^{b_i}) with rational c and
integer exponent vectors, every b_i nonzero.  Semantics are fixed by the
expansion convention: every denominator factor is oriented (flipping
1/(1−t^b) = −t^{−b}/(1−t^{−b}) as needed) so a strictly positive weight
vector w has w·b > 0; a term then expands over nonnegative lattice
parameters.  Bi-infinite geometric series never arise.

Construction from polyhedra uses Brion's vertex decomposition with signed
unimodular decomposition of the dual cones; τ-Hadamard products go through
the coupling polyhedron of the two expansions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, gcd
from typing import Optional, Sequence

from . import linalg
from .config import DEFAULT, CapExceeded, Limits
from .polyhedra import (
    EmptyPolyhedronError,
    HPolyhedron,
    VPolytope,
    enumerate_lattice_points,
    facets_from_vertices,
    feasible_point,
    is_bounded,
    is_empty,
    _affine_rank,
)


class GFError(ValueError):
    pass


class SubstitutionDegeneracyError(GFError):
    """A denominator exponent vector mapped to zero."""


class InfiniteSupportError(GFError):
    """Specialization at t = 1 hit a nonremovable pole."""


class NonPointedError(GFError):
    pass


@dataclass(frozen=True)
class Term:
    c: Fraction
    a: tuple[int, ...]
    bs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for b in self.bs:
            if all(x == 0 for x in b):
                raise GFError("zero denominator exponent vector")


@dataclass(frozen=True)
class ShortGF:
    nvars: int
    terms: tuple[Term, ...]

    @staticmethod
    def make(nvars: int, terms) -> "ShortGF":
        tt = tuple(
            Term(Fraction(c), tuple(int(x) for x in a),
                 tuple(tuple(int(x) for x in b) for b in bs))
            for c, a, bs in terms
            if Fraction(c) != 0
        )
        return ShortGF(nvars, tt)

    @staticmethod
    def zero(nvars: int) -> "ShortGF":
        return ShortGF(nvars, ())

    @staticmethod
    def monomials(nvars: int, points, c=1) -> "ShortGF":
        return ShortGF.make(nvars, [(c, p, ()) for p in points])

    def to_json(self) -> dict:
        terms = sorted(self.terms, key=lambda t: (t.a, t.bs, str(t.c)))
        return {
            "nvars": self.nvars,
            "terms": [
                {"c": str(t.c), "a": list(t.a), "bs": [list(b) for b in t.bs]}
                for t in terms
            ],
        }

    @staticmethod
    def from_json(d: dict) -> "ShortGF":
        return ShortGF.make(
            d["nvars"],
            [(Fraction(t["c"]), t["a"], t["bs"]) for t in d["terms"]],
        )


def gf_add(a: ShortGF, b: ShortGF) -> ShortGF:
    if a.nvars != b.nvars:
        raise GFError("dimension mismatch")
    return ShortGF(a.nvars, a.terms + b.terms)


def gf_scale(c, a: ShortGF) -> ShortGF:
    c = Fraction(c)
    if c == 0:
        return ShortGF.zero(a.nvars)
    return ShortGF(a.nvars, tuple(Term(c * t.c, t.a, t.bs) for t in a.terms))


def _clog(v: int) -> int:
    """⌈log2 v + 1⌉ for v >= 1."""
    return v.bit_length() if v & (v - 1) == 0 else v.bit_length() + 1


def gf_length(g: ShortGF) -> int:
    """Bit-size of the representation.

    Per term: ⌈log2|p·q| + 1⌉ for the coefficient p/q, plus ⌈log2|e| + 1⌉
    for every nonzero exponent entry (zero entries cost nothing).  Additive
    over terms.
    """
    total = 0
    for t in g.terms:
        pq = abs(t.c.numerator * t.c.denominator)
        total += _clog(pq)
        for x in t.a:
            if x:
                total += _clog(abs(x))
        for b in t.bs:
            for x in b:
                if x:
                    total += _clog(abs(x))
    return total


# -- orientation and expansion --------------------------------------------------

def _weight_vector(nvars: int, vectors) -> tuple[int, ...]:
    """Deterministic strictly positive weight with w·v != 0 for all vectors."""
    vecs = [v for v in vectors if any(x != 0 for x in v)]
    for k in range(1, 2000):
        w = tuple(k**j for j in range(nvars))
        if all(linalg.dot(w, v) != 0 for v in vecs):
            return w
    raise GFError("no orientation weight found")


def _orient_terms(g: ShortGF, w: Sequence[int]):
    """Terms rewritten so every denominator satisfies w·b > 0."""
    out = []
    for t in g.terms:
        c, a, bs = t.c, list(t.a), []
        for b in t.bs:
            d = linalg.dot(w, b)
            if d == 0:
                raise GFError("weight does not orient a denominator")
            if d > 0:
                bs.append(tuple(b))
            else:
                # 1/(1-t^b) = -t^{-b}/(1-t^{-b})
                c = -c
                a = [x - y for x, y in zip(a, b)]
                bs.append(tuple(-x for x in b))
        out.append(Term(c, tuple(a), tuple(bs)))
    return out


def expand(g: ShortGF, box: Sequence[tuple[int, int]],
           limits: Limits = DEFAULT) -> dict[tuple[int, ...], Fraction]:
    """Exact series coefficients restricted to a box.

    Every term is oriented by one strictly positive weight vector, so each
    expands over nonnegative lattice parameters; coefficients are summed
    pointwise.  Zero coefficients are omitted from the result.
    """
    if len(box) != g.nvars:
        raise GFError("box dimension mismatch")
    vol = 1
    for lo, hi in box:
        vol *= max(0, hi - lo + 1)
    if vol > limits.max_expand_points:
        raise CapExceeded("max_expand_points", f"box volume {vol}")
    vectors = [b for t in g.terms for b in t.bs]
    w = _weight_vector(g.nvars, vectors)
    wmax = sum(wj * hi for wj, (lo, hi) in zip(w, box))
    coeffs: dict[tuple[int, ...], Fraction] = {}

    def visit(term: Term):
        p = len(term.bs)

        def rec(i, point, wval):
            if i == p:
                if all(lo <= x <= hi for x, (lo, hi) in zip(point, box)):
                    key = tuple(point)
                    coeffs[key] = coeffs.get(key, Fraction(0)) + term.c
                return
            b = term.bs[i]
            wb = linalg.dot(w, b)  # > 0 after orientation
            cur = list(point)
            cw = wval
            while cw <= wmax:
                rec(i + 1, cur, cw)
                cur = [x + y for x, y in zip(cur, b)]
                cw += wb

        rec(0, list(term.a), linalg.dot(w, term.a))

    for t in _orient_terms(g, w):
        visit(t)
    return {k: v for k, v in coeffs.items() if v != 0}


def expand_set(g: ShortGF, box, limits: Limits = DEFAULT) -> set[tuple[int, ...]]:
    """Support of the expansion; checks all coefficients are 0 or 1."""
    cs = expand(g, box, limits)
    bad = {k: v for k, v in cs.items() if v not in (0, 1)}
    if bad:
        raise GFError(f"not an indicator expansion: {sorted(bad.items())[:3]}")
    return {k for k, v in cs.items() if v == 1}


# -- specialization at t -> 1 ---------------------------------------------------

def _series_mul(a, b, P):
    out = [Fraction(0)] * (P + 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if i + j > P:
                break
            out[i + j] += x * y
    return out


def _series_inv(a, P):
    assert a[0] != 0
    inv0 = Fraction(1) / a[0]
    out = [Fraction(0)] * (P + 1)
    out[0] = inv0
    for k in range(1, P + 1):
        s = Fraction(0)
        for j in range(1, k + 1):
            if j < len(a):
                s += a[j] * out[k - j]
        out[k] = -inv0 * s
    return out


def _binom_series(m: int, P):
    """(1+s)^m truncated, for any integer m."""
    out = [Fraction(1)]
    for j in range(1, P + 1):
        out.append(out[-1] * Fraction(m - j + 1, j))
    return out


def count(g: ShortGF, limits: Limits = DEFAULT) -> Fraction:
    """Exact limit at t = 1 via the substitution t_j <- (1+s)^{w_j}.

    Valid when g represents a finite multiset; a nonremovable pole raises
    InfiniteSupportError.
    """
    if not g.terms:
        return Fraction(0)
    vectors = [b for t in g.terms for b in t.bs]
    w = _weight_vector(g.nvars, vectors)
    P = max((len(t.bs) for t in g.terms), default=0)
    principal = [Fraction(0)] * P  # coefficients of s^{-P} .. s^{-1}
    value = Fraction(0)
    for t in g.terms:
        p = len(t.bs)
        num = _binom_series(linalg.dot(w, t.a), P)
        den = [Fraction(1)] + [Fraction(0)] * P
        for b in t.bs:
            m = linalg.dot(w, b)
            # (1 - (1+s)^m) / s, a unit power series with constant -m
            f = _binom_series(m, P + 1)
            factor = [-f[j + 1] for j in range(P + 1)]
            den = _series_mul(den, factor, P)
        e = _series_mul(num, _series_inv(den, P), P)
        for j in range(P + 1):
            k = j - p
            if k < 0:
                principal[P + k] += t.c * e[j]
            elif k == 0:
                value += t.c * e[j]
    if any(x != 0 for x in principal):
        raise InfiniteSupportError("pole at t = 1; the set is infinite")
    return value


# -- substitutions ---------------------------------------------------------------

def monomial_substitution(g: ShortGF, E: Sequence[Sequence[int]]) -> ShortGF:
    """Exponent map x ↦ E·x into len(E) new variables.

    Every denominator vector must keep a nonzero image.
    """
    new_n = len(E)
    terms = []
    for t in g.terms:
        a = tuple(linalg.dot(row, t.a) for row in E)
        bs = []
        for b in t.bs:
            nb = tuple(linalg.dot(row, b) for row in E)
            if all(x == 0 for x in nb):
                raise SubstitutionDegeneracyError(f"denominator {b} maps to zero")
            bs.append(nb)
        terms.append((t.c, a, bs))
    return ShortGF.make(new_n, terms)


def shift_exponents(g: ShortGF, delta: Sequence[int]) -> ShortGF:
    return ShortGF.make(
        g.nvars,
        [(t.c, tuple(x + d for x, d in zip(t.a, delta)), t.bs) for t in g.terms],
    )


@dataclass(frozen=True)
class TauMap:
    """Linear packing map τ(x) = Σ w_j x_j."""

    weights: tuple[int, ...]

    def __post_init__(self):
        if any(w == 0 for w in self.weights):
            raise GFError("tau weights must be nonzero")

    @staticmethod
    def binary(n: int, ell: int) -> "TauMap":
        return TauMap(tuple(2 ** (j * ell) for j in range(n)))

    def apply(self, x: Sequence[int]) -> int:
        return sum(w * v for w, v in zip(self.weights, x))


def pack(f: ShortGF, ell: int) -> ShortGF:
    """One-variable GF of τ(F) for F ⊆ [0, 2^ell)^n, τ the binary packing."""
    tau = TauMap.binary(f.nvars, ell)
    return monomial_substitution(f, [list(tau.weights)])


# -- arithmetic progressions -----------------------------------------------------

@dataclass(frozen=True)
class APSet:
    """Finite union of arithmetic progressions (first, step, count)."""

    progressions: tuple[tuple[int, int, int], ...]

    @staticmethod
    def make(progs, limits: Limits = DEFAULT) -> "APSet":
        """Canonicalize to pairwise disjoint progressions."""
        progs = [(int(f), int(s), int(c)) for f, s, c in progs if c > 0]
        for f, s, c in progs:
            if s < 1:
                raise GFError("progression step must be >= 1")
        if not progs:
            return APSet(())
        total = sum(c for _, _, c in progs)
        if total <= limits.max_period:
            values = set()
            for f, s, c in progs:
                values.update(f + s * i for i in range(c))
            return APSet(_pack_values(sorted(values)))
        # step-lcm residue decomposition for long sets
        L = 1
        for _, s, _ in progs:
            L = L * s // gcd(L, s)
            if L > limits.max_period:
                raise CapExceeded("max_period", f"step lcm beyond {limits.max_period}")
        by_res: dict[int, list[tuple[int, int]]] = {}
        for f, s, c in progs:
            for i in range(L // s):
                first = f + s * i
                # members first + k L for k in [0, cnt)
                cnt = (c - i + (L // s) - 1) // (L // s)
                if cnt > 0:
                    by_res.setdefault(first % L, []).append((first, cnt))
        out = []
        for _, items in sorted(by_res.items()):
            # merge overlapping or adjacent step-L runs on the same residue
            merged = []
            for lo, hi in ((f, f + (c - 1) * L) for f, c in sorted(items)):
                if merged and lo <= merged[-1][1] + L:
                    merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
                else:
                    merged.append((lo, hi))
            for lo, hi in merged:
                out.append((lo, L, (hi - lo) // L + 1))
        return APSet(tuple(sorted(out)))

    def members(self):
        for f, s, c in self.progressions:
            for i in range(c):
                yield f + s * i

    def cardinality(self) -> int:
        return sum(c for _, _, c in self.progressions)

    def contains(self, v: int) -> bool:
        return any(
            f <= v <= f + s * (c - 1) and (v - f) % s == 0
            for f, s, c in self.progressions
        )

    def to_json(self):
        return [list(p) for p in self.progressions]


def _pack_values(values: list[int]) -> tuple[tuple[int, int, int], ...]:
    """Greedy split of sorted distinct integers into maximal progressions."""
    out = []
    i = 0
    n = len(values)
    while i < n:
        if i + 1 == n:
            out.append((values[i], 1, 1))
            break
        step = values[i + 1] - values[i]
        j = i + 1
        while j + 1 < n and values[j + 1] - values[j] == step:
            j += 1
        out.append((values[i], step, j - i + 1))
        i = j + 1
    return tuple(out)


def apset_to_gf(s: APSet) -> ShortGF:
    """Σ over progressions of t^f (1 − t^{s·c}) / (1 − t^s), numerator expanded."""
    terms = []
    for f, st, c in s.progressions:
        if c == 1:
            terms.append((1, (f,), ()))
        else:
            terms.append((1, (f,), ((st,),)))
            terms.append((-1, (f + st * c,), ((st,),)))
    return ShortGF.make(1, terms)


def interval_gf(lo: int, hi: int) -> ShortGF:
    """Indicator GF of the integers in [lo, hi]."""
    if hi < lo:
        return ShortGF.zero(1)
    return apset_to_gf(APSet(((lo, 1, hi - lo + 1),)))


# -- polyhedron generating functions ---------------------------------------------

def _vertices_unbounded(p: HPolyhedron) -> list[tuple[Fraction, ...]]:
    verts = []
    seen = set()
    for subset in combinations(range(p.m), p.n):
        A = [p.A[i] for i in subset]
        bb = [p.b[i] for i in subset]
        x = linalg.solve(A, bb)
        if x is None or x in seen:
            continue
        if p.contains(x):
            seen.add(x)
            verts.append(x)
    return sorted(verts)


def _implicit_equality_rows(p: HPolyhedron) -> list[int]:
    """Rows satisfied with equality by every feasible point."""
    out = []
    for i in range(p.m):
        # row i is an implicit equality iff a·x < b is infeasible with the rest
        test = HPolyhedron(p.A, p.b, tuple(
            s or (j == i) for j, s in enumerate(p.strict)), p.n)
        if is_empty(test):
            out.append(i)
    return out


def _triangulate_point_config(pts: list[tuple[Fraction, ...]]) -> list[list[int]]:
    """Index simplices of a pulling triangulation of conv(pts)."""
    idx = list(range(len(pts)))
    return _pull_triangulate([tuple(p) for p in pts], idx)


def _pull_triangulate(pts, idx) -> list[list[int]]:
    sub = [pts[i] for i in idx]
    r, _ = _affine_rank(sub)
    if len(idx) == r + 1:
        return [list(idx)]
    h = facets_from_vertices(VPolytope.make(sub))
    p0 = min(range(len(idx)), key=lambda i: pts[idx[i]])
    apex = pts[idx[p0]]
    simplices = []
    seen_rows = set()
    for a, b, strictf in h.rows():
        # skip equality-pair rows (affine hull): they contain every point
        contact = [i for i in idx if linalg.dot(a, pts[i]) == b]
        if len(contact) == len(idx):
            continue
        key = (a, b)
        if key in seen_rows:
            continue
        seen_rows.add(key)
        if linalg.dot(a, apex) == b:
            continue
        for simplex in _pull_triangulate(pts, contact):
            simplices.append([idx[p0]] + simplex)
    return simplices


def _short_nonzero(G: list[list[int]]) -> tuple[list[Fraction], tuple[int, ...]]:
    """β (row coords) and w = β·G with 0 < max|β| < 1, for |det G| >= 2."""
    d = len(G)
    Ginv = linalg.inverse(G)
    assert Ginv is not None
    lattice_rows = [tuple(Ginv[i][j] for j in range(d)) for i in range(d)]
    # rows of G^{-1} generate the candidate β lattice
    reduced = linalg.lll(lattice_rows)
    cands = list(reduced)
    for u, v in combinations(reduced, 2):
        cands.append(tuple(x + y for x, y in zip(u, v)))
        cands.append(tuple(x - y for x, y in zip(u, v)))
    best = None
    for beta in cands:
        mx = max(abs(x) for x in beta)
        if mx == 0 or mx >= 1:
            continue
        if best is None or mx < best[0]:
            best = (mx, beta)
    if best is None:
        # guaranteed fallback: enumerate w in the parallelepiped box
        bounds = [sum(abs(G[i][j]) for i in range(d)) for j in range(d)]
        if any(b > 40 for b in bounds):
            total = 1
            for b in bounds:
                total *= 2 * b + 1
            if total > 2 * 10**6:
                raise GFError("decomposition fallback box too large")
        from itertools import product

        for wv in product(*[range(-b, b + 1) for b in bounds]):
            if all(x == 0 for x in wv):
                continue
            beta = tuple(
                sum(Fraction(wv[i]) * Ginv[i][j] for i in range(d)) for j in range(d)
            )
            mx = max(abs(x) for x in beta)
            if 0 < mx < 1 and (best is None or (mx, beta) < best):
                best = (mx, beta)
        if best is None:
            raise GFError("no admissible decomposition vector")
    beta = list(best[1])
    if all(x <= 0 for x in beta):
        beta = [-x for x in beta]
    w = tuple(
        int(sum(beta[i] * G[i][j] for i in range(d))) for j in range(d)
    )
    return beta, w


def _unimodular_pieces(G: list[list[int]]) -> list[tuple[int, list[list[int]]]]:
    """Signed unimodular decomposition of the simplicial cone rows(G)."""
    out = []
    stack = [(1, G)]
    while stack:
        sign, M = stack.pop()
        dt = linalg.det(M)
        idx = abs(int(dt))
        if idx == 0:
            raise GFError("degenerate cone in decomposition")
        if idx == 1:
            out.append((sign, M))
            continue
        beta, w = _short_nonzero(M)
        for i, bi in enumerate(beta):
            if bi == 0:
                continue
            child = [row[:] for row in M]
            child[i] = list(w)
            stack.append((sign * (1 if bi > 0 else -1), child))
    return out


def _unimodular_cone_terms(apex, U_cols: list[tuple[int, ...]], sign: int) -> Term:
    """GF term of apex + cone(columns) with unimodular column matrix."""
    d = len(U_cols)
    U = [[U_cols[k][i] for k in range(d)] for i in range(d)]  # columns -> matrix
    Uinv = linalg.inverse(U)
    s = linalg.mat_vec(Uinv, apex)
    mu = [ceil(x) for x in s]
    a = tuple(int(sum(U[i][k] * mu[k] for k in range(d))) for i in range(d))
    return Term(Fraction(sign), a, tuple(U_cols))


def polyhedron_gf(p: HPolyhedron, limits: Limits = DEFAULT) -> ShortGF:
    """GF whose expansion is the indicator of p ∩ Z^n.

    Bounded polyhedra enumerate; unbounded pointed ones go through Brion's
    vertex decomposition with signed unimodular decomposition in the dual.
    """
    if p.n > limits.dim_cap:
        raise CapExceeded("dim_cap", f"dimension {p.n}")
    if is_empty(p):
        return ShortGF.zero(p.n)
    if is_bounded(p):
        pts = enumerate_lattice_points(p, limits)
        return ShortGF.monomials(p.n, pts)
    if any(p.strict):
        raise GFError("open facets unsupported for unbounded polyhedra")
    if linalg.rank(p.A) < p.n:
        raise NonPointedError("recession cone contains a line")

    eq_rows = _implicit_equality_rows(p)
    if eq_rows:
        return _gf_on_affine_hull(p, eq_rows, limits)

    terms: list[Term] = []
    verts = _vertices_unbounded(p)
    if not verts:
        raise NonPointedError("pointed polyhedron without vertices")
    for v in verts:
        normals = []
        seen = set()
        for a, b, _s in p.rows():
            if linalg.dot(a, v) == b:
                g = linalg.primitive(a)
                if g not in seen:
                    seen.add(g)
                    normals.append(g)
        for sign, W in _dual_decomposition(normals, p.n):
            Winv = linalg.inverse(W)
            cols = []
            for k in range(p.n):
                col = tuple(int(-Winv[i][k]) for i in range(p.n))
                cols.append(col)
            terms.append(_unimodular_cone_terms(v, cols, sign))
    return ShortGF(p.n, tuple(terms))


def _dual_decomposition(normals: list[tuple[int, ...]], n: int):
    """Signed unimodular cones (in the dual) covering cone(normals)."""
    if len(normals) == n:
        pieces = [(1, [list(g) for g in normals])]
    else:
        # section polytope: scale generators onto a transversal hyperplane
        wrows = [[-Fraction(x) for x in g] for g in normals]
        wrhs = [Fraction(-1)] * len(normals)
        wpoly = HPolyhedron.make(wrows, wrhs, n)
        w = feasible_point(wpoly)
        if w is None:
            raise NonPointedError("dual cone is not pointed")
        pts = []
        for g in normals:
            s = linalg.dot(w, g)
            pts.append(tuple(Fraction(x) / s for x in g))
        pieces = []
        for simplex in _triangulate_point_config(pts):
            pieces.append((1, [list(normals[i]) for i in simplex]))
    out = []
    for sign, G in pieces:
        for s2, W in _unimodular_pieces(G):
            out.append((sign * s2, W))
    return out


def _gf_on_affine_hull(p: HPolyhedron, eq_rows: list[int], limits: Limits) -> ShortGF:
    """Parametrize the implicit-equality lattice and recurse."""
    H, h = [], []
    for i in eq_rows:
        denom = linalg.lcm_list(
            [x.denominator for x in p.A[i]] + [p.b[i].denominator])
        H.append([int(x * denom) for x in p.A[i]])
        h.append(int(p.b[i] * denom))
    sol = linalg.solve_integer(H, h)
    if sol is None:
        return ShortGF.zero(p.n)  # no lattice point on the affine hull
    x0, basis = sol
    d = len(basis)
    rest = [i for i in range(p.m) if i not in eq_rows]
    if d == 0:
        ok = all(
            linalg.dot(p.A[i], x0) <= p.b[i] for i in rest
        )
        return ShortGF.monomials(p.n, [x0]) if ok else ShortGF.zero(p.n)
    rows, rhs = [], []
    for i in rest:
        rows.append([linalg.dot(p.A[i], col) for col in basis])
        rhs.append(p.b[i] - linalg.dot(p.A[i], x0))
    reduced = HPolyhedron.make(rows, rhs, d)
    inner = polyhedron_gf(reduced, limits)
    # map exponents y ↦ x0 + B y
    terms = []
    for t in inner.terms:
        a = tuple(
            x0[i] + sum(basis[k][i] * t.a[k] for k in range(d)) for i in range(p.n)
        )
        bs = []
        for b in t.bs:
            nb = tuple(sum(basis[k][i] * b[k] for k in range(d)) for i in range(p.n))
            bs.append(nb)
        terms.append((t.c, a, bs))
    return ShortGF.make(p.n, terms)


# -- τ-Hadamard products ----------------------------------------------------------

def tau_hadamard(A: ShortGF, B: ShortGF, tau: TauMap,
                 limits: Limits = DEFAULT) -> ShortGF:
    """GF expanding to Σ_x α_x · β_{τ(x)} · t^x.

    Bilinear over term pairs: couple the two expansions through the
    polyhedron {ζ, ξ >= 0 : τ(a + Σ ζ_i b_i) = c + Σ ξ_j d_j}, take its GF,
    then substitute u_i <- t^{b_i}, v_j <- 1 and shift by t^a.
    """
    if B.nvars != 1:
        raise GFError("second factor must be univariate")
    if len(tau.weights) != A.nvars:
        raise GFError("tau dimension mismatch")
    wA = _weight_vector(A.nvars, [b for t in A.terms for b in t.bs])
    wB = (1,)
    At = _orient_terms(A, wA)
    Bt = _orient_terms(B, wB)
    out_terms = []
    for ta in At:
        pcnt = len(ta.bs)
        if pcnt > limits.max_denominator_factors:
            raise CapExceeded("max_denominator_factors", f"{pcnt} factors")
        taus = [tau.apply(b) for b in ta.bs]
        for tb in Bt:
            qcnt = len(tb.bs)
            ds = [b[0] for b in tb.bs]  # all > 0 after orientation
            m = pcnt + qcnt
            # rows: nonnegativity and the coupling equality (as a pair)
            rows = []
            rhs = []
            for i in range(m):
                e = [0] * m
                e[i] = -1
                rows.append(e)
                rhs.append(0)
            couple = taus + [-dj for dj in ds]
            target = tb.a[0] - tau.apply(ta.a)
            rows.append(couple)
            rhs.append(target)
            rows.append([-x for x in couple])
            rhs.append(-target)
            P = HPolyhedron.make(rows, rhs, m)
            D = polyhedron_gf(P, limits)
            for td in D.terms:
                zeta = td.a[:pcnt]
                a_new = tuple(
                    ta.a[i] + sum(ta.bs[k][i] * zeta[k] for k in range(pcnt))
                    for i in range(A.nvars)
                )
                bs_new = []
                for beta in td.bs:
                    nb = tuple(
                        sum(ta.bs[k][i] * beta[k] for k in range(pcnt))
                        for i in range(A.nvars)
                    )
                    if all(x == 0 for x in nb):
                        raise SubstitutionDegeneracyError(
                            "coupling denominator maps to zero")
                    bs_new.append(nb)
                out_terms.append((ta.c * tb.c * td.c, a_new, bs_new))
    return ShortGF.make(A.nvars, out_terms)


def box_gf(n: int, ell: int) -> ShortGF:
    """GF of the full box [0, 2^ell)^n with expanded numerators."""
    N = 2**ell
    terms = []
    units = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    for signs in range(2**n):
        a = [0] * n
        c = 1
        for j in range(n):
            if (signs >> j) & 1:
                a[j] = N
                c = -c
        terms.append((c, tuple(a), tuple(units)))
    return ShortGF.make(n, terms)


def unpack(g: ShortGF, n: int, ell: int, limits: Limits = DEFAULT) -> ShortGF:
    """Inverse of pack: n-variable GF from the packed univariate one."""
    if g.nvars != 1:
        raise GFError("unpack expects a univariate GF")
    tau = TauMap.binary(n, ell)
    return tau_hadamard(box_gf(n, ell), g, tau, limits)

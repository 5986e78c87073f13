"""Parameter partitions for integer feasibility along a line.

For a system A x <= alpha z + nu with bounded feasible regions, a
partition splits the integer range of z into rational intervals, each
carrying finitely many affine test maps (T, T'): for every z in a piece,
the region contains an integer point iff some candidate T'(floor(T(alpha
z + nu))) lies in it.  The enumerative provider is unconditionally
correct at bounded scale; the merged provider fits affine-floor patterns
(vertex maps with small denominators) to coalesce pieces and re-verifies
before accepting, falling back when verification fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Optional, Sequence

from . import kernel, linalg
from .config import DEFAULT, CapExceeded, Limits
from .gf import APSet
from .polyhedra import HPolyhedron, Interval, coordinate_range, is_bounded


class UnboundedRegionError(ValueError):
    """Some K_z is unbounded; the partition contract requires bounded regions."""


@dataclass(frozen=True)
class ParametricSystem:
    A: tuple[tuple[int, ...], ...]
    alpha: tuple[int, ...]
    nu: tuple[int, ...]
    zlo: int
    zhi: int

    @staticmethod
    def make(A, alpha, nu, zlo, zhi) -> "ParametricSystem":
        A = tuple(tuple(int(x) for x in row) for row in A)
        s = ParametricSystem(A, tuple(int(x) for x in alpha),
                             tuple(int(x) for x in nu), int(zlo), int(zhi))
        if s.m != len(s.alpha) or s.m != len(s.nu):
            raise ValueError("row count mismatch")
        recession = HPolyhedron.make(A, [0] * s.m, s.n)
        if not is_bounded(recession):
            raise UnboundedRegionError("recession cone of A is nontrivial")
        return s

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.A[0]) if self.A else 0

    def b(self, z: int) -> tuple[int, ...]:
        return tuple(a * z + c for a, c in zip(self.alpha, self.nu))

    def contains(self, z: int, x: Sequence[int]) -> bool:
        return all(
            sum(c * v for c, v in zip(row, x)) <= bi
            for row, bi in zip(self.A, self.b(z))
        )

    def box_over_range(self) -> Optional[list[tuple[int, int]]]:
        """Integer box containing K_z for every z in range, or None if empty.

        Fast path: single-variable rows (the usual z_bound shape) bound each
        coordinate directly over the z interval; otherwise exact ranges come
        from LPs on the joint (x, z) polyhedron.
        """
        if self.zhi < self.zlo:
            return []
        from math import floor as _floor, ceil as _ceil

        lo = [None] * self.n
        hi = [None] * self.n
        for row, al, c0 in zip(self.A, self.alpha, self.nu):
            nz = [j for j in range(self.n) if row[j] != 0]
            if len(nz) != 1:
                continue
            j = nz[0]
            c = row[j]
            vals = [Fraction(al * z + c0, c) for z in (self.zlo, self.zhi)]
            if c > 0:
                v = _floor(max(vals))
                hi[j] = v if hi[j] is None else min(hi[j], v)
            else:
                v = _ceil(min(vals))
                lo[j] = v if lo[j] is None else max(lo[j], v)
        if all(x is not None for x in lo) and all(x is not None for x in hi):
            return list(zip(lo, hi))
        rows = [list(row) + [-a] for row, a in zip(self.A, self.alpha)]
        rhs = list(self.nu)
        rows.append([0] * self.n + [1])
        rhs.append(self.zhi)
        rows.append([0] * self.n + [-1])
        rhs.append(-self.zlo)
        joint = HPolyhedron.make(rows, rhs, self.n + 1)
        box = []
        for j in range(self.n):
            iv = coordinate_range(joint, j)
            if iv.empty:
                return None
            if iv.lo is None or iv.hi is None:
                raise UnboundedRegionError(f"coordinate {j} unbounded over the range")
            box.append((iv.int_lo(), iv.int_hi()))
        return box

    def witnesses(self) -> list[Optional[tuple[int, ...]]]:
        """Per-z lexicographically least integer point of K_z, or None."""
        if self.zhi < self.zlo:
            return []
        box = self.box_over_range()
        if box is None:
            return [None] * (self.zhi - self.zlo + 1)
        return kernel.feasible_over_range(
            [list(r) for r in self.A], list(self.alpha), list(self.nu),
            [lo for lo, _ in box], [hi for _, hi in box], self.zlo, self.zhi)

    def to_json(self) -> dict:
        return {"A": [list(r) for r in self.A], "alpha": list(self.alpha),
                "nu": list(self.nu), "z_range": [self.zlo, self.zhi]}

    @staticmethod
    def from_json(d: dict) -> "ParametricSystem":
        return ParametricSystem.make(d["A"], d["alpha"], d["nu"],
                                     d["z_range"][0], d["z_range"][1])


@dataclass(frozen=True)
class TestPair:
    """Candidate map z ↦ T'(floor(T(alpha z + nu)))."""

    T_mat: tuple[tuple[Fraction, ...], ...]   # n x m, rational
    T_off: tuple[Fraction, ...]
    Tp_mat: tuple[tuple[int, ...], ...]       # n x n, integer
    Tp_off: tuple[int, ...]

    @staticmethod
    def constant(point: Sequence[int], m: int) -> "TestPair":
        n = len(point)
        zero = tuple(tuple(Fraction(0) for _ in range(m)) for _ in range(n))
        eye = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return TestPair(zero, tuple(Fraction(x) for x in point), eye,
                        tuple(0 for _ in range(n)))

    def is_constant(self) -> bool:
        return all(x == 0 for row in self.T_mat for x in row)

    def affine_in_z(self, s: ParametricSystem):
        """(w, theta) with T(alpha z + nu) = w z + theta."""
        w = tuple(linalg.dot(row, s.alpha) for row in self.T_mat)
        theta = tuple(linalg.dot(row, s.nu) + o
                      for row, o in zip(self.T_mat, self.T_off))
        return w, theta

    def candidate(self, z: int, s: ParametricSystem) -> tuple[int, ...]:
        w, theta = self.affine_in_z(s)
        g = [wi * z + ti for wi, ti in zip(w, theta)]
        fl = [floor(v) for v in g]
        return tuple(
            sum(c * v for c, v in zip(row, fl)) + o
            for row, o in zip(self.Tp_mat, self.Tp_off)
        )

    def to_json(self) -> dict:
        return {
            "T": [[str(x) for x in row] for row in self.T_mat],
            "T_offset": [str(x) for x in self.T_off],
            "Tp": [list(row) for row in self.Tp_mat],
            "Tp_offset": list(self.Tp_off),
        }


@dataclass(frozen=True)
class PartitionPiece:
    interval: Interval
    tests: tuple[TestPair, ...]

    def int_range(self, s: ParametricSystem) -> range:
        lo = max(self.interval.int_lo(), s.zlo)
        hi = min(self.interval.int_hi(), s.zhi)
        return range(lo, hi + 1)

    def to_json(self, s: ParametricSystem, limits: Limits = DEFAULT) -> dict:
        return {
            "interval": self.interval.to_json(),
            "tests": [t.to_json() for t in self.tests],
            "feasible": piece_feasible_set(self, s, limits).to_json(),
        }


@dataclass(frozen=True)
class KPTResult:
    pieces: tuple[PartitionPiece, ...]
    provider: str

    @property
    def r(self) -> int:
        return len(self.pieces)

    def piece_at(self, z: int) -> PartitionPiece:
        for p in self.pieces:
            if p.interval.contains(z):
                return p
        raise KeyError(f"no piece contains {z}")

    def boundaries(self) -> list[Fraction]:
        """Interior transition points between consecutive pieces."""
        out = []
        for a, b in zip(self.pieces, self.pieces[1:]):
            out.append(Fraction(b.interval.lo))
        return out

    def to_json(self, s: ParametricSystem, limits: Limits = DEFAULT) -> dict:
        return {"provider": self.provider,
                "pieces": [p.to_json(s, limits) for p in self.pieces]}


# -- providers -----------------------------------------------------------------

def kpt_partition_1d(s: ParametricSystem, provider: str = "enumerative",
                     limits: Limits = DEFAULT) -> KPTResult:
    """Partition the z-range so the candidate contract holds on every piece.

    enumerative: per-z feasibility witnesses, adjacent z merged while one
    constant witness stays valid.  merged: additionally fits affine test
    maps (floors of basic solutions with small denominators) across the
    whole range and keeps the result only if verification passes.
    """
    if provider not in ("enumerative", "merged"):
        raise ValueError(f"unknown provider {provider!r}")
    if s.zhi < s.zlo:
        return KPTResult((), provider)
    wits = s.witnesses()
    if provider == "merged":
        merged = _merged_partition(s, wits, limits)
        if merged is not None and kpt_violation(merged, s) is None:
            return merged
    result = _enumerative_partition(s, wits, limits)
    return result


def _enumerative_partition(s: ParametricSystem, wits, limits: Limits) -> KPTResult:
    pieces: list[PartitionPiece] = []
    start = s.zlo
    cur: Optional[tuple[int, ...]] = wits[0] if wits else None

    def close(end: int):
        iv = Interval.half_open(start, end + 1)
        tests = (TestPair.constant(cur, s.m),) if cur is not None else ()
        pieces.append(PartitionPiece(iv, tests))

    for i, z in enumerate(range(s.zlo, s.zhi + 1)):
        if i == 0:
            continue
        w = wits[i]
        if cur is None and w is None:
            continue
        if cur is not None and s.contains(z, cur):
            continue
        if cur is not None and w is not None and tuple(w) == tuple(cur):
            continue
        close(z - 1)
        start, cur = z, w
        if len(pieces) > limits.max_pieces:
            raise CapExceeded("max_pieces", f"more than {limits.max_pieces}")
    close(s.zhi)
    return KPTResult(tuple(pieces), "enumerative")


def _vertex_test_pairs(s: ParametricSystem, limits: Limits) -> list[TestPair]:
    """Floors of basic solutions, with integer shifts, as candidate tests."""
    from itertools import combinations, product
    from math import gcd as _gcd

    D = limits.max_floor_denominator
    denom_lcm = 1  # lcm(2..D)
    for d in range(2, D + 1):
        denom_lcm = denom_lcm * d // _gcd(denom_lcm, d)

    out = []
    n, m = s.n, s.m
    eye = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    for rows in combinations(range(m), n):
        Ai = [s.A[i] for i in rows]
        inv = linalg.inverse(Ai)
        if inv is None:
            continue
        T_mat = []
        ok = True
        for r in range(n):
            row = [Fraction(0)] * m
            for c in range(n):
                row[rows[c]] = inv[r][c]
                if denom_lcm % inv[r][c].denominator != 0:
                    ok = False
            T_mat.append(tuple(row))
        if not ok:
            continue
        for shift in product((0, -1, 1), repeat=n):
            out.append(TestPair(tuple(T_mat), tuple(Fraction(0) for _ in range(n)),
                                eye, tuple(shift)))
    return out


def _merged_partition(s: ParametricSystem, wits, limits: Limits) -> Optional[KPTResult]:
    feasible = {z for z, w in zip(range(s.zlo, s.zhi + 1), wits) if w is not None}
    candidates = _vertex_test_pairs(s, limits)
    zs = range(s.zlo, s.zhi + 1)
    sets = []
    for tp in candidates:
        S = {z for z in zs if s.contains(z, tp.candidate(z, s))}
        if S and S <= feasible:
            sets.append((tp, S))
    chosen: list[TestPair] = []
    covered: set[int] = set()
    while covered != feasible:
        best = max(sets, key=lambda it: len(it[1] - covered), default=None)
        if best is None or not (best[1] - covered):
            return None
        chosen.append(best[0])
        covered |= best[1]
        if len(chosen) > limits.max_tests_per_piece:
            return None
    iv = Interval.half_open(s.zlo, s.zhi + 1)
    return KPTResult((PartitionPiece(iv, tuple(chosen)),), "merged")


# -- verification ----------------------------------------------------------------

def kpt_violation(r: KPTResult, s: ParametricSystem) -> Optional[int]:
    """First z violating the candidate contract (or coverage), else None."""
    if s.zhi < s.zlo:
        return None
    wits = s.witnesses()
    for i, z in enumerate(range(s.zlo, s.zhi + 1)):
        hits = [p for p in r.pieces if p.interval.contains(z)]
        if len(hits) != 1:
            return z
        piece = hits[0]
        lhs = wits[i] is not None
        rhs = any(s.contains(z, tp.candidate(z, s)) for tp in piece.tests)
        if lhs != rhs:
            return z
    return None


def verify_kpt(r: KPTResult, s: ParametricSystem) -> bool:
    """Exhaustive check of the iff at every integer z of the range."""
    return kpt_violation(r, s) is None


# -- feasible sets per piece -------------------------------------------------------

def piece_feasible_set(piece: PartitionPiece, s: ParametricSystem,
                       limits: Limits = DEFAULT) -> APSet:
    """{z in piece : K_z has an integer point} as arithmetic progressions.

    Within a piece the contract reduces feasibility to the test conditions;
    each condition's slack shifts by a constant vector per denominator
    period, so the satisfied z split into progressions per residue class.
    """
    lo = max(piece.interval.int_lo(), s.zlo)
    hi = min(piece.interval.int_hi(), s.zhi)
    if hi < lo:
        return APSet(())
    progs: list[tuple[int, int, int]] = []
    for tp in piece.tests:
        w, _theta = tp.affine_in_z(s)
        L = linalg.lcm_list([x.denominator for x in w]) if w else 1
        if L > limits.max_period:
            raise CapExceeded("max_period", f"test period {L}")
        Lw = [int(x * L) for x in w]
        delta_cand = [
            sum(c * v for c, v in zip(row, Lw)) for row in tp.Tp_mat
        ]
        # slack drift per period: L alpha - A (Tp_mat (L w))
        D = [
            L * s.alpha[i] - sum(s.A[i][j] * delta_cand[j] for j in range(s.n))
            for i in range(s.m)
        ]
        for rclass in range(min(L, hi - lo + 1)):
            z0 = lo + rclass
            if z0 > hi:
                break
            K = (hi - z0) // L
            cand0 = tp.candidate(z0, s)
            sigma0 = [
                s.alpha[i] * z0 + s.nu[i]
                - sum(s.A[i][j] * cand0[j] for j in range(s.n))
                for i in range(s.m)
            ]
            kmin, kmax = 0, K
            ok = True
            for i in range(s.m):
                if D[i] == 0:
                    if sigma0[i] < 0:
                        ok = False
                        break
                elif D[i] > 0:
                    kmin = max(kmin, ceil(Fraction(-sigma0[i], D[i])))
                else:
                    kmax = min(kmax, floor(Fraction(sigma0[i], -D[i])))
            if ok and kmin <= kmax:
                progs.append((z0 + kmin * L, L, kmax - kmin + 1))
    return APSet.make(progs, limits)


def base_case_decide(s: ParametricSystem, provider: str = "enumerative",
                     limits: Limits = DEFAULT) -> bool:
    """For-all z, exists x decision: partition, then check full coverage."""
    if s.zhi < s.zlo:
        return True
    part = kpt_partition_1d(s, provider, limits)
    total = 0
    for piece in part.pieces:
        total += piece_feasible_set(piece, s, limits).cardinality()
    return total == s.zhi - s.zlo + 1


# -- floor-condition fragments ------------------------------------------------------

@dataclass(frozen=True)
class AffExpr:
    """Rational affine expression over named symbols, rendered as authored."""

    terms: tuple[tuple[Optional[str], Fraction], ...]  # (symbol or None, coeff)

    @staticmethod
    def build(*terms) -> "AffExpr":
        return AffExpr(tuple((sym, Fraction(c)) for sym, c in terms))

    def value(self, env: dict[str, Fraction]) -> Fraction:
        out = Fraction(0)
        for sym, c in self.terms:
            out += c if sym is None else c * env[sym]
        return out

    def render(self) -> str:
        parts = []
        for sym, c in self.terms:
            if sym is None:
                txt = str(c)
            elif c == 1:
                txt = sym
            elif c == -1:
                txt = f"-{sym}"
            elif c.denominator == 1:
                txt = f"{c}{sym}"
            elif c.numerator == 1:
                txt = f"{sym}/{c.denominator}"
            elif c.numerator == -1:
                txt = f"-{sym}/{c.denominator}"
            else:
                txt = f"{c.numerator}{sym}/{c.denominator}"
            parts.append(txt)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


@dataclass(frozen=True)
class RatIneq:
    lhs: AffExpr
    rel: str  # '<=' | '>' | '<'
    rhs: AffExpr

    def holds(self, env: dict[str, Fraction]) -> bool:
        l, r = self.lhs.value(env), self.rhs.value(env)
        if self.rel == "<=":
            return l <= r
        if self.rel == "<":
            return l < r
        return l > r

    def render(self) -> str:
        return f"{self.lhs.render()} {self.rel} {self.rhs.render()}"


@dataclass(frozen=True)
class FloorFragment:
    """Quantified encoding of 'T'(floor(T b)) lands in the region'.

    polarity 'E': exists t with the conjunction of clauses; polarity 'A':
    for all t, the disjunction of clauses.  Clause lists follow the same
    order in both: the floor sandwich rows first, then the region rows.
    """

    polarity: str
    tvars: tuple[str, ...]
    clauses: tuple[RatIneq, ...]
    param: str

    def render(self) -> str:
        op = "exists" if self.polarity == "E" else "forall"
        brackets = "{}" if self.polarity == "E" else "[]"
        body = " ; ".join(c.render() for c in self.clauses)
        tlist = ", ".join(self.tvars)
        return f"{op} {tlist} : {brackets[0]} {body} {brackets[1]}"

    def holds(self, param_value, tvalues: Sequence[int]) -> bool:
        env = {self.param: Fraction(param_value)}
        env.update({tv: Fraction(v) for tv, v in zip(self.tvars, tvalues)})
        vals = [c.holds(env) for c in self.clauses]
        return all(vals) if self.polarity == "E" else any(vals)

    def evaluate(self, param_value, tbox: tuple[int, int]) -> bool:
        """Quantify t over a box (must contain the floor values)."""
        from itertools import product

        lo, hi = tbox
        for tv in product(range(lo, hi + 1), repeat=len(self.tvars)):
            h = self.holds(param_value, tv)
            if self.polarity == "E" and h:
                return True
            if self.polarity == "A" and not h:
                return False
        return self.polarity == "A"


def build_floor_fragment(t_exprs: Sequence[AffExpr], cond_rows: Sequence[RatIneq],
                         polarity: str, param: str = "b",
                         tnames: Optional[Sequence[str]] = None) -> FloorFragment:
    """Fragment from the floor sandwich around affine expressions.

    Existential polarity: t <= T and t > T - 1, conjoined with the rows;
    universal polarity: t > T or t <= T - 1, disjoined with the rows.
    """
    n = len(t_exprs)
    tvars = tuple(tnames) if tnames is not None else (
        ("t",) if n == 1 else tuple(f"t{i + 1}" for i in range(n)))
    clauses = []
    for tv, expr in zip(tvars, t_exprs):
        tm = AffExpr.build((tv, 1))
        minus1 = AffExpr(expr.terms + ((None, Fraction(-1)),))
        if polarity == "E":
            clauses.append(RatIneq(tm, "<=", expr))
            clauses.append(RatIneq(tm, ">", minus1))
        else:
            clauses.append(RatIneq(tm, ">", expr))
            clauses.append(RatIneq(tm, "<=", minus1))
    clauses.extend(cond_rows)
    return FloorFragment(polarity, tvars, tuple(clauses), param)


def floor_condition_to_formula(tp: TestPair, s: ParametricSystem,
                               polarity: str) -> FloorFragment:
    """Fragment over fresh t equivalent to 'the candidate lies in K_z'."""
    w, theta = tp.affine_in_z(s)
    t_exprs = [AffExpr.build(("z", wi), (None, ti)) if wi != 0
               else AffExpr.build((None, ti))
               for wi, ti in zip(w, theta)]
    tvars = tuple(f"t{i + 1}" for i in range(s.n)) if s.n > 1 else ("t",)
    rows = []
    for i in range(s.m):
        # row: A_i · (Tp_mat t + Tp_off) <= alpha_i z + nu_i
        coeffs = []
        for j in range(s.n):
            cj = sum(s.A[i][jj] * tp.Tp_mat[jj][j] for jj in range(s.n))
            if cj:
                coeffs.append((tvars[j], Fraction(cj)))
        const = sum(s.A[i][jj] * tp.Tp_off[jj] for jj in range(s.n))
        if const or not coeffs:
            coeffs.append((None, Fraction(const)))
        lhs = AffExpr(tuple(coeffs))
        rhs = (AffExpr.build(("z", s.alpha[i]), (None, s.nu[i]))
               if s.alpha[i] else AffExpr.build((None, s.nu[i])))
        rows.append(RatIneq(lhs, "<=", rhs))
    return build_floor_fragment(t_exprs, rows, polarity, param="z", tnames=tvars)


# -- piece conditions for quantifier elimination --------------------------------------

@dataclass(frozen=True)
class PieceCondition:
    """Γ(z, u): for z in the piece, (∃x in K_z) iff (∀u) Γ holds.

    u concatenates one fresh integer vector per non-constant test; constant
    tests contribute their region rows directly.  The disjunction is true
    at any u avoiding some floor value, so quantifying u over any box that
    contains all floor values is equivalent to quantifying over all of Z.
    """

    piece: PartitionPiece
    system: ParametricSystem

    def u_layout(self) -> list[tuple[int, int]]:
        """(test index, coordinate) per u position."""
        out = []
        for j, tp in enumerate(self.piece.tests):
            if not tp.is_constant():
                for i in range(self.system.n):
                    out.append((j, i))
        return out

    @property
    def u_dim(self) -> int:
        return len(self.u_layout())

    def u_bounds(self) -> list[tuple[int, int]]:
        """Box containing every floor value over the piece (within range)."""
        s = self.system
        lo = max(self.piece.interval.int_lo(), s.zlo)
        hi = min(self.piece.interval.int_hi(), s.zhi)
        out = []
        for j, i in self.u_layout():
            tp = self.piece.tests[j]
            w, theta = tp.affine_in_z(s)
            vals = [floor(w[i] * z + theta[i]) for z in (lo, hi)]
            out.append((min(vals), max(vals)))
        return out

    def matrix(self, zref, unames: Sequence):
        """Boolean combination over integer atoms in (z, u)."""
        from .formula.ast import And, Atom, FALSE, LinearAtom, Or

        s = self.system
        layout = self.u_layout()
        pos = {li: p for p, li in enumerate(layout)}
        branches = []
        for j, tp in enumerate(self.piece.tests):
            w, theta = tp.affine_in_z(s)
            if tp.is_constant():
                cand = tp.candidate(s.zlo, s)  # constant in z
                rows = []
                for i in range(s.m):
                    lhs = sum(s.A[i][jj] * cand[jj] for jj in range(s.n))
                    rows.append(Atom(LinearAtom.make(
                        {zref: -s.alpha[i]}, s.nu[i] - lhs)))
                branches.append(And(tuple(rows)) if rows else FALSE)
                continue
            disj = []
            urefs = [unames[pos[(j, i)]] for i in range(s.n)]
            for i in range(s.n):
                # u_i != floor(w_i z + theta_i), as two strict sides
                den = linalg.lcm_list([w[i].denominator, theta[i].denominator])
                p = int(w[i] * den)
                c = int(theta[i] * den)
                # den*u > p z + c  <=>  -den*u + p z <= -c - 1
                disj.append(Atom(LinearAtom.make(
                    {urefs[i]: -den, zref: p}, -c - 1)))
                # den*u <= p z + c - den
                disj.append(Atom(LinearAtom.make(
                    {urefs[i]: den, zref: -p}, c - den)))
            rows = []
            for i in range(s.m):
                coeffs = {}
                for jj in range(s.n):
                    cc = sum(s.A[i][l] * tp.Tp_mat[l][jj] for l in range(s.n))
                    if cc:
                        coeffs[urefs[jj]] = cc
                const = sum(s.A[i][l] * tp.Tp_off[l] for l in range(s.n))
                coeffs[zref] = coeffs.get(zref, 0) - s.alpha[i]
                rows.append(Atom(LinearAtom.make(coeffs, s.nu[i] - const)))
            disj.append(And(tuple(rows)))
            branches.append(Or(tuple(disj)))
        if not branches:
            return FALSE
        return Or(tuple(branches)) if len(branches) > 1 else branches[0]


def piece_condition(piece: PartitionPiece, s: ParametricSystem) -> PieceCondition:
    return PieceCondition(piece, s)

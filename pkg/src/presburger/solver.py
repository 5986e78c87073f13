"""Decision and counting by partition-driven quantifier elimination.

decide() normalizes a bounded sentence to disassociated form, partitions
the parameter line of the last-but-one variable, splits the outermost
variable's segments into boundary-straddling values (recursed by
substitution, one quantifier fewer) and piece-interior runs (innermost
existential block replaced by a universally quantified candidate
condition, then merged with the neighbouring universal block), down to
the two-quantifier base case.  count_gf() runs the same recursion with
the outermost variable free, emitting generating functions instead of
truth values, with arithmetic-progression sets at the base.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Optional

from . import gf as gflib
from .config import DEFAULT, CapExceeded, Limits
from .formula.ast import (
    And,
    Atom,
    BoolExpr,
    Const,
    FALSE,
    Formula,
    FormulaError,
    LinearAtom,
    Or,
    QuantBlock,
    UnboundedError,
    evaluate,
    negate_formula,
    substitute,
)
from .kannan import (
    ParametricSystem,
    PartitionPiece,
    PieceCondition,
    kpt_partition_1d,
    piece_condition,
    piece_feasible_set,
)
from .normalize import (
    DisassociatedForm,
    _chain_quantifiers,
    _negate_conj,
    absorb_singleton_guards,
    normalize_pipeline,
    to_dnf,
)
from .polyhedra import Interval, lattice_feasible_point


@dataclass
class TraceNode:
    kind: str                     # decide | count
    k: int
    action: str                   # ground/empty-block/dualize/feasibility/base/split
    result: object = None
    r: int = 0
    f2_size: int = 0
    f1_ranges: int = 0
    children: list["TraceNode"] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "kind": self.kind, "k": self.k, "action": self.action,
            "result": (str(self.result) if not isinstance(self.result, (bool, int))
                       else self.result),
            "pieces": self.r, "f2_size": self.f2_size,
            "f1_ranges": self.f1_ranges,
            "children": [c.to_json() for c in self.children],
        }


@dataclass
class DecisionTrace:
    root: Optional[TraceNode] = None
    nodes: int = 0
    f2_bound_ok: bool = True

    def to_json(self) -> dict:
        return {"nodes": self.nodes, "f2_bound_ok": self.f2_bound_ok,
                "tree": self.root.to_json() if self.root else None}


@dataclass(frozen=True)
class F1F2Split:
    """Outermost-variable split: straddlers and per-piece interior runs."""

    f2: tuple[int, ...]
    f1: tuple[tuple[int, int, int], ...]  # (piece index, z1 lo, z1 hi)


class Solver:
    def __init__(self, provider: str = "enumerative", style: str = "indicator",
                 limits: Limits = DEFAULT):
        self.provider = provider
        self.style = style
        self.limits = limits
        self.trace = DecisionTrace()
        self._work = 0
        self._stack: list[TraceNode] = []

    def _node(self, kind: str, k: int, action: str) -> TraceNode:
        self._work += 1
        if self._work > self.limits.work_budget:
            raise CapExceeded("work_budget", f"{self._work} nodes")
        n = TraceNode(kind, k, action)
        self.trace.nodes += 1
        if self._stack:
            self._stack[-1].children.append(n)
        elif self.trace.root is None:
            self.trace.root = n
        return n

    # -- decision ---------------------------------------------------------------

    def decide(self, f: Formula, _depth: int = 0) -> bool:
        if f.free is not None:
            raise FormulaError("decide expects a sentence")
        if not f.all_bounded():
            raise UnboundedError("bounded sentence required")
        if _depth > self.limits.max_depth + len(f.prefix):
            raise CapExceeded("max_depth", "recursion too deep")
        f = absorb_singleton_guards(f)
        node = self._node("decide", len(f.prefix), "")
        self._stack.append(node)
        try:
            result = self._decide_inner(f, node, _depth)
        finally:
            self._stack.pop()
        node.result = result
        return result

    def _decide_inner(self, f: Formula, node: TraceNode, depth: int) -> bool:
        k = len(f.prefix)
        # outermost empty block settles the sentence
        for b in f.prefix:
            if b.domain_size() == 0:
                node.action = "empty-block"
                return b.quantifier == "A"
        if k == 0:
            node.action = "ground"
            return evaluate(f.matrix, {})
        if f.prefix[-1].quantifier == "A":
            node.action = "dualize"
            child = self.decide(negate_formula(f), depth + 1)
            return not child
        if k == 1:
            node.action = "feasibility"
            return self._feasible_exists(f)
        form, _ = normalize_pipeline(f, self.style, self.limits)
        sys = self._parametric_system(form)
        part = kpt_partition_1d(sys, self.provider, self.limits)
        node.r = part.r
        if k == 2:
            node.action = "base"
            total = 0
            for piece in part.pieces:
                total += piece_feasible_set(piece, sys, self.limits).cardinality()
            return total == sys.zhi - sys.zlo + 1
        node.action = "split"
        split = self._split(form, part)
        node.f2_size = len(split.f2)
        node.f1_ranges = len(split.f1)
        if len(split.f2) > max(part.r, 1):
            self.trace.f2_bound_ok = False
            raise AssertionError(
                f"straddler bound violated: {len(split.f2)} > {part.r}")
        outer_exists = form.parity == "odd"
        for v in split.f2:
            sv = self._substituted_sentence(form, v)
            res = self.decide(sv, depth + 1)
            if outer_exists and res:
                return True
            if not outer_exists and not res:
                return False
        for pi, lo, hi in split.f1:
            si = self._reduced_sentence(form, sys, part.pieces[pi], lo, hi)
            res = self.decide(si, depth + 1)
            if outer_exists and res:
                return True
            if not outer_exists and not res:
                return False
        return not outer_exists

    def _feasible_exists(self, f: Formula) -> bool:
        d = to_dnf(f, self.limits)
        for system in d.systems:
            if lattice_feasible_point(system) is not None:
                return True
        return False

    # -- machinery shared by decide and count ------------------------------------

    def _parametric_system(self, form: DisassociatedForm) -> ParametricSystem:
        k = form.k()
        zprev = (f"z{k - 1}", 0)
        zk = f"z{k}"
        rows, alpha, nu = [], [], []
        for a in form.lambda_atoms:
            row = [0] * form.zk_dim
            al = 0
            for r, c in a.coeffs:
                if r == zprev:
                    al -= c
                elif r[0] == zk:
                    row[r[1]] = c
                else:
                    raise FormulaError(f"lambda atom mentions {r}")
            rows.append(row)
            alpha.append(al)
            nu.append(a.rhs)
        zr = 2 ** form.bit_lengths[-1] - 1 if form.bit_lengths else 0
        return ParametricSystem.make(rows, alpha, nu, 0, zr)

    def _split(self, form: DisassociatedForm, part) -> F1F2Split:
        """Segments I_{z1} fully inside one piece (f1) versus straddlers (f2).

        A segment [z1*seg, (z1+1)*seg) lies in a piece iff its left endpoint
        respects the piece's lower bound and its supremum does not exceed
        the upper one (the supremum itself is excluded, so openness of the
        piece's upper end does not matter).
        """
        t1 = form.bit_lengths[0]
        tk1 = form.bit_lengths[-1]
        seg = 2 ** (tk1 - t1)
        f1: list[tuple[int, int, int]] = []
        covered: set[int] = set()
        for pi, piece in enumerate(part.pieces):
            iv = piece.interval
            lo_req = Fraction(iv.lo)
            hi_req = Fraction(iv.hi)
            z1lo = ceil(lo_req / seg)
            if iv.lo_open and Fraction(z1lo) * seg == lo_req:
                z1lo += 1
            # max z1 with (z1+1)*seg <= hi
            z1hi = floor(hi_req / seg) - 1
            z1lo = max(z1lo, 0)
            z1hi = min(z1hi, 2**t1 - 1)
            if z1lo <= z1hi:
                f1.append((pi, z1lo, z1hi))
                covered.update(range(z1lo, z1hi + 1))
        f2 = tuple(z1 for z1 in range(2**t1) if z1 not in covered)
        return F1F2Split(f2, tuple(f1))

    def _substituted_sentence(self, form: DisassociatedForm, v: int) -> Formula:
        """Fix z1 = v: one quantifier fewer, always a sentence."""
        full = form.to_formula()
        blocks = full.prefix if full.free is None else (full.free,) + full.prefix
        matrix = substitute(full.matrix, {(blocks[0].name, 0): v})
        return Formula(None, tuple(blocks[1:]), matrix)

    def _reduced_sentence(self, form: DisassociatedForm, sys: ParametricSystem,
                          piece: PartitionPiece, z1lo: int, z1hi: int,
                          free_first: bool = False) -> Formula:
        """Piece-interior sentence: innermost exists replaced by forall-u."""
        k = form.k()
        quants = _chain_quantifiers(k, form.parity)
        pc = piece_condition(piece, sys)
        zname = f"z{k - 1}"
        zref = (zname, 0)
        udim = pc.u_dim
        unames = [(zname, 1 + i) for i in range(udim)]
        payload: BoolExpr = pc.matrix(zref, unames)
        # out-of-range z_{k-1} values satisfy the merged universal block
        zr = 2 ** form.bit_lengths[-1]
        oob = [Atom(LinearAtom.make({zref: -1}, -zr)),
               Atom(LinearAtom.make({zref: 1}, -1))]
        payload = Or(tuple(oob) + (payload,))
        body = payload
        for j in range(k - 2, 0, -1):
            r1, r2 = form.relations[j - 1]
            rel = And((Atom(r1), Atom(r2)))
            if quants[j] == "A":
                body = Or((_negate_conj(rel), body))
            else:
                body = And((rel, body))
        # merged universal block bounds: hull of z_{k-1} box and u boxes
        ubounds = pc.u_bounds()
        lo = min([0] + [b[0] for b in ubounds])
        hi = max([zr - 1] + [b[1] for b in ubounds])
        blocks = []
        first_q = None if free_first else quants[0]
        blocks.append(QuantBlock(first_q, "z1", 1, (z1lo, z1hi)))
        for j in range(1, k - 2):
            blocks.append(QuantBlock(quants[j], f"z{j + 1}", 1,
                                     (0, 2 ** form.bit_lengths[j] - 1)))
        blocks.append(QuantBlock("A", zname, 1 + udim, (lo, hi)))
        if free_first:
            return Formula(blocks[0], tuple(blocks[1:]), body)
        return Formula(None, tuple(blocks), body)

    # -- counting -----------------------------------------------------------------

    def count_gf(self, f: Formula, N: int) -> gflib.ShortGF:
        if f.free is None:
            raise FormulaError("count_gf expects a free block")
        if not all(b.bounded for b in f.prefix):
            raise UnboundedError("bounded quantifiers required")
        n1 = f.free.dim
        # shift x <- x + N so the free domain is [0, 2N]
        from .formula.ast import shift_vars

        deltas = {(f.free.name, j): -N for j in range(n1)}
        matrix = shift_vars(f.matrix, deltas)
        flo, fhi = 0, 2 * N
        if f.free.bound is not None:
            blo, bhi = f.free.bound
            flo, fhi = max(flo, blo + N), min(fhi, bhi + N)
        if fhi < flo:
            return gflib.ShortGF.zero(n1)
        ell = max(1, fhi.bit_length())
        guards: list[BoolExpr] = []
        for j in range(n1):
            guards.append(Atom(LinearAtom.make({(f.free.name, j): 1}, fhi)))
            guards.append(Atom(LinearAtom.make({(f.free.name, j): -1}, -flo)))
        matrix = And(tuple(guards) + (matrix,))
        free = QuantBlock(None, f.free.name, n1, (0, 2**ell - 1))
        shifted = Formula(free, f.prefix, matrix)
        g = self._gf_free(shifted)
        assert g.nvars == n1
        return gflib.shift_exponents(g, tuple(-N for _ in range(n1)))

    def _gf_free(self, f: Formula, _depth: int = 0) -> gflib.ShortGF:
        """Indicator GF of the satisfying free assignments within the box."""
        if _depth > self.limits.max_depth + len(f.prefix) + 2:
            raise CapExceeded("max_depth", "recursion too deep")
        f = absorb_singleton_guards(f)
        node = self._node("count", len(f.prefix), "")
        n1 = f.free.dim
        flo, fhi = f.free.bound
        # an empty quantified block settles everything
        for b in f.prefix:
            if b.domain_size() == 0:
                node.action = "empty-block"
                if b.quantifier == "A":
                    return self._free_box_gf(f)
                return gflib.ShortGF.zero(n1)
        if f.prefix and f.prefix[-1].quantifier == "A":
            node.action = "complement"
            neg = negate_formula(Formula(f.free, f.prefix, f.matrix))
            inner = self._gf_free(neg, _depth + 1)
            return gflib.gf_add(self._free_box_gf(f), gflib.gf_scale(-1, inner))
        if not f.prefix:
            # ground matrix over the free block: go through a dummy witness
            dummy = QuantBlock("E", "__e", 1, (0, 0))
            f = Formula(f.free, (dummy,), f.matrix)
        form, _ = normalize_pipeline(f, self.style, self.limits)
        node.action = "pipeline"
        g1 = self._gf_packed(form, _depth)
        if n1 == 1:
            return g1
        ell = (fhi + 1).bit_length() - 1
        return gflib.unpack(g1, n1, ell, self.limits)

    def _free_box_gf(self, f: Formula) -> gflib.ShortGF:
        lo, hi = f.free.bound
        n1 = f.free.dim
        if n1 == 1:
            return gflib.interval_gf(lo, hi)
        # product of interval indicators, numerators expanded
        terms = [(1, (), ())]
        units = [tuple(int(i == j) for i in range(n1)) for j in range(n1)]
        out = []
        from itertools import product

        for choice in product((0, 1), repeat=n1):
            c = (-1) ** sum(choice)
            a = tuple(lo + ch * (hi - lo + 1) for ch in choice)
            out.append((c, a, tuple(units)))
        return gflib.ShortGF.make(n1, out)

    def _gf_packed(self, form: DisassociatedForm, depth: int) -> gflib.ShortGF:
        """1-variable GF over the packed free singleton z1 in [0, 2^{t_1})."""
        sys = self._parametric_system(form)
        part = kpt_partition_1d(sys, self.provider, self.limits)
        k = form.k()
        node = self._node("count", k, "packed")
        node.r = part.r
        if k == 2:
            # the free singleton is the parameter itself
            progs = []
            for piece in part.pieces:
                progs.extend(
                    piece_feasible_set(piece, sys, self.limits).progressions)
            return gflib.apset_to_gf(gflib.APSet.make(progs, self.limits))
        split = self._split(form, part)
        node.f2_size = len(split.f2)
        node.f1_ranges = len(split.f1)
        if len(split.f2) > max(part.r, 1):
            self.trace.f2_bound_ok = False
            raise AssertionError(
                f"straddler bound violated: {len(split.f2)} > {part.r}")
        total = gflib.ShortGF.zero(1)
        points = []
        for v in split.f2:
            sv = self._substituted_sentence(form, v)
            if self.decide(sv, depth + 1):
                points.append((v,))
        total = gflib.gf_add(total, gflib.ShortGF.monomials(1, points))
        for pi, lo, hi in split.f1:
            fi = self._reduced_sentence(form, sys, part.pieces[pi], lo, hi,
                                        free_first=True)
            gi = self._gf_free(fi, depth + 1)
            total = gflib.gf_add(total, gi)
        return total


def decide(f: Formula, provider: str = "enumerative", style: str = "indicator",
           limits: Limits = DEFAULT, trace: Optional[DecisionTrace] = None) -> bool:
    s = Solver(provider, style, limits)
    out = s.decide(f)
    if trace is not None:
        trace.root = s.trace.root
        trace.nodes = s.trace.nodes
        trace.f2_bound_ok = s.trace.f2_bound_ok
    return out


def count_gf(f: Formula, N: int, provider: str = "enumerative",
             style: str = "indicator", limits: Limits = DEFAULT,
             trace: Optional[DecisionTrace] = None) -> gflib.ShortGF:
    s = Solver(provider, style, limits)
    out = s.count_gf(f, N)
    if trace is not None:
        trace.root = s.trace.root
        trace.nodes = s.trace.nodes
        trace.f2_bound_ok = s.trace.f2_bound_ok
    return out


def count(f: Formula, N: int, provider: str = "enumerative",
          style: str = "indicator", limits: Limits = DEFAULT) -> int:
    g = count_gf(f, N, provider, style, limits)
    value = gflib.count(g, limits)
    assert value.denominator == 1
    return int(value)

"""Reduction pipeline to disassociated form.

Stages: Boolean matrix to a disjunction of conjunctive systems; union of
the systems to one system via a lifted convex hull with label coordinates;
vector blocks to singletons by binary concatenation; finally chained floor
relations so the linear system touches only the last two variables.
Every stage preserves truth over the bounded domains, and every stage is
recorded in a trace that can be replayed against the brute-force oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

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
    TRUE,
    VarRef,
    iter_atoms,
    rename_vars,
    shift_vars,
    substitute,
    to_le_nnf,
)
from .polyhedra import (
    EmptyPolyhedronError,
    HPolyhedron,
    facets_from_vertices,
    is_empty,
    vertices_from_facets,
)


@dataclass(frozen=True)
class DNFSystems:
    """Disjunction of conjunctive ≤-systems over the concatenated variables."""

    systems: tuple[HPolyhedron, ...]
    layout: tuple[VarRef, ...]  # column order

    @property
    def t(self) -> int:
        return len(self.systems)


@dataclass(frozen=True)
class DisassociatedForm:
    """Chain z_1 .. z_{k-1} of singletons plus the vector block z_k.

    relations[j] encodes z_{j+1} = floor(z_{j+2} / 2^{ell_{j+2}}) as a pair
    of integer atoms; lambda_system touches only (z_{k-1}, z_k).  parity is
    'odd' when the chain starts with an existential quantifier.
    """

    bit_lengths: tuple[int, ...]        # t_1 < t_2 < ... < t_{k-1}
    zk_dim: int
    zk_bits: tuple[int, ...]            # bit bound per z_k coordinate
    relations: tuple[tuple[LinearAtom, LinearAtom], ...]
    lambda_atoms: tuple[LinearAtom, ...]
    parity: str                         # 'odd' | 'even'
    free_first: bool = False            # z_1 unquantified (formula case)

    def k(self) -> int:
        return len(self.bit_lengths) + 1

    def chain_names(self) -> list[str]:
        return [f"z{i + 1}" for i in range(self.k())]

    def blocks(self) -> tuple[Optional[QuantBlock], tuple[QuantBlock, ...]]:
        """(free, prefix) realizing the chain with alternating quantifiers."""
        k = self.k()
        quants = _chain_quantifiers(k, self.parity)
        blocks = []
        for i, t in enumerate(self.bit_lengths):
            blocks.append(QuantBlock(quants[i], f"z{i + 1}", 1, (0, 2**t - 1)))
        zk = QuantBlock("E", f"z{k}", self.zk_dim,
                        (0, 2**max(self.zk_bits) - 1))
        blocks.append(zk)
        if self.free_first:
            free = QuantBlock(None, blocks[0].name, 1, blocks[0].bound)
            return free, tuple(blocks[1:])
        return None, tuple(blocks)

    def matrix(self) -> BoolExpr:
        """Prenex matrix of the nested template.

        Under a universal z_{j+1} the relation enters as ¬R ∨ rest; under an
        existential one as R ∧ rest.  Hoisting the chain quantifiers out of
        the template is exact because every domain is nonempty.
        """
        k = self.k()
        quants = _chain_quantifiers(k, self.parity)
        body: BoolExpr = And(tuple(Atom(a) for a in self.lambda_atoms))
        for j in range(k - 2, 0, -1):
            r1, r2 = self.relations[j - 1]
            rel = And((Atom(r1), Atom(r2)))
            if quants[j] == "A":
                notrel = _negate_conj(rel)
                body = Or((notrel, body))
            else:
                body = And((rel, body))
        # conjoin the z_k coordinate boxes at the top: redundant inside the
        # lambda branch, exact on the others (they do not mention z_k), and
        # it lets evaluators restrict the innermost existential box
        bounds = []
        name = f"z{k}"
        for j, ell in enumerate(self.zk_bits):
            bounds.append(Atom(LinearAtom.make({(name, j): 1}, 2**ell - 1)))
            bounds.append(Atom(LinearAtom.make({(name, j): -1}, 0)))
        return And(tuple(bounds) + (body,))

    def to_formula(self) -> Formula:
        free, prefix = self.blocks()
        return Formula(free, prefix, self.matrix())


def _chain_quantifiers(k: int, parity: str) -> list[str]:
    first = "E" if parity == "odd" else "A"
    out = []
    q = first
    for _ in range(k):
        out.append(q)
        q = "A" if q == "E" else "E"
    return out


def _negate_conj(e: And) -> BoolExpr:
    from .formula.ast import negate_atom

    return Or(tuple(negate_atom(c.atom) for c in e.children))


@dataclass
class PipelineTrace:
    """Formula snapshots after each stage, for oracle replay and the CLI."""

    stages: list[tuple[str, Formula]] = field(default_factory=list)
    dnf_count: int = 0
    hull_dim: int = 0
    hull_style: str = ""

    def add(self, name: str, f: Formula):
        self.stages.append((name, f))

    def to_json(self) -> dict:
        from .formula.parse import pretty

        return {
            "stages": [{"name": n, "formula": pretty(f)} for n, f in self.stages],
            "dnf_count": self.dnf_count,
            "hull_dim": self.hull_dim,
            "hull_style": self.hull_style,
        }


# -- stage 0: power-of-two boxes ---------------------------------------------------

def widen_to_pow2(f: Formula) -> Formula:
    """Shift every block to start at 0 and widen widths to powers of two.

    Guards keep the truth value: an out-of-range existential (or free)
    coordinate falsifies the matrix, an out-of-range universal coordinate
    satisfies it.  Downstream stages then see exact [0, 2^ell) boxes and a
    matrix whose extra structure folds into the DNF.
    """
    if not f.all_bounded():
        raise FormulaError("bounded blocks required")
    matrix = f.matrix
    deltas = {}
    for b in f.blocks():
        lo, _ = b.bound
        if lo != 0:
            for j in range(b.dim):
                deltas[(b.name, j)] = lo
    if deltas:
        matrix = shift_vars(matrix, deltas)
    good: list[BoolExpr] = []
    bad: list[BoolExpr] = []
    new_blocks = []
    for b in f.blocks():
        lo, hi = b.bound
        ell = _pow2_bits(lo, hi)
        width = hi - lo
        new_blocks.append(QuantBlock(b.quantifier, b.name, b.dim,
                                     (0, 2**ell - 1)))
        if width + 1 == 2**ell:
            continue
        for j in range(b.dim):
            if b.quantifier == "A":
                bad.append(Atom(LinearAtom.make({(b.name, j): -1}, -(width + 1))))
            else:
                good.append(Atom(LinearAtom.make({(b.name, j): 1}, width)))
    if good:
        matrix = And(tuple([matrix] + good))
    if bad:
        matrix = Or(tuple(bad + [matrix]))
    free = new_blocks[0] if f.free is not None else None
    prefix = tuple(new_blocks[1:]) if f.free is not None else tuple(new_blocks)
    return Formula(free, prefix, matrix)


# -- stage 1: DNF ----------------------------------------------------------------

def _distribute(e: BoolExpr) -> list[frozenset[LinearAtom]]:
    """DNF of a negation-free and/or tree of ≤-atoms, deduplicated."""
    if isinstance(e, Const):
        return [frozenset()] if e.value else []
    if isinstance(e, Atom):
        return [frozenset([e.atom])]
    if isinstance(e, Or):
        out = []
        seen = set()
        for c in e.children:
            for s in _distribute(c):
                if s not in seen:
                    seen.add(s)
                    out.append(s)
        return out
    assert isinstance(e, And)
    acc: list[frozenset[LinearAtom]] = [frozenset()]
    for c in e.children:
        branch = _distribute(c)
        nxt = []
        seen = set()
        for s1 in acc:
            for s2 in branch:
                u = s1 | s2
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        acc = nxt
    return acc


def to_dnf(f: Formula, limits: Limits = DEFAULT) -> DNFSystems:
    """Matrix as a union of polytopes over the concatenated variables.

    Negations and strict or equality atoms are eliminated first; every
    disjunct is intersected with the quantifier box bounds so it is bounded.
    """
    if not f.all_bounded():
        raise FormulaError("bounded blocks required")
    layout = tuple(r for b in f.blocks() for r in b.refs())
    col = {r: i for i, r in enumerate(layout)}
    n = len(layout)
    clean = to_le_nnf(f.matrix)
    disjuncts = _distribute(clean)
    cap = max(2 ** max(1, f.sentence_class().a), limits.max_dnf_systems)
    if len(disjuncts) > cap:
        raise CapExceeded("max_dnf_systems", f"{len(disjuncts)} disjuncts")
    box_rows, box_rhs = [], []
    for b in f.blocks():
        lo, hi = b.bound
        for j in range(b.dim):
            e = [0] * n
            e[col[(b.name, j)]] = 1
            box_rows.append(e[:])
            box_rhs.append(hi)
            e[col[(b.name, j)]] = -1
            box_rows.append(e)
            box_rhs.append(-lo)
    def akey(a: LinearAtom):
        return (a.coeffs, a.rhs, a.rel)

    systems = []
    for s in sorted(disjuncts, key=lambda d: sorted(map(akey, d))):
        rows = [r[:] for r in box_rows]
        rhs = list(box_rhs)
        for a in sorted(s, key=akey):
            row = [0] * n
            for r, c in a.coeffs:
                row[col[r]] = c
            rows.append(row)
            rhs.append(a.rhs)
        systems.append(HPolyhedron.make(rows, rhs, n))
    return DNFSystems(tuple(systems), layout)


def dnf_to_formula(f: Formula, d: DNFSystems) -> Formula:
    """Rebuild a formula whose matrix is the explicit disjunction of systems."""
    parts = []
    for sys in d.systems:
        atoms = []
        for row, rhs in zip(sys.A, sys.b):
            coeffs = {d.layout[j]: int(row[j]) for j in range(len(d.layout))
                      if row[j] != 0}
            atoms.append(Atom(LinearAtom.make(coeffs, int(rhs))))
        parts.append(And(tuple(atoms)) if atoms else TRUE)
    matrix = Or(tuple(parts)) if parts else FALSE
    return Formula(f.free, f.prefix, matrix)


# -- stage 2: one system via lifted hulls ------------------------------------------

@dataclass(frozen=True)
class LiftedUnion:
    """R with label columns first: (label, x) ∈ R ∩ Z^m iff x ∈ ∪ P_j ∩ Z^n."""

    polytope: HPolyhedron         # over (labels, active columns)
    label_dim: int
    labels: tuple[tuple[int, ...], ...]
    active: tuple[int, ...]       # indices into the DNF layout
    layout: tuple[VarRef, ...]
    inactive_bounds: tuple[tuple[VarRef, tuple[int, int]], ...]


def union_to_single_system(d: DNFSystems, style: str = "compact",
                           limits: Limits = DEFAULT) -> LiftedUnion:
    """One polytope over label and variable coordinates covering the union.

    'lifted' uses unit-vector labels (dimension t); 'compact' places the
    labels on distinct 0/1 cube points (dimension ⌈log2 t⌉ ≤ a, valid since
    the cube has no interior integer points).  Columns whose only
    constraints are their box rows are factored out before the hull and
    reattached afterwards, which keeps the hull dimension down without
    changing the covered integer set.
    """
    if style not in ("lifted", "compact"):
        raise ValueError(f"unknown style {style!r}")
    hull_limits = replace(limits, dim_cap=limits.hull_dim_cap)
    nonempty = [s for s in d.systems if not is_empty(s)]
    n = len(d.layout)
    # columns constrained beyond their box rows in SOME system
    active = sorted({
        j for s in nonempty for row in s.A[2 * n:] for j in range(n) if row[j] != 0
    })
    # all systems share identical box rows by construction
    inactive = [j for j in range(n) if j not in active]
    inact_bounds = []
    if nonempty:
        base = nonempty[0]
        for j in inactive:
            lo = hi = None
            for row, rhs in zip(base.A, base.b):
                if row[j] == 1 and all(row[i] == 0 for i in range(n) if i != j):
                    hi = int(rhs)
                if row[j] == -1 and all(row[i] == 0 for i in range(n) if i != j):
                    lo = -int(rhs)
            inact_bounds.append(((d.layout[j]), (lo, hi)))
    t = len(nonempty)
    if t == 0:
        infeasible = HPolyhedron.make([[0] * (1 + len(active))], [-1],
                                      1 + len(active))
        return LiftedUnion(infeasible, 1, ((0,),), tuple(active), d.layout,
                           tuple(inact_bounds))
    if style == "lifted":
        label_dim = t
        labels = tuple(tuple(int(i == j) for i in range(t)) for j in range(t))
    else:
        label_dim = max(1, (t - 1).bit_length())
        labels = tuple(
            tuple((j >> i) & 1 for i in range(label_dim)) for j in range(t)
        )
    points = []
    for label, sys in zip(labels, nonempty):
        sub = _restrict_columns(sys, active, n)
        verts = vertices_from_facets(sub, hull_limits)
        for v in verts.vertices:
            points.append(tuple(Fraction(x) for x in label) + v)
    from .polyhedra import VPolytope

    hull = facets_from_vertices(VPolytope.make(points), hull_limits)
    return LiftedUnion(hull, label_dim, labels, tuple(active), d.layout,
                       tuple(inact_bounds))


def _restrict_columns(p: HPolyhedron, cols: list[int], n: int) -> HPolyhedron:
    rows, rhs = [], []
    for row, b in zip(p.A, p.b):
        if all(row[j] == 0 for j in range(n) if j not in cols):
            newrow = [row[j] for j in cols]
            if any(x != 0 for x in newrow):
                rows.append(newrow)
                rhs.append(b)
    return HPolyhedron.make(rows, rhs, len(cols))


def lifted_union_to_formula(f: Formula, lu: LiftedUnion) -> Formula:
    """Replace the matrix by the single system; labels join the last block.

    The new innermost block is existential over a box covering both the old
    coordinates and the 0/1 labels; exact per-coordinate ranges are kept as
    conjoined atoms, which is sound under the existential quantifier.
    """
    last = f.prefix[-1]
    if last.quantifier != "E":
        raise FormulaError("innermost block must be existential")
    atoms = []
    for row, rhs in zip(lu.polytope.A, lu.polytope.b):
        coeffs: dict[VarRef, Fraction] = {}
        for i in range(lu.label_dim):
            if row[i] != 0:
                coeffs[(last.name, last.dim + i)] = row[i]
        for idx, j in enumerate(lu.active):
            v = row[lu.label_dim + idx]
            if v != 0:
                coeffs[lu.layout[j]] = v
        atoms.append(_rational_atom(coeffs, rhs))
    matrix: BoolExpr = And(tuple(atoms)) if atoms else TRUE
    lo, hi = last.bound
    guard = []
    for j in range(last.dim):
        guard.append(Atom(LinearAtom.make({(last.name, j): 1}, hi)))
        guard.append(Atom(LinearAtom.make({(last.name, j): -1}, -lo)))
    for i in range(lu.label_dim):
        guard.append(Atom(LinearAtom.make({(last.name, last.dim + i): 1}, 1)))
        guard.append(Atom(LinearAtom.make({(last.name, last.dim + i): -1}, 0)))
    big = QuantBlock("E", last.name, last.dim + lu.label_dim,
                     (min(lo, 0), max(hi, 1)))
    matrix = And(tuple([matrix] + guard))
    return Formula(f.free, f.prefix[:-1] + (big,), matrix)


def _rational_atom(coeffs: dict[VarRef, Fraction], rhs: Fraction) -> Atom:
    """Clear denominators to an integer atom."""
    from .linalg import lcm_list

    denom = lcm_list([Fraction(c).denominator for c in coeffs.values()]
                     + [Fraction(rhs).denominator])
    return Atom(LinearAtom.make(
        {r: int(Fraction(c) * denom) for r, c in coeffs.items()},
        int(Fraction(rhs) * denom)))


# -- stage 3: concatenate vector variables into singletons --------------------------

def _pow2_bits(lo: int, hi: int) -> int:
    width = hi - lo + 1
    return max(1, (width - 1).bit_length()) if width > 1 else 1


def concat_variables(f: Formula, limits: Limits = DEFAULT) -> Formula:
    """All blocks except the innermost become bounded singletons.

    Coordinates are shifted to [0, width], widened to [0, 2^ell) when the
    width is not a power of two, and packed in binary; digit-recovery
    coordinates join the innermost existential block together with the
    digit equations and digit box bounds.  Widening guards respect the
    block's quantifier: out-of-range values of an existential coordinate
    make the matrix false, out-of-range values of a universal coordinate
    make it true.
    """
    if not f.all_bounded():
        raise FormulaError("bounded blocks required")
    if not f.prefix or f.prefix[-1].quantifier != "E":
        raise FormulaError("innermost block must be existential")
    blocks = f.blocks()
    outer = blocks[:-1]
    last = blocks[-1]
    matrix = f.matrix

    # shift every coordinate to start at 0
    deltas = {}
    for b in blocks:
        lo, _hi = b.bound
        if lo != 0:
            for j in range(b.dim):
                deltas[(b.name, j)] = lo
    if deltas:
        matrix = shift_vars(matrix, deltas)

    digit_bits: list[int] = []
    digit_eqs: list[BoolExpr] = []
    good_guards: list[BoolExpr] = []   # conjoined: existential coords in range
    bad_guards: list[BoolExpr] = []    # disjoined: universal coords out of range
    new_outer: list[QuantBlock] = []
    zname = "y"
    used = {b.name for b in blocks}
    while zname in used:
        zname += "_"

    def widen_guard(ref: VarRef, width: int, quantifier) -> None:
        if quantifier == "A":
            bad_guards.append(Atom(LinearAtom.make({ref: -1}, -(width + 1))))
        else:
            good_guards.append(Atom(LinearAtom.make({ref: 1}, width)))

    di = 0
    for i, b in enumerate(outer):
        lo, hi = b.bound
        ell = _pow2_bits(lo, hi)
        width = hi - lo
        packed = (f"{zname}{i + 1}", 0)
        if b.dim == 1:
            matrix = rename_vars(matrix, {(b.name, 0): packed})
            if width + 1 != 2**ell:
                widen_guard(packed, width, b.quantifier)
            new_outer.append(QuantBlock(b.quantifier, packed[0], 1,
                                        (0, 2**ell - 1)))
            continue
        # pack dim coordinates into one integer; digits live in the last block
        start = di
        mapping = {}
        for j in range(b.dim):
            dref = ("__digit__", start + j)
            mapping[(b.name, j)] = dref
            digit_bits.append(ell)
            if width + 1 != 2**ell:
                widen_guard(dref, width, b.quantifier)
        di += b.dim
        matrix = rename_vars(matrix, mapping)
        coeffs: dict[VarRef, int] = {packed: 1}
        for j in range(b.dim):
            coeffs[("__digit__", start + j)] = -(2 ** (j * ell))
        digit_eqs.append(Atom(LinearAtom.make(coeffs, 0, "=")))
        new_outer.append(QuantBlock(b.quantifier, packed[0], 1,
                                    (0, 2 ** (b.dim * ell) - 1)))

    # innermost block: shifted coordinates plus the digit coordinates
    lo, hi = last.bound
    ell_last = _pow2_bits(lo, hi)
    width_last = hi - lo
    for j in range(last.dim):
        if width_last + 1 != 2**ell_last:
            good_guards.append(Atom(LinearAtom.make({(last.name, j): 1},
                                                    width_last)))
    core: BoolExpr = matrix
    if good_guards:
        core = And(tuple([core] + good_guards))
    if bad_guards:
        core = Or(tuple(bad_guards + [core]))
    parts: list[BoolExpr] = digit_eqs + [core]
    ndigits = len(digit_bits)
    digit_box = []
    for j, ell in enumerate(digit_bits):
        digit_box.append(Atom(LinearAtom.make({("__digit__", j): 1}, 2**ell - 1)))
        digit_box.append(Atom(LinearAtom.make({("__digit__", j): -1}, 0)))
    per_coord = []
    for j in range(last.dim):
        per_coord.append(Atom(LinearAtom.make({(last.name, j): 1},
                                              2**ell_last - 1)))
        per_coord.append(Atom(LinearAtom.make({(last.name, j): -1}, 0)))
    matrix = And(tuple(parts + digit_box + per_coord))
    rename = {("__digit__", j): (last.name, last.dim + j) for j in range(ndigits)}
    matrix = rename_vars(matrix, rename)

    maxbits = max([ell_last] + digit_bits)
    new_last = QuantBlock("E", last.name, last.dim + ndigits,
                          (0, 2**maxbits - 1))
    free = None
    prefix = []
    for b, nb in zip(blocks, new_outer):
        if b.quantifier is None:
            free = QuantBlock(None, nb.name, 1, nb.bound)
        else:
            prefix.append(nb)
    prefix.append(new_last)
    return Formula(free, tuple(prefix), matrix)


# -- stage 4: chained floor relations ------------------------------------------------

def disassociate(f: Formula, limits: Limits = DEFAULT) -> DisassociatedForm:
    """Floor-chain form: the linear system touches only the last two variables.

    Input is the concatenated shape: bounded singleton blocks, then one
    existential vector block, matrix a pure conjunction.  Each chain
    variable z_j accumulates the binary digits of the first j singletons,
    enforced by z_j = floor(z_{j+1} / 2^{ell_{j+1}}) relation pairs; the
    last vector gains one recovery coordinate per singleton, tied to
    z_{k-1} by the decompression equality.
    """
    blocks = f.blocks()
    outer = blocks[:-1]
    last = blocks[-1]
    if any(b.dim != 1 for b in outer):
        raise FormulaError("outer blocks must be singletons")
    if last.quantifier != "E":
        raise FormulaError("innermost block must be existential")
    ells = []
    for b in outer:
        lo, hi = b.bound
        if lo != 0 or (hi + 1) & hi:
            raise FormulaError(f"block {b.name} must be bounded [0, 2^l)")
        ells.append((hi + 1).bit_length() - 1)
    lo, hi = last.bound
    if lo != 0 or (hi + 1) & hi:
        raise FormulaError("vector block must be bounded [0, 2^l)")
    ell_k = (hi + 1).bit_length() - 1

    k = len(outer) + 1
    tbits = []
    acc = 0
    for e in ells:
        acc += e
        tbits.append(acc)

    # atoms of the conjunctive matrix, as pure <=
    flat = to_le_nnf(f.matrix)
    conj: list[LinearAtom] = []

    def collect(e):
        if isinstance(e, And):
            for c in e.children:
                collect(c)
        elif isinstance(e, Atom):
            conj.append(e.atom)
        elif isinstance(e, Const):
            if not e.value:
                conj.append(LinearAtom.make({}, -1))
        else:
            raise FormulaError("matrix must be a conjunction at this stage")

    collect(flat)

    zk = f"z{k}"
    nk = last.dim
    # rewrite: singleton y_j -> recovery coordinate z_k[j-1]; last block shifts right
    mapping: dict = {}
    for j, b in enumerate(outer):
        mapping[(b.name, 0)] = (zk, j)
    for i in range(nk):
        mapping[(last.name, i)] = (zk, (k - 1) + i)
    lam: list[LinearAtom] = []
    for a in conj:
        coeffs = {mapping[r]: c for r, c in a.coeffs}
        lam.append(LinearAtom.make(coeffs, a.rhs, a.rel))

    # per-coordinate bit lengths: the vector block's box is uniform, but the
    # conjunction usually pins labels and digit coordinates much tighter
    ubs = [2**ell_k - 1] * nk
    for a in lam:
        if len(a.coeffs) != 1 or a.rel not in ("<=", "="):
            continue
        (r, c), = a.coeffs
        if r[0] != zk or r[1] < k - 1:
            continue
        if c > 0:
            ubs[r[1] - (k - 1)] = min(ubs[r[1] - (k - 1)], a.rhs // c)
    ell_per_coord = [max(0, ub).bit_length() for ub in ubs]

    # decompression: z_{k-1} = sum 2^{t_{k-1}-t_j} z_k[j-1]
    if k >= 2:
        dec = {(f"z{k - 1}", 0): 1}
        for j in range(1, k):
            dec[(zk, j - 1)] = -(2 ** (tbits[-1] - tbits[j - 1]))
        lam.append(LinearAtom.make(dec, 0))
        lam.append(LinearAtom.make({r: -c for r, c in dec.items()}, 0))

    # recovery and original coordinate boxes (the z_bound rows)
    zk_bits = list(ells) + ell_per_coord
    for j, e in enumerate(zk_bits):
        lam.append(LinearAtom.make({(zk, j): 1}, 2**e - 1))
        lam.append(LinearAtom.make({(zk, j): -1}, 0))

    # floor relations R_j(z_j, z_{j+1})
    relations = []
    for j in range(k - 2):
        p = 2 ** ells[j + 1]
        r1 = LinearAtom.make({(f"z{j + 1}", 0): p, (f"z{j + 2}", 0): -1}, 0)
        r2 = LinearAtom.make({(f"z{j + 1}", 0): -p, (f"z{j + 2}", 0): 1}, p - 1)
        relations.append((r1, r2))

    parity = "odd" if k % 2 == 1 else "even"
    return DisassociatedForm(
        bit_lengths=tuple(tbits),
        zk_dim=(k - 1) + nk,
        zk_bits=tuple(zk_bits),
        relations=tuple(relations),
        lambda_atoms=tuple(lam),
        parity=parity,
        free_first=f.free is not None,
    )


def normalize_pipeline(f: Formula, style: str = "compact",
                       limits: Limits = DEFAULT) -> tuple[DisassociatedForm, PipelineTrace]:
    """DNF, one system (hull lifting or indicator folding), concatenation,
    disassociation; every stage retained in the trace.

    Styles 'compact' and 'lifted' realize the union by a convex hull over
    label copies; 'indicator' uses 0/1 indicator coordinates with slack
    rows, which avoids hull computations in high dimension (the solver's
    recursive calls use it).
    """
    trace = PipelineTrace()
    trace.add("input", f)
    f = widen_to_pow2(f)
    trace.add("pow2", f)
    d = to_dnf(f, limits)
    trace.dnf_count = d.t
    trace.add("dnf", dnf_to_formula(f, d))
    if style == "indicator":
        f1 = fold_disjuncts_indicator(f, d)
        trace.hull_dim = 0
        trace.hull_style = style
    else:
        lu = union_to_single_system(d, style, limits)
        trace.hull_dim = lu.polytope.n
        trace.hull_style = style
        f1 = lifted_union_to_formula(f, lu)
    trace.add("single_system", f1)
    f2 = concat_variables(f1, limits)
    trace.add("concatenated", f2)
    form = disassociate(f2, limits)
    trace.add("disassociated", form.to_formula())
    return form, trace


# -- singleton guard absorption -------------------------------------------------------

def absorb_singleton_guards(f: Formula) -> Formula:
    """Fold single-variable guard atoms into singleton block ranges.

    A top-level disjunct touching only one universal singleton removes a ray
    of values from that block (those values satisfy the matrix trivially);
    dually a conjunct guard on an existential or free singleton restricts
    the range.  Substituted chain relations produce exactly these shapes,
    and absorbing them keeps recursive normalizations small.
    """
    changed = True
    while changed:
        changed = False
        blocks = f.blocks()
        singles = {b.name: b for b in blocks if b.dim == 1 and b.bounded}
        matrix = f.matrix
        bounds = {b.name: list(b.bound) for b in blocks if b.name in singles}

        def own_var(e) -> bool:
            refs = set()
            if isinstance(e, Atom):
                refs = {r for r in e.atom.refs()}
            return len(refs) == 1

        def try_absorb(parts, quantifier_wanted, keep_op):
            nonlocal changed
            kept = []
            for part in parts:
                if isinstance(part, Atom) and len(part.atom.coeffs) == 1:
                    (ref, c), = part.atom.coeffs
                    name = ref[0]
                    b = singles.get(name)
                    rel_ok = part.atom.rel in ("<=", "<")
                    if b is not None and rel_ok and (
                            (b.quantifier in ("E", None)) == (quantifier_wanted == "E")):
                        rhs = part.atom.rhs - (1 if part.atom.rel == "<" else 0)
                        lo, hi = bounds[name]
                        if quantifier_wanted == "E":
                            # conjunct guard: restrict the range
                            if c > 0:
                                hi = min(hi, rhs // c)
                            else:
                                lo = max(lo, -((-rhs) // c))
                        else:
                            # disjunct guard on a universal: remove the ray
                            if c > 0:
                                lo = max(lo, rhs // c + 1)
                            else:
                                hi = min(hi, -((-rhs) // c) - 1)
                        bounds[name] = [lo, hi]
                        changed = True
                        continue
                kept.append(part)
            return kept

        if isinstance(matrix, And):
            kept = try_absorb(list(matrix.children), "E", And)
            if changed:
                matrix = And(tuple(kept)) if kept else TRUE
        elif isinstance(matrix, Or):
            kept = try_absorb(list(matrix.children), "A", Or)
            if changed:
                matrix = Or(tuple(kept)) if kept else FALSE
        if changed:
            new_blocks = []
            for b in blocks:
                if b.name in bounds:
                    lo, hi = bounds[b.name]
                    hi = max(hi, lo - 1)  # normalize the empty range
                    new_blocks.append(QuantBlock(b.quantifier, b.name, 1, (lo, hi)))
                else:
                    new_blocks.append(b)
            free = new_blocks[0] if f.free is not None else None
            prefix = tuple(new_blocks[1:]) if f.free is not None else tuple(new_blocks)
            f = Formula(free, prefix, matrix)
    return f


# -- indicator-variable disjunction folding -------------------------------------------

def fold_disjuncts_indicator(f: Formula, d: DNFSystems) -> Formula:
    """Single conjunctive system via 0/1 indicator coordinates and slack rows.

    Each disjunct's rows are relaxed by (worst-case slack) * (Hamming
    distance of the indicator bits from the disjunct's label); the label
    value is capped below the disjunct count.  Equivalent to the lifted
    hull on integer points, at dimension +⌈log2 t⌉ with no hull computation;
    used for the solver's internal recursions.
    """
    last = f.prefix[-1]
    if last.quantifier != "E":
        raise FormulaError("innermost block must be existential")
    # empty disjuncts are harmless here (their label is simply never taken),
    # so skip the per-system emptiness tests
    nonempty = list(d.systems)
    t = len(nonempty)
    if t == 0:
        return Formula(f.free, f.prefix, FALSE)
    n = len(d.layout)
    col_bounds = []
    base = nonempty[0]
    for j in range(n):
        # box rows come first, by construction of to_dnf
        hi = base.b[2 * j]
        lo = -base.b[2 * j + 1]
        col_bounds.append((int(lo), int(hi)))
    L = (t - 1).bit_length() if t > 1 else 0
    lbl = [(last.name, last.dim + i) for i in range(L)]
    atoms: list[BoolExpr] = []
    for j, sys in enumerate(nonempty):
        bits = [(j >> i) & 1 for i in range(L)]
        for row, rhs in zip(sys.A[2 * n:], sys.b[2 * n:]):
            # slack big enough to free the row: max(a.x) - b over the box
            mx = sum(
                int(row[i]) * (col_bounds[i][1] if row[i] > 0 else col_bounds[i][0])
                for i in range(n)
            )
            M = max(0, mx - int(rhs))
            coeffs: dict = {}
            for i in range(n):
                if row[i]:
                    coeffs[d.layout[i]] = int(row[i])
            const = int(rhs)
            # distance = sum over bits of (bit ? 1 - l_i : l_i)
            for i in range(L):
                if bits[i]:
                    coeffs[lbl[i]] = coeffs.get(lbl[i], 0) + M
                    const += M
                else:
                    coeffs[lbl[i]] = coeffs.get(lbl[i], 0) - M
            atoms.append(Atom(LinearAtom.make(coeffs, const)))
    for i in range(L):
        atoms.append(Atom(LinearAtom.make({lbl[i]: 1}, 1)))
        atoms.append(Atom(LinearAtom.make({lbl[i]: -1}, 0)))
    if L and t < 2**L:
        atoms.append(Atom(LinearAtom.make(
            {lbl[i]: 2**i for i in range(L)}, t - 1)))
    lo, hi = last.bound
    for j in range(last.dim):
        atoms.append(Atom(LinearAtom.make({(last.name, j): 1}, hi)))
        atoms.append(Atom(LinearAtom.make({(last.name, j): -1}, -lo)))
    big = QuantBlock("E", last.name, last.dim + L, (min(lo, 0), max(hi, 1)))
    return Formula(f.free, f.prefix[:-1] + (big,), And(tuple(atoms)))

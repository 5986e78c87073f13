"""AST for prenex sentences over bounded integer vector variables.

A formula is an optional free block, a prefix of strictly alternating
quantifier blocks, and a Boolean matrix over linear atoms.  Atoms carry
exact integer coefficients; rational input is cleared to integers by the
parser.  Variables are referenced by (block name, 0-based coordinate).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union


class FormulaError(ValueError):
    pass


class UnboundedError(FormulaError):
    """An operation required bounded quantifier blocks."""


VarRef = tuple[str, int]

LE, LT, EQ = "<=", "<", "="


@dataclass(frozen=True)
class LinearAtom:
    """coeffs·x rel rhs with integer coefficients.

    An atom with no coefficients is a constant truth value (0 rel rhs).
    """

    coeffs: tuple[tuple[VarRef, int], ...]
    rhs: int
    rel: str = LE

    @staticmethod
    def make(coeffs: dict[VarRef, int], rhs: int, rel: str = LE) -> "LinearAtom":
        items = tuple(sorted((r, c) for r, c in coeffs.items() if c != 0))
        return LinearAtom(items, int(rhs), rel)

    def coeff_map(self) -> dict[VarRef, int]:
        return dict(self.coeffs)

    def evaluate(self, env: dict[VarRef, int]) -> bool:
        lhs = sum(c * env[r] for r, c in self.coeffs)
        if self.rel == LE:
            return lhs <= self.rhs
        if self.rel == LT:
            return lhs < self.rhs
        return lhs == self.rhs

    def refs(self) -> Iterator[VarRef]:
        for r, _ in self.coeffs:
            yield r


@dataclass(frozen=True)
class Atom:
    atom: LinearAtom


@dataclass(frozen=True)
class Not:
    child: "BoolExpr"


@dataclass(frozen=True)
class And:
    children: tuple["BoolExpr", ...]


@dataclass(frozen=True)
class Or:
    children: tuple["BoolExpr", ...]


@dataclass(frozen=True)
class Const:
    value: bool


BoolExpr = Union[Atom, Not, And, Or, Const]

TRUE = Const(True)
FALSE = Const(False)


@dataclass(frozen=True)
class QuantBlock:
    """One vector variable; quantifier is 'E', 'A' or None for the free block.

    bound is an inclusive integer interval [lo, hi]; lo == hi + 1 encodes the
    empty domain.
    """

    quantifier: Optional[str]
    name: str
    dim: int
    bound: Optional[tuple[int, int]] = None

    def __post_init__(self):
        if self.quantifier not in ("E", "A", None):
            raise FormulaError(f"bad quantifier {self.quantifier!r}")
        if self.dim < 1:
            raise FormulaError("block dimension must be positive")
        if self.bound is not None and self.bound[0] > self.bound[1] + 1:
            raise FormulaError(f"bad bound {self.bound} on {self.name}")

    @property
    def bounded(self) -> bool:
        return self.bound is not None

    def domain_size(self) -> int:
        if self.bound is None:
            raise UnboundedError(f"block {self.name} is unbounded")
        lo, hi = self.bound
        return max(0, hi - lo + 1) ** self.dim

    def refs(self) -> list[VarRef]:
        return [(self.name, j) for j in range(self.dim)]


@dataclass(frozen=True)
class SentenceClass:
    k: int
    nbar: tuple[int, ...]
    a: int


@dataclass(frozen=True)
class Formula:
    free: Optional[QuantBlock]
    prefix: tuple[QuantBlock, ...]
    matrix: BoolExpr

    def __post_init__(self):
        names = set()
        for b in self.blocks():
            if b.name in names:
                raise FormulaError(f"duplicate block name {b.name}")
            names.add(b.name)
        if self.free is not None and self.free.quantifier is not None:
            raise FormulaError("free block must not carry a quantifier")
        for prev, nxt in zip(self.prefix, self.prefix[1:]):
            if prev.quantifier == nxt.quantifier:
                raise FormulaError(
                    f"non-alternating prefix at {prev.name}, {nxt.name}"
                )
        declared = {}
        for b in self.blocks():
            declared[b.name] = b.dim
        for ref in iter_refs(self.matrix):
            name, j = ref
            if name not in declared:
                raise FormulaError(f"undeclared variable {name}")
            if not (0 <= j < declared[name]):
                raise FormulaError(f"coordinate {name}.{j + 1} out of range")

    def blocks(self) -> list[QuantBlock]:
        out = [self.free] if self.free is not None else []
        out.extend(self.prefix)
        return out

    def is_sentence(self) -> bool:
        return self.free is None

    def sentence_class(self) -> SentenceClass:
        k = len(self.prefix)
        nbar = tuple(b.dim for b in self.prefix)
        return SentenceClass(k, nbar, count_atoms(self.matrix))

    def all_bounded(self) -> bool:
        return all(b.bounded for b in self.blocks())


# -- tree utilities -----------------------------------------------------------

def iter_refs(e: BoolExpr) -> Iterator[VarRef]:
    if isinstance(e, Atom):
        yield from e.atom.refs()
    elif isinstance(e, Not):
        yield from iter_refs(e.child)
    elif isinstance(e, (And, Or)):
        for c in e.children:
            yield from iter_refs(c)


def iter_atoms(e: BoolExpr) -> Iterator[LinearAtom]:
    if isinstance(e, Atom):
        yield e.atom
    elif isinstance(e, Not):
        yield from iter_atoms(e.child)
    elif isinstance(e, (And, Or)):
        for c in e.children:
            yield from iter_atoms(c)


def count_atoms(e: BoolExpr) -> int:
    return sum(1 for _ in iter_atoms(e))


def evaluate(e: BoolExpr, env: dict[VarRef, int]) -> bool:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Atom):
        return e.atom.evaluate(env)
    if isinstance(e, Not):
        return not evaluate(e.child, env)
    if isinstance(e, And):
        return all(evaluate(c, env) for c in e.children)
    return any(evaluate(c, env) for c in e.children)


def negate_atom(a: LinearAtom) -> BoolExpr:
    """Exact integer negation: ¬(L ≤ b) is b+1 ≤ L, i.e. −L ≤ −b−1."""
    neg = {r: -c for r, c in a.coeffs}
    if a.rel == LE:
        return Atom(LinearAtom.make(neg, -a.rhs - 1))
    if a.rel == LT:  # L < b over ints is L <= b-1
        return Atom(LinearAtom.make(neg, -a.rhs))
    pos = dict(a.coeffs)
    return Or((Atom(LinearAtom.make(pos, a.rhs - 1)),
               Atom(LinearAtom.make(neg, -a.rhs - 1))))


def atom_to_le(a: LinearAtom) -> BoolExpr:
    """Rewrite an atom with only non-strict ≤ relations."""
    if a.rel == LE:
        return Atom(a)
    if a.rel == LT:
        return Atom(LinearAtom(a.coeffs, a.rhs - 1, LE))
    neg = {r: -c for r, c in a.coeffs}
    return And((Atom(LinearAtom(a.coeffs, a.rhs, LE)),
                Atom(LinearAtom.make(neg, -a.rhs))))


def to_le_nnf(e: BoolExpr) -> BoolExpr:
    """Negation-free and/or tree over ≤-atoms (integer-exact rewriting)."""
    if isinstance(e, Const):
        return e
    if isinstance(e, Atom):
        return atom_to_le(e.atom)
    if isinstance(e, And):
        return And(tuple(to_le_nnf(c) for c in e.children))
    if isinstance(e, Or):
        return Or(tuple(to_le_nnf(c) for c in e.children))
    # Not
    c = e.child
    if isinstance(c, Const):
        return Const(not c.value)
    if isinstance(c, Atom):
        return to_le_nnf(negate_atom(c.atom))
    if isinstance(c, Not):
        return to_le_nnf(c.child)
    if isinstance(c, And):
        return Or(tuple(to_le_nnf(Not(x)) for x in c.children))
    return And(tuple(to_le_nnf(Not(x)) for x in c.children))


def negate_formula(f: Formula) -> Formula:
    """¬f with quantifiers flipped and the matrix negated."""
    flip = {"E": "A", "A": "E"}
    prefix = tuple(
        QuantBlock(flip[b.quantifier], b.name, b.dim, b.bound) for b in f.prefix
    )
    return Formula(f.free, prefix, Not(f.matrix))


def substitute(e: BoolExpr, values: dict[VarRef, int]) -> BoolExpr:
    """Fix some variables to integer values."""
    if isinstance(e, Const):
        return e
    if isinstance(e, Atom):
        a = e.atom
        kept = {}
        rhs = a.rhs
        for r, c in a.coeffs:
            if r in values:
                rhs -= c * values[r]
            else:
                kept[r] = c
        return Atom(LinearAtom.make(kept, rhs, a.rel))
    if isinstance(e, Not):
        return Not(substitute(e.child, values))
    if isinstance(e, And):
        return And(tuple(substitute(c, values) for c in e.children))
    return Or(tuple(substitute(c, values) for c in e.children))


def shift_vars(e: BoolExpr, deltas: dict[VarRef, int]) -> BoolExpr:
    """Substitute x ↦ x + delta for the given coordinates."""
    if isinstance(e, Const):
        return e
    if isinstance(e, Atom):
        a = e.atom
        rhs = a.rhs
        for r, c in a.coeffs:
            if r in deltas:
                rhs -= c * deltas[r]
        return Atom(LinearAtom(a.coeffs, rhs, a.rel))
    if isinstance(e, Not):
        return Not(shift_vars(e.child, deltas))
    if isinstance(e, And):
        return And(tuple(shift_vars(c, deltas) for c in e.children))
    return Or(tuple(shift_vars(c, deltas) for c in e.children))


def rename_vars(e: BoolExpr, mapping: dict[VarRef, VarRef]) -> BoolExpr:
    if isinstance(e, Const):
        return e
    if isinstance(e, Atom):
        a = e.atom
        coeffs = {}
        for r, c in a.coeffs:
            nr = mapping.get(r, r)
            coeffs[nr] = coeffs.get(nr, 0) + c
        return Atom(LinearAtom.make(coeffs, a.rhs, a.rel))
    if isinstance(e, Not):
        return Not(rename_vars(e.child, mapping))
    if isinstance(e, And):
        return And(tuple(rename_vars(c, mapping) for c in e.children))
    return Or(tuple(rename_vars(c, mapping) for c in e.children))


# -- size measure -------------------------------------------------------------

def _bits(c: int) -> int:
    return (abs(c)).bit_length() + 1


def binary_length(obj) -> int:
    """Size measure: one unit per AST node plus ⌈log2(|c|+1)⌉+1 per constant.

    Accounting: an atom costs 1, plus (2 + bits(c)) per coefficient entry,
    plus bits(rhs); and/or/not/const nodes cost 1 plus children; a block
    costs 1 + bits(dim) (+ bits(lo) + bits(hi) when bounded).  Monotone
    under adding substructure and under widening any constant.
    """
    if isinstance(obj, Formula):
        return 1 + sum(binary_length(b) for b in obj.blocks()) + binary_length(obj.matrix)
    if isinstance(obj, QuantBlock):
        n = 1 + _bits(obj.dim)
        if obj.bound is not None:
            n += _bits(obj.bound[0]) + _bits(obj.bound[1])
        return n
    if isinstance(obj, LinearAtom):
        return 1 + sum(2 + _bits(c) for _, c in obj.coeffs) + _bits(obj.rhs)
    if isinstance(obj, Atom):
        return binary_length(obj.atom)
    if isinstance(obj, Const):
        return 1
    if isinstance(obj, Not):
        return 1 + binary_length(obj.child)
    if isinstance(obj, (And, Or)):
        return 1 + sum(binary_length(c) for c in obj.children)
    raise TypeError(f"no size for {type(obj)}")


def bound_quantifiers(f: Formula, bit_bounds: list[int]) -> Formula:
    """Set every block's domain to [0, 2^ℓ) from an explicit list of ℓ.

    One entry per block, free block first when present.  An existing bound
    is replaced (a warning is emitted).
    """
    import warnings

    blocks = f.blocks()
    if len(bit_bounds) != len(blocks):
        raise FormulaError(
            f"expected {len(blocks)} bit bounds, got {len(bit_bounds)}"
        )
    new = []
    for b, ell in zip(blocks, bit_bounds):
        if ell < 0:
            raise FormulaError("bit bounds must be nonnegative")
        if b.bound is not None:
            warnings.warn(f"replacing bound on block {b.name}")
        new.append(QuantBlock(b.quantifier, b.name, b.dim, (0, 2**ell - 1)))
    free = new[0] if f.free is not None else None
    prefix = tuple(new[1:]) if f.free is not None else tuple(new)
    return Formula(free, prefix, f.matrix)

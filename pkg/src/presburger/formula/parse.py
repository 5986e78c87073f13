"""Text format for formulas.

S-expression grammar, one formula per file, '#' starts a comment line:

    prefix  :=  ('E' | 'A' | 'free') name ':' dim ['in' '[' lo ',' hi ']']
    matrix  :=  '(' ('and'|'or'|'not') ... ')'
              | '(' ('<='|'<'|'=') lin lin ')'
    lin     :=  '(' '+' lin ... ')' | '(' '*' int var ')' | var | int

The prefix entries are followed by a bare ':' and then the matrix.  A
variable of dimension > 1 is addressed as name.j with 1-based j.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import (
    And,
    Atom,
    BoolExpr,
    Const,
    Formula,
    LinearAtom,
    Not,
    Or,
    QuantBlock,
    VarRef,
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{msg} at line {line}, column {col}")


_KEYWORDS = {"E", "A", "free", "in", "and", "or", "not"}
_PUNCT = set("()[],:")


@dataclass
class _Tok:
    kind: str  # 'int' | 'name' | 'coord' | punct/keyword literal
    text: str
    line: int
    col: int
    value: int = 0
    coord: int = 0


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        i, n = 0, len(line)
        while i < n:
            ch = line[i]
            if ch.isspace():
                i += 1
                continue
            col = i + 1
            if ch in _PUNCT or ch in "+*":
                toks.append(_Tok(ch, ch, ln, col))
                i += 1
                continue
            if ch == "<":
                if i + 1 < n and line[i + 1] == "=":
                    toks.append(_Tok("<=", "<=", ln, col))
                    i += 2
                else:
                    toks.append(_Tok("<", "<", ln, col))
                    i += 1
                continue
            if ch == "=":
                toks.append(_Tok("=", "=", ln, col))
                i += 1
                continue
            if ch == "-" or ch.isdigit():
                j = i + 1
                while j < n and line[j].isdigit():
                    j += 1
                if line[i:j] == "-":
                    raise ParseError("stray '-'", ln, col)
                toks.append(_Tok("int", line[i:j], ln, col, value=int(line[i:j])))
                i = j
                continue
            if ch.isalpha() or ch == "_":
                j = i + 1
                while j < n and (line[j].isalnum() or line[j] == "_"):
                    j += 1
                name = line[i:j]
                if j < n and line[j] == "." and j + 1 < n and line[j + 1].isdigit():
                    k = j + 1
                    while k < n and line[k].isdigit():
                        k += 1
                    toks.append(
                        _Tok("coord", line[i:k], ln, col, coord=int(line[j + 1:k]))
                    )
                    toks[-1].text = name
                    i = k
                    continue
                kind = name if name in _KEYWORDS else "name"
                toks.append(_Tok(kind, name, ln, col))
                i = j
                continue
            raise ParseError(f"unexpected character {ch!r}", ln, col)
    toks.append(_Tok("eof", "", ln if text else 1, 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0
        self.dims: dict[str, int] = {}

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def take(self, kind: str | None = None) -> _Tok:
        t = self.toks[self.pos]
        if kind is not None and t.kind != kind:
            raise ParseError(f"expected {kind!r}, found {t.text or 'end of input'!r}",
                             t.line, t.col)
        self.pos += 1
        return t

    def parse_formula(self) -> Formula:
        free = None
        prefix: list[QuantBlock] = []
        while self.peek().kind in ("E", "A", "free"):
            t = self.take()
            name_t = self.take("name")
            if name_t.text in self.dims:
                raise ParseError(f"duplicate block name {name_t.text!r}",
                                 name_t.line, name_t.col)
            self.take(":")
            dim_t = self.take("int")
            if dim_t.value < 1:
                raise ParseError("dimension must be positive", dim_t.line, dim_t.col)
            bound = None
            if self.peek().kind == "in":
                self.take("in")
                self.take("[")
                lo = self._int()
                self.take(",")
                hi = self._int()
                self.take("]")
                if lo > hi + 1:
                    raise ParseError(f"empty-beyond-convention bound [{lo},{hi}]",
                                     dim_t.line, dim_t.col)
                bound = (lo, hi)
            self.dims[name_t.text] = dim_t.value
            if t.kind == "free":
                if free is not None:
                    raise ParseError("second free block", t.line, t.col)
                if prefix:
                    raise ParseError("free block must come first", t.line, t.col)
                free = QuantBlock(None, name_t.text, dim_t.value, bound)
            else:
                block = QuantBlock(t.kind, name_t.text, dim_t.value, bound)
                if prefix and prefix[-1].quantifier == block.quantifier:
                    raise ParseError("non-alternating prefix", t.line, t.col)
                prefix.append(block)
        self.take(":")
        matrix = self.parse_expr()
        t = self.take()
        if t.kind != "eof":
            raise ParseError(f"trailing input {t.text!r}", t.line, t.col)
        return Formula(free, tuple(prefix), matrix)

    def _int(self) -> int:
        return self.take("int").value

    def parse_expr(self) -> BoolExpr:
        t = self.take("(")
        head = self.take()
        if head.kind == "and" or head.kind == "or":
            children = []
            while self.peek().kind == "(":
                children.append(self.parse_expr())
            self.take(")")
            if not children:
                raise ParseError(f"empty ({head.kind})", head.line, head.col)
            return And(tuple(children)) if head.kind == "and" else Or(tuple(children))
        if head.kind == "not":
            child = self.parse_expr()
            self.take(")")
            return Not(child)
        if head.kind in ("<=", "<", "="):
            lhs_c, lhs_k = self.parse_lin()
            rhs_c, rhs_k = self.parse_lin()
            self.take(")")
            coeffs: dict[VarRef, int] = dict(lhs_c)
            for r, c in rhs_c.items():
                coeffs[r] = coeffs.get(r, 0) - c
            return Atom(LinearAtom.make(coeffs, rhs_k - lhs_k, head.kind))
        raise ParseError(f"expected operator, found {head.text!r}", head.line, head.col)

    def parse_lin(self) -> tuple[dict[VarRef, int], int]:
        t = self.peek()
        if t.kind == "int":
            self.take()
            return {}, t.value
        if t.kind in ("name", "coord"):
            return {self._var(): 1}, 0
        if t.kind == "(":
            self.take()
            head = self.take()
            if head.text == "+":
                coeffs: dict[VarRef, int] = {}
                const = 0
                while self.peek().kind != ")":
                    c, k = self.parse_lin()
                    const += k
                    for r, v in c.items():
                        coeffs[r] = coeffs.get(r, 0) + v
                self.take(")")
                return coeffs, const
            if head.text == "*":
                c = self._int()
                ref = self._var()
                self.take(")")
                return {ref: c}, 0
            raise ParseError(f"expected '+' or '*', found {head.text!r}",
                             head.line, head.col)
        raise ParseError(f"expected linear term, found {t.text!r}", t.line, t.col)

    def _var(self) -> VarRef:
        t = self.take()
        if t.kind == "name":
            name, j = t.text, 1
        elif t.kind == "coord":
            name, j = t.text, t.coord
        else:
            raise ParseError(f"expected variable, found {t.text!r}", t.line, t.col)
        if name not in self.dims:
            raise ParseError(f"undeclared variable {name!r}", t.line, t.col)
        dim = self.dims[name]
        if t.kind == "name" and dim != 1:
            raise ParseError(
                f"variable {name!r} has dimension {dim}; use {name}.j", t.line, t.col
            )
        if not (1 <= j <= dim):
            raise ParseError(f"coordinate {name}.{j} out of range 1..{dim}",
                             t.line, t.col)
        return (name, j - 1)


def parse(text: str) -> Formula:
    return _Parser(text).parse_formula()


# -- printing -----------------------------------------------------------------

def pretty_expr(e: BoolExpr, dims: dict[str, int]) -> str:
    if isinstance(e, Const):
        # constants encode as trivially true/false atoms
        return "(<= 0 0)" if e.value else "(<= 1 0)"
    if isinstance(e, Atom):
        a = e.atom
        if not a.coeffs:
            return f"({a.rel} 0 {a.rhs})"
        parts = []
        for (name, j), c in a.coeffs:
            ref = name if dims.get(name, 1) == 1 else f"{name}.{j + 1}"
            parts.append(f"(* {c} {ref})")
        lin = parts[0] if len(parts) == 1 else "(+ " + " ".join(parts) + ")"
        return f"({a.rel} {lin} {a.rhs})"
    if isinstance(e, Not):
        return f"(not {pretty_expr(e.child, dims)})"
    op = "and" if isinstance(e, And) else "or"
    return f"({op} " + " ".join(pretty_expr(c, dims) for c in e.children) + ")"


def pretty(f: Formula) -> str:
    dims = {b.name: b.dim for b in f.blocks()}
    lines = []
    for b in f.blocks():
        kw = "free" if b.quantifier is None else b.quantifier
        s = f"{kw} {b.name}:{b.dim}"
        if b.bound is not None:
            s += f" in [{b.bound[0]},{b.bound[1]}]"
        lines.append(s)
    lines.append(":")
    lines.append(pretty_expr(f.matrix, dims))
    return "\n".join(lines) + "\n"

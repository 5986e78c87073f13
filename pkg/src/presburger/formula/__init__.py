"""Formula AST, parser, size measure, oracle and long-system splitting."""

from .ast import (
    And,
    Atom,
    BoolExpr,
    Const,
    FALSE,
    Formula,
    FormulaError,
    LinearAtom,
    Not,
    Or,
    QuantBlock,
    SentenceClass,
    TRUE,
    UnboundedError,
    VarRef,
    binary_length,
    bound_quantifiers,
    count_atoms,
    evaluate,
    iter_atoms,
    iter_refs,
    negate_atom,
    negate_formula,
    rename_vars,
    shift_vars,
    substitute,
    to_le_nnf,
)
from .dbs import dbs_split
from .oracle import brute_force_count, brute_force_decide
from .parse import ParseError, parse, pretty

__all__ = [
    "And", "Atom", "BoolExpr", "Const", "FALSE", "Formula", "FormulaError",
    "LinearAtom", "Not", "Or", "ParseError", "QuantBlock", "SentenceClass",
    "TRUE", "UnboundedError", "VarRef", "binary_length", "bound_quantifiers",
    "brute_force_count", "brute_force_decide", "count_atoms", "dbs_split",
    "evaluate", "iter_atoms", "iter_refs", "negate_atom", "negate_formula",
    "parse", "pretty", "rename_vars", "shift_vars", "substitute", "to_le_nnf",
]

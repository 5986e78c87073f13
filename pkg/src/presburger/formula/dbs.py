"""Doignon–Bell–Scarf splitting of long existential systems.

Integer feasibility of an m-row system over Z^n is equivalent to the
feasibility of every 2^n-row subsystem, so one long existential sentence
splits into a conjunction of C(m, 2^n) short ones.
"""

from __future__ import annotations

from itertools import combinations
from math import comb

from ..config import DEFAULT, CapExceeded, Limits
from .ast import And, Atom, Formula, FormulaError, LinearAtom, QuantBlock, LE


def dbs_split(system: list[LinearAtom], block: QuantBlock,
              limits: Limits = DEFAULT) -> list[Formula]:
    """Split ∃x: (m-row system) into 2^n-row subsystem sentences.

    Returns the list of subsystem sentences; the original sentence is true
    iff every returned sentence is true (conjunction semantics; quantified
    conjuncts cannot be a plain Boolean matrix).  With m <= 2^n the original
    sentence is returned unchanged.
    """
    if block.quantifier != "E":
        raise FormulaError("splitter applies to an existential block")
    for a in system:
        if a.rel != LE:
            raise FormulaError("splitter expects <=-inequalities only")
        for name, j in a.refs():
            if name != block.name or not (0 <= j < block.dim):
                raise FormulaError(f"atom references {name}.{j + 1} outside the block")
    size = 2 ** block.dim
    m = len(system)
    if m <= size:
        return [Formula(None, (block,), And(tuple(Atom(a) for a in system)))]
    if comb(m, size) > limits.max_subsystems:
        raise CapExceeded("max_subsystems", f"C({m},{size}) subsystems")
    out = []
    for rows in combinations(range(m), size):
        matrix = And(tuple(Atom(system[i]) for i in rows))
        out.append(Formula(None, (block,), matrix))
    return out

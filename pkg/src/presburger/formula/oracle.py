"""Exhaustive reference evaluation of bounded formulas.

The oracle is the ground truth every other decision path is tested
against.  It refuses unbounded blocks and enforces a hard cap on the
total number of assignments so runs terminate predictably.
"""

from __future__ import annotations

from .. import kernel
from ..config import DEFAULT, CapExceeded, Limits
from .ast import Formula, FormulaError, UnboundedError


def _compile_checked(f: Formula, limits: Limits) -> kernel.Program:
    if not f.all_bounded():
        raise UnboundedError("oracle requires bounded blocks")
    p = kernel.compile_formula(f)
    if p.search_space > limits.max_assignments:
        raise CapExceeded(
            "max_assignments",
            f"search space {p.search_space} beyond {limits.max_assignments}",
        )
    return p


def brute_force_decide(f: Formula, limits: Limits = DEFAULT, jobs: int = 1) -> bool:
    """Exact truth value by alternating exhaustive evaluation."""
    if f.free is not None:
        raise FormulaError("sentence expected; found a free block")
    p = _compile_checked(f, limits)
    if jobs > 1:
        return kernel.decide_parallel(p, jobs)
    return kernel.decide(p)


def brute_force_count(f: Formula, limits: Limits = DEFAULT):
    """(count, points) of free-block assignments satisfying the formula.

    Points come back lexicographically sorted.
    """
    if f.free is None:
        raise FormulaError("formula with a free block expected")
    p = _compile_checked(f, limits)
    pts = kernel.free_scan(p)
    return len(pts), pts

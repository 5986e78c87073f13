"""Runtime caps and limits.

Every cap can be overridden per call (pass a Limits instance) or globally
through environment variables named PRESBURGER_<FIELD> (upper case).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields


class CapExceeded(Exception):
    """A configured resource cap was exceeded; the run was aborted cleanly."""

    def __init__(self, cap: str, detail: str = ""):
        self.cap = cap
        self.detail = detail
        super().__init__(f"cap exceeded: {cap}" + (f" ({detail})" if detail else ""))


@dataclass
class Limits:
    # brute-force oracle: product of all domain sizes
    max_assignments: int = 10**7
    # polyhedra: ambient dimension for vertex/facet enumeration
    dim_cap: int = 6
    # convex hulls of lifted disjunct unions may use a slightly larger cap
    hull_dim_cap: int = 8
    # lattice point enumeration
    max_lattice_points: int = 10**6
    # DNF disjunct count
    max_dnf_systems: int = 64
    # subsystem count for the long-system splitter
    max_subsystems: int = 10**4
    # generating functions
    max_expand_points: int = 10**6
    max_denominator_factors: int = 12
    # parameter partitions
    max_tests_per_piece: int = 8
    max_floor_denominator: int = 12
    max_period: int = 10**5
    max_pieces: int = 10**4
    # solver recursion
    max_depth: int = 6
    work_budget: int = 10**6

    def __post_init__(self):
        for f in fields(self):
            env = os.environ.get("PRESBURGER_" + f.name.upper())
            if env is not None:
                setattr(self, f.name, int(env))


DEFAULT = Limits()

"""Seeded random corpus of bounded sentences and counting formulas.

The generator keeps instances inside the oracle's budget (small boxes) and
keeps the coordinate footprint of disjunctive matrices small so lifted
hulls stay in low dimension.  Output is deterministic per seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .formula.ast import (
    And,
    Atom,
    BoolExpr,
    Formula,
    LinearAtom,
    Not,
    Or,
    QuantBlock,
)
from .formula.parse import pretty


@dataclass
class CorpusParams:
    count: int = 100
    k_values: tuple[int, ...] = (1, 2, 3, 4)
    max_dim: int = 2
    max_atoms: int = 3
    max_bits: int = 5
    max_coeff: int = 8
    free_dim: int = 0          # >0 emits counting formulas with a free block
    free_range: int = 10       # free coordinates range over [-R, R]
    max_space: int = 10**6     # oracle search-space budget per instance


def _quantifiers(k: int) -> list[str]:
    # innermost quantifier is E; strictly alternating outward
    out = []
    q = "E"
    for _ in range(k):
        out.append(q)
        q = "A" if q == "E" else "E"
    return list(reversed(out))


def _disassoc_logspace(dims: list[int], bits: list[int], a: int) -> int:
    """log2 of the search space of the fully disassociated sentence.

    The pipeline packs outer blocks (bit length n_i * ell_i), chains partial
    sums t_j, and moves digits, recovery coordinates and hull labels into
    the last block; stage-wise oracle checks must fit this, not just the
    input sentence.
    """
    k = len(dims)
    if k == 0:
        return 0
    packed = [dims[i] * bits[i] for i in range(k - 1)]
    chain = 0
    t = 0
    for e in packed:
        t += e
        chain += t
    digits = sum(dims[i] * bits[i] for i in range(k - 1) if dims[i] > 1)
    zk = t + digits + dims[-1] * bits[-1] + a
    return chain + zk


def _pick_bits(rng: random.Random, dims: list[int], max_bits: int, budget: int,
               a: int = 3) -> list[int]:
    """Bit lengths per block, as large as the stage-check budget allows."""
    bits = [1] * len(dims)
    order = list(range(len(dims)))
    progress = True
    while progress:
        progress = False
        rng.shuffle(order)
        for i in order:
            if bits[i] >= max_bits:
                continue
            bits[i] += 1
            if _disassoc_logspace(dims, bits, a) > budget:
                bits[i] -= 1
            else:
                progress = True
    return bits


def _atom(rng: random.Random, pool: list, boxes: dict, max_coeff: int) -> LinearAtom:
    nrefs = rng.randint(1, min(2, len(pool)))
    refs = rng.sample(pool, nrefs)
    coeffs = {}
    for r in refs:
        c = 0
        while c == 0:
            c = rng.randint(-max_coeff, max_coeff)
        coeffs[r] = c
    lo = sum(c * (boxes[r][0] if c > 0 else boxes[r][1]) for r, c in coeffs.items())
    hi = sum(c * (boxes[r][1] if c > 0 else boxes[r][0]) for r, c in coeffs.items())
    rel = rng.choices(["<=", "<", "="], weights=[6, 1, 2])[0]
    if rel == "=":
        # aim for an attainable value reasonably often
        rhs = rng.randint(lo, hi) if hi >= lo else 0
    else:
        rhs = rng.randint(lo - 1, hi + 1) if hi >= lo else 0
    return LinearAtom.make(coeffs, rhs, rel)


def _matrix(rng: random.Random, pool: list, boxes: dict, a: int, max_coeff: int) -> BoolExpr:
    atoms = [Atom(_atom(rng, pool, boxes, max_coeff)) for _ in range(a)]
    shape = rng.choices(["and", "or_of_and", "and_of_or", "not_mix"],
                        weights=[5, 2, 2, 1])[0]
    if shape == "and" or a == 1:
        return atoms[0] if a == 1 else And(tuple(atoms))
    if shape == "or_of_and":
        cut = rng.randint(1, a - 1)
        left = atoms[0] if cut == 1 else And(tuple(atoms[:cut]))
        right = atoms[cut] if a - cut == 1 else And(tuple(atoms[cut:]))
        return Or((left, right))
    if shape == "and_of_or":
        cut = rng.randint(1, a - 1)
        left = atoms[0] if cut == 1 else Or(tuple(atoms[:cut]))
        right = atoms[cut] if a - cut == 1 else Or(tuple(atoms[cut:]))
        return And((left, right))
    inner = atoms[0] if a == 1 else Or(tuple(atoms))
    return Not(inner)


def random_sentence(rng: random.Random, p: CorpusParams) -> Formula:
    k = rng.choice(list(p.k_values))
    quants = _quantifiers(k)
    dims = [rng.randint(1, p.max_dim) for _ in range(k)]
    budget = 21  # log2 budget covering the disassociated stage
    while _disassoc_logspace(dims, [1] * k, 3) > budget and max(dims) > 1:
        dims[dims.index(max(dims))] -= 1
    bits = _pick_bits(rng, dims, p.max_bits, budget)
    blocks = []
    for i, (q, d, ell) in enumerate(zip(quants, dims, bits)):
        blocks.append(QuantBlock(q, f"x{i + 1}", d, (0, 2**ell - 1)))
    pool_all = [(b.name, j) for b in blocks for j in range(b.dim)]
    boxes = {r: blocks[int(r[0][1:]) - 1].bound for r in pool_all}
    a = rng.randint(1, p.max_atoms)
    # disjunctive matrices keep a small coordinate footprint (hull dimension)
    pool = pool_all if a == 1 else rng.sample(pool_all, min(len(pool_all), 3))
    matrix = _matrix(rng, pool, boxes, a, p.max_coeff)
    return Formula(None, tuple(blocks), matrix)


def random_counting_formula(rng: random.Random, p: CorpusParams) -> Formula:
    k = rng.choice([v for v in p.k_values if v >= 1])
    nq = k - 1 if k > 1 else rng.choice([0, 1])
    free_dim = rng.randint(1, p.free_dim)
    lo = rng.randint(-p.free_range, 0)
    hi = rng.randint(0, p.free_range)
    free = QuantBlock(None, "w", free_dim, (lo, hi))
    quants = _quantifiers(nq) if nq else []
    dims = [rng.randint(1, p.max_dim) for _ in range(nq)]
    bits = _pick_bits(rng, dims, p.max_bits, 14)
    blocks = []
    for i, (q, d, ell) in enumerate(zip(quants, dims, bits)):
        blocks.append(QuantBlock(q, f"x{i + 1}", d, (0, 2**ell - 1)))
    pool_all = [("w", j) for j in range(free_dim)]
    pool_all += [(b.name, j) for b in blocks for j in range(b.dim)]
    boxes = {("w", j): (lo, hi) for j in range(free_dim)}
    boxes.update({(b.name, j): b.bound for b in blocks for j in range(b.dim)})
    a = rng.randint(1, p.max_atoms)
    pool = pool_all if a == 1 else rng.sample(pool_all, min(len(pool_all), 3))
    # the free variable should appear
    if ("w", 0) not in pool:
        pool[0] = ("w", 0)
    matrix = _matrix(rng, pool, boxes, a, p.max_coeff)
    return Formula(free, tuple(blocks), matrix)


def generate(seed: int, p: CorpusParams) -> list[str]:
    """Deterministic corpus of formula texts."""
    rng = random.Random(seed)
    out = []
    for _ in range(p.count):
        if p.free_dim > 0:
            f = random_counting_formula(rng, p)
        else:
            f = random_sentence(rng, p)
        out.append(pretty(f))
    return out


def random_parametric_system(rng: random.Random, n: int = 2, max_rows: int = 6,
                             max_entry: int = 8, z_span: int = 200):
    """Random bounded parametric system data for partition tests.

    Returns (A, alpha, nu, zlo, zhi) with {x : Ax <= alpha z + nu} bounded
    for every z (box rows are always included).
    """
    rows, alpha, nu = [], [], []
    ub = rng.randint(2, 12)
    for j in range(n):
        e = [0] * n
        e[j] = 1
        rows.append(e[:])
        alpha.append(rng.choice([0, 0, 1]))
        nu.append(rng.randint(1, ub))
        e[j] = -1
        rows.append(e[:])
        alpha.append(rng.choice([0, 0, -1, 1]))
        nu.append(rng.randint(0, 2))
    extra = rng.randint(0, max_rows - len(rows)) if max_rows > len(rows) else 0
    for _ in range(extra):
        row = [rng.randint(-max_entry, max_entry) for _ in range(n)]
        if all(c == 0 for c in row):
            row[rng.randrange(n)] = 1
        rows.append(row)
        alpha.append(rng.randint(-2, 2))
        nu.append(rng.randint(-max_entry, max_entry))
    zlo = rng.randint(-20, 10)
    zhi = zlo + rng.randint(0, z_span)
    return rows, alpha, nu, zlo, zhi

"""NAE-SAT counting and decision procedures, and 2-coloring through the NAE reduction."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional

import numpy as np

from .core import Coloring
from .errors import TooLarge
from .generators import ApHypergraph, Formula

EXHAUSTIVE_MAX_N = 26
_CHUNK_BITS = 20
_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)


class Status(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SolveResult:
    status: Status
    witness: Optional[Coloring] = None
    count: Optional[int] = None
    nodes_explored: int = 0
    budget_exhausted: bool = False

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "witness": None if self.witness is None else self.witness.to_string(),
            "count": self.count,
            "nodes_explored": self.nodes_explored,
            "budget_exhausted": self.budget_exhausted,
        }


def clause_arrays(F: Formula) -> tuple[np.ndarray, np.ndarray]:
    """(m, k) arrays of clause variables and sign bits."""
    if F.m == 0:
        return np.zeros((0, F.k), dtype=np.int64), np.zeros((0, F.k), dtype=np.int8)
    vars_ = np.array([c.prog.vertices(F.n) for c in F.clauses], dtype=np.int64)
    signs = np.array([c.signs for c in F.clauses], dtype=np.int8)
    return vars_, signs


def nae_evaluate(F: Formula, s: Coloring) -> bool:
    if s.n != F.n:
        raise ValueError(f"assignment length {s.n} != n={F.n}")
    for c in F.clauses:
        values = {s[v] ^ sign for v, sign in c.literals(F.n)}
        if len(values) < 2:
            return False
    return True


def is_bichromatic_coloring(H: ApHypergraph, c: Coloring) -> bool:
    return all(len({c[v] for v in e}) == 2 for e in H.edge_vertices())


# exhaustive counting over packed assignment bitsets -----------------------

@lru_cache(maxsize=None)
def _low_masks(c: int) -> np.ndarray:
    """Row v: bitset over assignments 0..2^c-1 with bit v set. Shape (c, words)."""
    idx = np.arange(1 << c, dtype=np.uint32)
    nbits = max(1 << c, 64)
    rows = np.zeros((c, nbits // 64), dtype=np.uint64)
    for v in range(c):
        bits = np.zeros(nbits, dtype=np.uint8)
        bits[: 1 << c] = (idx >> v) & 1
        rows[v] = np.packbits(bits, bitorder="little").view(np.uint64)
    rows.setflags(write=False)
    return rows


def _chunks(n: int):
    """Yield (offset, variable masks (n, words), valid-bit mask (words,))."""
    c = min(n, _CHUNK_BITS)
    low = _low_masks(c)
    words = low.shape[1]
    valid = np.full(words, _ALL, dtype=np.uint64)
    if (1 << c) < 64:
        valid[0] = np.uint64((1 << (1 << c)) - 1)
    for h in range(1 << (n - c)):
        high = np.array([_ALL if (h >> j) & 1 else np.uint64(0) for j in range(n - c)],
                        dtype=np.uint64).reshape(-1, 1)
        masks = np.vstack([low, np.broadcast_to(high, (n - c, words))]) if n > c else low
        yield h << c, masks, valid


def _satisfying_bitsets(masks, valid, vars_, signs):
    """Bitset of NAE-satisfying assignments for leading batch dims of vars_/signs.

    vars_/signs have shape (..., m, k); result has shape (..., words).
    """
    lits = masks[vars_] ^ (signs.astype(np.uint64)[..., None] * _ALL)
    all_true = np.bitwise_and.reduce(lits, axis=-2)
    all_false = np.bitwise_and.reduce(~lits, axis=-2)
    violated = np.bitwise_or.reduce(all_true | all_false, axis=-2)
    return valid & ~violated


def count_nae_batch(n: int, vars_: np.ndarray, signs: np.ndarray) -> np.ndarray:
    """Exact NAE-solution counts for a batch of formulas, arrays of shape (B, m, k)."""
    if n > EXHAUSTIVE_MAX_N:
        raise TooLarge(f"n={n} exceeds exhaustive bound {EXHAUSTIVE_MAX_N}")
    vars_ = np.asarray(vars_, dtype=np.int64)
    signs = np.asarray(signs)
    counts = np.zeros(vars_.shape[0], dtype=np.int64)
    for _, masks, valid in _chunks(n):
        if vars_.shape[1] == 0:
            bitsets = np.broadcast_to(valid, (vars_.shape[0], valid.size))
        else:
            bitsets = _satisfying_bitsets(masks, valid, vars_, signs)
        counts += np.bitwise_count(bitsets).sum(axis=-1, dtype=np.int64)
    return counts


def count_nae_exhaustive(F: Formula, max_n: int = EXHAUSTIVE_MAX_N) -> SolveResult:
    if F.n > max_n or F.n > EXHAUSTIVE_MAX_N:
        raise TooLarge(f"n={F.n} exceeds exhaustive bound {min(max_n, EXHAUSTIVE_MAX_N)}")
    vars_, signs = clause_arrays(F)
    total = 0
    first = None
    for offset, masks, valid in _chunks(F.n):
        bitset = valid.copy()
        for vs, ss in zip(vars_, signs):
            lits = masks[vs]
            lits[ss == 1] ^= _ALL
            bitset &= np.bitwise_or.reduce(lits, axis=0) & ~np.bitwise_and.reduce(lits, axis=0)
        total += int(np.bitwise_count(bitset).sum())
        if first is None:
            nz = np.flatnonzero(bitset)
            if nz.size:
                w = int(nz[0])
                word = int(bitset[w])
                first = offset + 64 * w + ((word & -word).bit_length() - 1)
    if total == 0:
        return SolveResult(Status.UNSAT, count=0)
    return SolveResult(Status.SAT, witness=Coloring(first, F.n), count=total)


def count_2col_exhaustive(H: ApHypergraph, max_n: int = EXHAUSTIVE_MAX_N) -> SolveResult:
    return count_nae_exhaustive(Formula.from_hypergraph(H), max_n)


# backtracking decision procedure ------------------------------------------

def _prepare_clauses(F: Formula):
    """Deduplicate literals per clause. Returns None if some clause can never be satisfied.

    A clause holding x and not-x is always NAE-satisfied and is dropped; a
    clause whose literals collapse to a single one is always violated.
    """
    out = []
    for c in F.clauses:
        lits = {}
        tautology = False
        for v, s in c.literals(F.n):
            if lits.get(v, s) != s:
                tautology = True
                break
            lits[v] = s
        if tautology:
            continue
        if len(lits) < 2:
            return None
        out.append((tuple(lits), tuple(lits.values())))
    return out


def decide_nae(F: Formula, node_budget: Optional[int] = None) -> SolveResult:
    """DPLL search with NAE unit propagation.

    Branches on the lowest unassigned variable, false first. A clause whose
    assigned literals all agree and that has one literal left forces that
    literal to the opposite value. NAE solutions are closed under
    complement, so the root decision only tries false. ``node_budget``
    bounds the number of decisions; hitting it yields UNKNOWN.
    """
    n = F.n
    clauses = _prepare_clauses(F)
    if clauses is None:
        return SolveResult(Status.UNSAT)
    budget = float("inf") if node_budget is None else node_budget

    cvars = [c[0] for c in clauses]
    csigns = [c[1] for c in clauses]
    occ = [[] for _ in range(n)]
    for ci, vs in enumerate(cvars):
        for v in vs:
            occ[v].append(ci)

    assign = [-1] * n
    trail: list[int] = []

    def propagate(head: int) -> bool:
        while head < len(trail):
            v = trail[head]
            head += 1
            for ci in occ[v]:
                vs = cvars[ci]
                ss = csigns[ci]
                has0 = has1 = False
                nfree = 0
                free = -1
                for j in range(len(vs)):
                    a = assign[vs[j]]
                    if a < 0:
                        nfree += 1
                        free = j
                    elif a ^ ss[j]:
                        has1 = True
                    else:
                        has0 = True
                if has0 and has1:
                    continue
                if nfree == 0:
                    return False
                if nfree == 1:
                    u = vs[free]
                    assign[u] = (0 if has1 else 1) ^ ss[free]
                    trail.append(u)
        return True

    def undo(to: int) -> None:
        for v in trail[to:]:
            assign[v] = -1
        del trail[to:]

    nodes = 0
    frames: list[list[int]] = []  # [variable, trail length before, value tried]
    lowest = 0
    while True:
        while lowest < n and assign[lowest] >= 0:
            lowest += 1
        if lowest == n:
            witness = Coloring.from_bits(assign)
            assert nae_evaluate(F, witness)
            return SolveResult(Status.SAT, witness=witness, nodes_explored=nodes)
        if nodes >= budget:
            return SolveResult(Status.UNKNOWN, nodes_explored=nodes, budget_exhausted=True)
        nodes += 1
        v = lowest
        frames.append([v, len(trail), 0])
        assign[v] = 0
        trail.append(v)
        ok = propagate(len(trail) - 1)
        while not ok:
            while frames:
                frame = frames[-1]
                undo(frame[1])
                if frame[2] == 0 and len(frames) > 1:
                    if nodes >= budget:
                        return SolveResult(Status.UNKNOWN, nodes_explored=nodes, budget_exhausted=True)
                    nodes += 1
                    frame[2] = 1
                    assign[frame[0]] = 1
                    trail.append(frame[0])
                    ok = propagate(len(trail) - 1)
                    break
                frames.pop()
            else:
                return SolveResult(Status.UNSAT, nodes_explored=nodes)
        lowest = frames[-1][0] if frames else 0


def decide_2col(H: ApHypergraph, node_budget: Optional[int] = None) -> SolveResult:
    """2-colorability as NAE-SAT on all-positive clauses over the same progressions."""
    return decide_nae(Formula.from_hypergraph(H), node_budget)

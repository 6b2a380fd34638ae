"""Seeded samplers for random AP hypergraphs and random k-AP-NAE-SAT formulas.

Randomness comes from Philox4x64-10 (numpy's ``Philox`` bit generator), a
counter-based generator whose output is pinned by the Random123 known-answer
vectors (see tests/test_generators.py). Streams are derived with
``SeedSequence(seed, spawn_key=stream)``, so trial ``i`` of seed ``s`` can be
drawn without drawing trials ``0..i-1`` first.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from typing import Iterator, Sequence, TextIO, Union

import numpy as np

from .core import Progression, check_modulus, is_prime
from .errors import InvalidParameter, ModelViolation, ParseError

SeedLike = Union[int, np.random.Generator]


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(s) for s in stream))
    return np.random.Generator(np.random.Philox(ss))


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return make_rng(seed)


def clause_count(r, n: int) -> int:
    """m = round(r*n) with halves rounded up.

    Floats go through their shortest repr, so ``1.45`` means 1.45 and not the
    nearest binary double.
    """
    if isinstance(r, Fraction):
        rn = Decimal(r.numerator) * n / Decimal(r.denominator)
    else:
        rn = Decimal(str(r)) * n
    if rn < 0:
        raise InvalidParameter(f"negative density r={r}")
    return int(rn.quantize(Decimal(1), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class ApHypergraph:
    n: int
    k: int
    edges: tuple[Progression, ...]

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_vertices(self) -> list[list[int]]:
        return [e.vertices(self.n) for e in self.edges]


@dataclass(frozen=True)
class SignedClause:
    prog: Progression
    signs: tuple[int, ...]  # 1 = negated literal

    def literals(self, n: int) -> list[tuple[int, int]]:
        return list(zip(self.prog.vertices(n), self.signs))


@dataclass(frozen=True)
class Formula:
    n: int
    k: int
    clauses: tuple[SignedClause, ...]

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def r(self) -> Fraction:
        return Fraction(self.m, self.n)

    @classmethod
    def from_hypergraph(cls, h: ApHypergraph) -> Formula:
        """All-positive clauses: an edge is bichromatic iff its clause is NAE-satisfied."""
        zero = (0,) * h.k
        return cls(h.n, h.k, tuple(SignedClause(e, zero) for e in h.edges))


def progression_arrays(rng: np.random.Generator, n: int, size, exclude_trivial: bool = False):
    """Uniform (start, step) arrays. ``Generator.integers`` samples without modulo bias."""
    if exclude_trivial:
        idx = rng.integers(0, n * (n - 1), size=size, dtype=np.int64)
        return idx // (n - 1), idx % (n - 1) + 1
    idx = rng.integers(0, n * n, size=size, dtype=np.int64)
    return idx // n, idx % n


def sign_arrays(rng: np.random.Generator, k: int, size) -> np.ndarray:
    shape = (size, k) if np.isscalar(size) else (*size, k)
    return rng.integers(0, 2, size=shape, dtype=np.int8)


def _check_m(m: int) -> None:
    if m < 0:
        raise InvalidParameter(f"m={m} must be >= 0")


def sample_ap_hypergraph_m(n: int, k: int, m: int, seed: SeedLike,
                           exclude_trivial: bool = False) -> ApHypergraph:
    check_modulus(n, k)
    _check_m(m)
    starts, steps = progression_arrays(_rng(seed), n, m, exclude_trivial)
    edges = tuple(Progression(int(a), int(x), k) for a, x in zip(starts, steps))
    return ApHypergraph(n, k, edges)


def sample_ap_hypergraph_p(n: int, k: int, p: float, seed: SeedLike,
                           exclude_trivial: bool = False) -> ApHypergraph:
    check_modulus(n, k)
    if not 0.0 <= p <= 1.0:
        raise InvalidParameter(f"p={p} outside [0, 1]")
    width = n - 1 if exclude_trivial else n
    kept = np.flatnonzero(_rng(seed).random(n * width) < p)
    first_step = 1 if exclude_trivial else 0
    edges = tuple(Progression(int(i // width), int(i % width) + first_step, k) for i in kept)
    return ApHypergraph(n, k, edges)


def sample_nae_formula(n: int, k: int, m: int, seed: SeedLike,
                       exclude_trivial: bool = False) -> Formula:
    check_modulus(n, k)
    _check_m(m)
    rng = _rng(seed)
    starts, steps = progression_arrays(rng, n, m, exclude_trivial)
    signs = sign_arrays(rng, k, m)
    clauses = tuple(
        SignedClause(Progression(int(a), int(x), k), tuple(int(b) for b in row))
        for a, x, row in zip(starts, steps, signs)
    )
    return Formula(n, k, clauses)


# instance text format ------------------------------------------------------

def format_instance(obj: Union[Formula, ApHypergraph], comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    if isinstance(obj, Formula):
        lines.append(f"p apnae {obj.n} {obj.k} {obj.m}")
        for c in obj.clauses:
            lines.append(f"{c.prog.start} {c.prog.step} {''.join(map(str, c.signs))}")
    else:
        lines.append(f"p aphg {obj.n} {obj.k} {obj.m}")
        for e in obj.edges:
            lines.append(f"{e.start} {e.step}")
    return "\n".join(lines) + "\n"


def _iter_body(lines: Iterator[str]):
    for lineno, raw in lines:
        line = raw.strip()
        if not line or line == "c" or line.startswith("c "):
            continue
        yield lineno, line


def parse_instance(text: str) -> Union[Formula, ApHypergraph]:
    body = _iter_body(enumerate(text.splitlines(), 1))
    try:
        lineno, header = next(body)
    except StopIteration:
        raise ParseError("missing header line") from None
    parts = header.split()
    if len(parts) != 5 or parts[0] != "p" or parts[1] not in ("apnae", "aphg"):
        raise ParseError(f"line {lineno}: bad header {header!r}")
    kind = parts[1]
    try:
        n, k, m = (int(v) for v in parts[2:])
    except ValueError:
        raise ParseError(f"line {lineno}: non-integer header field") from None
    if n <= 2 or not is_prime(n):
        raise ModelViolation(f"header n={n} is not a prime > 2")
    if k < 1 or k >= n:
        raise ModelViolation(f"header k={k} must be < n={n}")

    items = []
    for lineno, line in body:
        fields = line.split()
        want = 3 if kind == "apnae" else 2
        if len(fields) != want:
            raise ParseError(f"line {lineno}: expected {want} fields")
        try:
            a, x = int(fields[0]), int(fields[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer start/step") from None
        if not (0 <= a < n and 0 <= x < n):
            raise ParseError(f"line {lineno}: start/step out of range")
        prog = Progression(a, x, k)
        if kind == "apnae":
            s = fields[2]
            if len(s) != k or set(s) - {"0", "1"}:
                raise ParseError(f"line {lineno}: sign string must be {k} chars of 0/1")
            items.append(SignedClause(prog, tuple(int(ch) for ch in s)))
        else:
            items.append(prog)
    if len(items) != m:
        raise ParseError(f"header declares m={m} but found {len(items)} lines")
    if kind == "apnae":
        return Formula(n, k, tuple(items))
    return ApHypergraph(n, k, tuple(items))


def write_instance(obj, fh: TextIO, comments: Sequence[str] = ()) -> None:
    fh.write(format_instance(obj, comments))


def read_instance(fh: TextIO):
    return parse_instance(fh.read())

"""Arithmetic progressions over Z_n and two-colorings of Z_n."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import InvalidPair, InvalidProgression, ModelViolation

# deterministic Miller-Rabin witnesses, valid for every n < 3.3e24
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_modulus(n: int, k: int) -> None:
    """Raise ModelViolation unless n is an odd prime larger than k."""
    if not isinstance(n, int) or n <= 2 or not is_prime(n):
        raise ModelViolation(f"n={n} is not a prime > 2")
    if k < 1 or k >= n:
        raise ModelViolation(f"k={k} must satisfy 1 <= k < n={n}")


@dataclass(frozen=True, order=True)
class Progression:
    start: int
    step: int
    length: int

    def vertices(self, n: int) -> list[int]:
        return progression_vertices(self, n)

    def reversed(self, n: int) -> Progression:
        """The same vertex set walked backwards, a distinct progression."""
        last = (self.start + (self.length - 1) * self.step) % n
        return Progression(last, (-self.step) % n, self.length)

    @property
    def trivial(self) -> bool:
        return self.step == 0


def progression_vertices(p: Progression, n: int) -> list[int]:
    if p.length >= n:
        raise InvalidProgression(f"length {p.length} >= n={n}")
    if not (0 <= p.start < n and 0 <= p.step < n):
        raise InvalidProgression(f"start/step must be residues mod {n}")
    return [(p.start + i * p.step) % n for i in range(p.length)]


def enumerate_progressions(n: int, k: int, exclude_trivial: bool = False) -> Iterator[Progression]:
    """All (start, step) pairs in lexicographic order: n^2 of them, or n(n-1) without step 0."""
    if k >= n:
        raise InvalidProgression(f"length {k} >= n={n}")
    first_step = 1 if exclude_trivial else 0
    for a in range(n):
        for x in range(first_step, n):
            yield Progression(a, x, k)


@dataclass(frozen=True)
class Coloring:
    """A length-n bit vector packed into an int; bit i is vertex/variable i.

    Bit 1 reads as true (or black), bit 0 as false (or white).
    """

    bits: int
    n: int
    ones_count: int = field(init=False, compare=False)

    def __post_init__(self):
        if self.n < 0 or self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits do not fit in length {self.n}")
        object.__setattr__(self, "ones_count", self.bits.bit_count())

    @classmethod
    def from_string(cls, s: str) -> Coloring:
        """Parse a 0/1 string; character i is vertex i."""
        s = s.strip()
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a 0/1 string: {s!r}")
        return cls(int(s[::-1], 2), len(s))

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> Coloring:
        value, n = 0, 0
        for i, b in enumerate(bits):
            if b:
                value |= 1 << i
            n = i + 1
        return cls(value, n)

    @classmethod
    def zeros(cls, n: int) -> Coloring:
        return cls(0, n)

    def __getitem__(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __len__(self) -> int:
        return self.n

    def to_list(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.n)]

    def to_string(self) -> str:
        return "".join(str((self.bits >> i) & 1) for i in range(self.n))

    def complement(self) -> Coloring:
        return Coloring(self.bits ^ ((1 << self.n) - 1), self.n)

    @property
    def alpha(self) -> float:
        return self.ones_count / self.n

    def __str__(self) -> str:
        return self.to_string()


def _check_pair(s: Coloring, t: Coloring) -> None:
    if s.n != t.n:
        raise InvalidPair(f"length mismatch: {s.n} != {t.n}")


def xor_coloring(s: Coloring, t: Coloring) -> Coloring:
    _check_pair(s, t)
    return Coloring(s.bits ^ t.bits, s.n)


def overlap_fraction(s: Coloring, t: Coloring) -> float:
    """Fraction of positions on which s and t agree."""
    _check_pair(s, t)
    return (s.n - (s.bits ^ t.bits).bit_count()) / s.n

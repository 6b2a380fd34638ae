"""Monochromatic arithmetic-progression counts and the clause probabilities built on them.

For k = 3 the number of monochromatic progressions in a two-coloring of Z_n
(n prime) depends only on the color-class sizes: it is n^2 - 3zn + 3z^2 for
z vertices of one color. For k >= 4 no such identity holds.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .core import Coloring, enumerate_progressions, is_prime, xor_coloring
from .errors import InvalidOverlap, InvalidParameter, InvalidProgression


@dataclass(frozen=True)
class MonoCount:
    total_progressions: int
    monochromatic: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.monochromatic, self.total_progressions)


def count_monochromatic_brute(c: Coloring, k: int, n: Optional[int] = None) -> MonoCount:
    """Evaluate sum over all n^2 ordered progressions of prod(z) + prod(1 - z)."""
    n = c.n if n is None else n
    if n != c.n:
        raise ValueError(f"coloring has length {c.n}, expected {n}")
    if k >= n:
        raise InvalidProgression(f"length {k} >= n={n}")
    z = c.to_list()
    mono = 0
    total = 0
    for p in enumerate_progressions(n, k):
        all_one = 1
        all_zero = 1
        for i in range(k):
            zi = z[(p.start + i * p.step) % n]
            all_one *= zi
            all_zero *= 1 - zi
        mono += all_one + all_zero
        total += 1
    return MonoCount(total, mono)


def mono_ap3_closed_form(n: int, z: int) -> int:
    if not 0 <= z <= n:
        raise InvalidParameter(f"z={z} outside [0, {n}]")
    return n * n - 3 * z * n + 3 * z * z


def beta_fraction(s: Coloring, t: Coloring, k: int) -> Fraction:
    """Fraction of length-k progressions that are monochromatic in s XOR t."""
    return count_monochromatic_brute(xor_coloring(s, t), k).fraction


def pair_nae_satisfy_prob(s: Coloring, t: Coloring, k: int) -> Fraction:
    """Probability that both assignments NAE-satisfy a uniform random AP clause."""
    beta = beta_fraction(s, t, k)
    return 1 - Fraction(4, 2**k) + Fraction(2, 2**k) * beta


def bichromatic_prob_single(alpha, k: int = 3):
    """Probability a uniform random edge is bichromatic under a coloring with black fraction alpha.

    Exact for AP edges only at k = 3. Returns a Fraction for Fraction input.
    """
    if not 0 <= alpha <= 1:
        raise InvalidParameter(f"alpha={alpha} outside [0, 1]")
    return 1 - alpha**k - (1 - alpha) ** k


def pair_bichromatic_prob(alpha, beta, gamma, k: int = 3):
    """Probability a uniform random edge is bichromatic under two colorings.

    alpha, beta are the black fractions of each coloring and gamma the
    fraction black in both. This is exact for edges whose vertices are i.i.d.
    uniform; for AP edges it is only the standard-model value (see README).
    """
    if not (0 <= gamma <= min(alpha, beta) and alpha + beta - gamma <= 1):
        raise InvalidOverlap(f"infeasible overlap ({alpha}, {beta}, {gamma})")
    return (
        1
        - alpha**k - (1 - alpha) ** k
        - beta**k - (1 - beta) ** k
        + gamma**k + (alpha - gamma) ** k + (beta - gamma) ** k
        + (1 - alpha - beta + gamma) ** k
    )


def find_mono_count_witness(n: int, k: int) -> Optional[tuple[Coloring, Coloring]]:
    """First pair (in bit order) of colorings with equal ones_count but different
    monochromatic k-AP counts, or None if the count depends only on ones_count.

    Exhaustive over 2^n colorings; use only for small n.
    """
    if not is_prime(n):
        raise InvalidParameter(f"n={n} is not prime")
    seen: dict[int, dict[int, Coloring]] = defaultdict(dict)
    for bits in range(1 << n):
        c = Coloring(bits, n)
        mono = count_monochromatic_brute(c, k).monochromatic
        by_count = seen[c.ones_count]
        if by_count and mono not in by_count:
            first = next(iter(by_count.values()))
            return first, c
        by_count.setdefault(mono, c)
    return None

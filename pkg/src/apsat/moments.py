"""First and second moments of the solution count, in log2 space.

Sums over overlaps are evaluated with log-sum-exp over log-gamma binomial
and multinomial weights; nothing is formed as a direct product.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.optimize import minimize, minimize_scalar
from scipy.special import entr, gammaln, logsumexp

from .core import check_modulus
from .errors import InvalidParameter, UnsupportedK
from .generators import clause_count

LN2 = math.log(2.0)
DIAG_TOL = 1e-9
_GRID_STEP = 1e-4


def _log2sumexp(terms) -> float:
    terms = np.asarray(terms, dtype=float)
    if np.all(np.isneginf(terms)):
        return -math.inf
    return float(logsumexp(terms * LN2) / LN2)


def _log2_binom(n: int, z):
    return (gammaln(n + 1) - gammaln(z + 1) - gammaln(n - z + 1)) / LN2


def _resolve_m(n: int, r, m: Optional[int]) -> int:
    if m is not None:
        if m < 0:
            raise InvalidParameter(f"m={m} must be >= 0")
        return m
    if r is None:
        raise InvalidParameter("one of r or m is required")
    return clause_count(r, n)


def _m_log2(m: int, log2_p):
    """m * log2(p) with the convention 0 * log2(0) = 0 (an empty product is 1)."""
    log2_p = np.asarray(log2_p, dtype=float)
    if m == 0:
        return np.zeros_like(log2_p)
    return m * log2_p


def binary_entropy(x):
    """H(x) in bits; H(0) = H(1) = 0. Works elementwise on arrays."""
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x > 1)):
        raise InvalidParameter("entropy argument outside [0, 1]")
    h = (entr(x) + entr(1.0 - x)) / LN2
    return float(h) if h.ndim == 0 else h


def f_alpha(alpha, k: int = 3):
    """Probability two assignments with overlap alpha both NAE-satisfy a random clause.

    1 - 2^(2-k) + 2^(1-k) (alpha^k + (1-alpha)^k). Exact for Fraction input;
    elementwise for arrays.
    """
    if isinstance(alpha, Fraction):
        c = Fraction(2, 2**k)
    else:
        c = 2.0 ** (1 - k)
    return 1 - 2 * c + c * (alpha**k + (1 - alpha) ** k)


def log2_first_moment_nae(n: int, k: int, m: int) -> float:
    if k < 3 or m < 0:
        raise InvalidParameter("need k >= 3 and m >= 0")
    return n + m * math.log2(1.0 - 2.0 ** (1 - k))


def first_moment_threshold(k: int) -> float:
    """Density above which E[X] -> 0: the root of 2 (1 - 2^(1-k))^r = 1."""
    if k < 3:
        raise InvalidParameter("need k >= 3")
    return -1.0 / math.log2(1.0 - 2.0 ** (1 - k))


def log2_second_moment_nae(n: int, k: int, r=None, *, m: Optional[int] = None) -> float:
    """log2 E[X^2] = log2( 2^n * sum_z C(n,z) f(z/n)^m ).

    The 2^n counts the assignments sigma; for each, C(n,z) partners tau agree
    with it on exactly z variables. k = 3 only: for longer progressions the
    pair probability is not a function of the overlap.
    """
    if k != 3:
        raise UnsupportedK(f"closed-form second moment needs k=3, got k={k}")
    m = _resolve_m(n, r, m)
    z = np.arange(n + 1)
    alpha = z / n
    terms = _log2_binom(n, z) + _m_log2(m, np.log2(f_alpha(alpha, k)))
    return n + _log2sumexp(terms)


@dataclass(frozen=True)
class Diagnostic:
    argmax_alpha: float
    success: bool
    log2_max: float       # per-variable exponent of the second-moment bound
    log2_baseline: float  # per-variable exponent of E[X]^2


def _nae_log2_g(alpha, k: int, r: float):
    return binary_entropy(alpha) + r * np.log2(f_alpha(alpha, k))


def second_moment_diagnostic(k: int, r: float, tol: float = DIAG_TOL) -> Diagnostic:
    """Check whether the overlap alpha = 1/2 dominates the NAE second moment.

    E[X^2] <= (n+1) (2 max_a 2^H(a) f(a)^r)^n while E[X]^2 = (4 f(1/2)^r)^n,
    so the bound is within a polynomial factor of E[X]^2 exactly when
    1 + max_a log2 g(a) <= 2 + r log2 f(1/2).
    """
    if k < 3 or r <= 0:
        raise InvalidParameter("need k >= 3 and r > 0")
    grid = np.linspace(0.0, 1.0, int(round(1 / _GRID_STEP)) + 1)
    vals = _nae_log2_g(grid, k, r)
    i = int(np.argmax(vals))
    best_alpha, best = float(grid[i]), float(vals[i])
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(lambda a: -float(_nae_log2_g(a, k, r)), bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-9})
    if res.success and -res.fun > best:
        best_alpha, best = float(res.x), float(-res.fun)
    log2_max = 1.0 + best
    baseline = 2.0 + 2.0 * r * math.log2(1.0 - 2.0 ** (1 - k))
    return Diagnostic(best_alpha, log2_max <= baseline + tol, log2_max, baseline)


# hypergraph 2-coloring, k = 3 ---------------------------------------------

def _log2_bichromatic_counts(n: int, z):
    """log2 of (n^3 - z^3 - (n-z)^3) / n^3, exact zero -> -inf."""
    z = np.asarray(z, dtype=np.int64)
    num = n**3 - z**3 - (n - z) ** 3
    with np.errstate(divide="ignore"):
        return np.log2(num.astype(float)) - 3 * math.log2(n)


def log2_first_moment_2col(n: int, r=None, *, m: Optional[int] = None) -> float:
    m = _resolve_m(n, r, m)
    z = np.arange(n + 1)
    terms = _log2_binom(n, z) + _m_log2(m, _log2_bichromatic_counts(n, z))
    return _log2sumexp(terms)


def _pair_bichromatic_counts(n: int, a, b, g):
    """n^3 * p(a/n, b/n, g/n) as exact integers."""
    return (n**3 - a**3 - (n - a) ** 3 - b**3 - (n - b) ** 3
            + g**3 + (a - g) ** 3 + (b - g) ** 3 + (n - a - b + g) ** 3)


def log2_second_moment_2col(n: int, r=None, *, m: Optional[int] = None) -> float:
    """Multinomial sum over (z1, z2, z3, z4): black in both, S only, T only, neither.

    The pair probability is evaluated at (alpha, beta, gamma) =
    ((z1+z2)/n, (z1+z3)/n, z1/n). This is E[X^2] for edges with i.i.d.
    uniform vertices; for AP edges it is not exact (see README).
    """
    m = _resolve_m(n, r, m)
    log2_n3 = 3 * math.log2(n)
    lg_n = gammaln(n + 1)
    partial = []
    for z1 in range(n + 1):
        rest = n - z1
        z2, z3 = np.meshgrid(np.arange(rest + 1), np.arange(rest + 1), indexing="ij")
        mask = z2 + z3 <= rest
        z2, z3 = z2[mask].astype(np.int64), z3[mask].astype(np.int64)
        z4 = rest - z2 - z3
        log_mult = (lg_n - gammaln(z1 + 1) - gammaln(z2 + 1) - gammaln(z3 + 1) - gammaln(z4 + 1)) / LN2
        counts = _pair_bichromatic_counts(n, z1 + z2, z1 + z3, np.int64(z1))
        with np.errstate(divide="ignore"):
            log2_p = np.log2(counts.astype(float)) - log2_n3
        partial.append(_log2sumexp(log_mult + _m_log2(m, log2_p)))
    return _log2sumexp(partial)


def _log2_q(alpha):
    alpha = np.asarray(alpha, dtype=float)
    with np.errstate(divide="ignore"):
        return np.log2(1.0 - alpha**3 - (1.0 - alpha) ** 3)


def _entropy4(x):
    x = np.asarray(x, dtype=float)
    return entr(x).sum(axis=0) / LN2


def _log2_p(x1, x2, x3, x4):
    a, b, g = x1 + x2, x1 + x3, x1
    p = (1 - a**3 - (1 - a) ** 3 - b**3 - (1 - b) ** 3
         + g**3 + (a - g) ** 3 + (b - g) ** 3 + x4**3)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log2(np.clip(p, 0.0, None))


def second_moment_diagnostic_2col(r: float, tol: float = DIAG_TOL, grid_step: float = 0.005) -> Diagnostic:
    """Compare max over pair-overlap profiles x of H(x) + r log2 p(x) with
    twice the first-moment exponent max_a H(a) + r log2 q(a).

    argmax_alpha reports the agreement fraction x1 + x4 of the maximizer;
    it is 1/2 at the independent profile (1/4, 1/4, 1/4, 1/4).
    """
    if r <= 0:
        raise InvalidParameter("need r > 0")

    def first(a):
        return binary_entropy(a) + r * _log2_q(a)

    grid = np.linspace(0.0, 1.0, int(round(1 / _GRID_STEP)) + 1)
    fv = first(grid)
    j = int(np.argmax(fv))
    res1 = minimize_scalar(lambda a: -float(first(a)), method="bounded", options={"xatol": 1e-9},
                           bounds=(grid[max(j - 1, 0)], grid[min(j + 1, len(grid) - 1)]))
    first_max = max(float(fv[j]), float(-res1.fun))
    baseline = 2.0 * first_max

    steps = int(round(1 / grid_step))
    i1, i2, i3 = np.meshgrid(*(np.arange(steps + 1),) * 3, indexing="ij")
    keep = i1 + i2 + i3 <= steps
    x = np.stack([i1[keep], i2[keep], i3[keep]]).astype(float) / steps
    x = np.vstack([x, 1.0 - x.sum(axis=0)])
    x[3] = np.clip(x[3], 0.0, 1.0)

    def second(v):
        return _entropy4(v) + r * _log2_p(*v)

    sv = second(x)
    i = int(np.nanargmax(sv))
    best_x, best = x[:, i], float(sv[i])

    def neg(y):
        v = np.array([y[0], y[1], y[2], 1.0 - y[0] - y[1] - y[2]])
        if np.any(v < 0):
            return 1e6
        val = float(second(v))
        return -val if np.isfinite(val) else 1e6

    res = minimize(neg, best_x[:3], method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 4000})
    if -res.fun > best:
        y = res.x
        best_x, best = np.array([y[0], y[1], y[2], 1.0 - y.sum()]), float(-res.fun)
    agree = float(best_x[0] + best_x[3])
    return Diagnostic(agree, best <= baseline + tol, best, baseline)


# reports -------------------------------------------------------------------

@dataclass(frozen=True)
class MomentReport:
    problem: str
    n: int
    k: int
    r: float
    m: int
    log2_EX: float
    log2_EX2: Optional[float]
    per_n_gap: Optional[float]
    diag_argmax_alpha: Optional[float] = None
    diag_success: Optional[bool] = None

    def to_dict(self) -> dict:
        return asdict(self)


def moment_report(problem: str, n: int, k: int, r, diagnostic: bool = False) -> MomentReport:
    check_modulus(n, k)
    m = clause_count(r, n)
    if problem == "nae":
        ex = log2_first_moment_nae(n, k, m)
        ex2 = log2_second_moment_nae(n, k, m=m) if k == 3 else None
        diag = second_moment_diagnostic(k, float(r)) if diagnostic and r > 0 else None
    elif problem == "2col":
        if k != 3:
            raise UnsupportedK(f"2-coloring moments need k=3, got k={k}")
        ex = log2_first_moment_2col(n, m=m)
        ex2 = log2_second_moment_2col(n, m=m)
        diag = second_moment_diagnostic_2col(float(r)) if diagnostic and r > 0 else None
    else:
        raise InvalidParameter(f"unknown problem {problem!r}")
    gap = None if ex2 is None else (ex2 - 2.0 * ex) / n
    return MomentReport(
        problem, n, k, float(r), m, ex, ex2, gap,
        None if diag is None else diag.argmax_alpha,
        None if diag is None else diag.success,
    )

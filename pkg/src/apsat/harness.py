"""Monte Carlo satisfiability estimates, threshold scans and moment checks.

Trial ``t`` at grid point ``i`` always draws from the stream
``(seed, i, t)``, so results do not depend on how trials are split across
worker processes.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Optional, Sequence, TextIO

import numpy as np
from scipy.optimize import isotonic_regression
from scipy.stats import binomtest

from .core import check_modulus
from .errors import BudgetTooSmall, InsufficientRange, InvalidParameter, TooLarge
from .generators import clause_count, make_rng, progression_arrays, sample_ap_hypergraph_m, sample_nae_formula, sign_arrays
from .moments import log2_first_moment_2col, log2_first_moment_nae, log2_second_moment_2col, log2_second_moment_nae
from .solvers import EXHAUSTIVE_MAX_N, Status, count_nae_batch, decide_2col, decide_nae

PROBLEMS = ("nae", "2col")
DEFAULT_BUDGET = 1_000_000


@dataclass(frozen=True)
class ScanRow:
    r: float
    n: int
    k: int
    trials: int
    sat: int
    unsat: int
    unknown: int
    p_hat: float
    ci_lo: float
    ci_hi: float


CSV_FIELDS = [f.name for f in fields(ScanRow)]


def wilson_interval(successes: int, total: int, confidence: float = 0.95) -> tuple[float, float]:
    ci = binomtest(successes, total).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def make_row(r: float, n: int, k: int, sat: int, unsat: int, unknown: int) -> ScanRow:
    decided = sat + unsat
    if decided == 0:
        raise BudgetTooSmall(f"all {unknown} trials at r={r} hit the node budget")
    p_hat = sat / decided
    lo, hi = wilson_interval(sat, decided)
    return ScanRow(r, n, k, sat + unsat + unknown, sat, unsat, unknown, p_hat, min(lo, p_hat), max(hi, p_hat))


def _check_problem(problem: str, n: int, k: int) -> None:
    if problem not in PROBLEMS:
        raise InvalidParameter(f"unknown problem {problem!r}")
    check_modulus(n, k)


def solve_trial(problem: str, n: int, k: int, m: int, seed: int, r_index: int, trial: int,
                node_budget: Optional[int], exclude_trivial: bool) -> Status:
    rng = make_rng(seed, r_index, trial)
    if problem == "nae":
        return decide_nae(sample_nae_formula(n, k, m, rng, exclude_trivial), node_budget).status
    return decide_2col(sample_ap_hypergraph_m(n, k, m, rng, exclude_trivial), node_budget).status


def _run_cell(cell) -> tuple[int, int, int, int]:
    problem, n, k, m, seed, r_index, lo, hi, budget, exclude_trivial = cell
    tally = {Status.SAT: 0, Status.UNSAT: 0, Status.UNKNOWN: 0}
    for t in range(lo, hi):
        tally[solve_trial(problem, n, k, m, seed, r_index, t, budget, exclude_trivial)] += 1
    return r_index, tally[Status.SAT], tally[Status.UNSAT], tally[Status.UNKNOWN]


def _tally_cells(cells: list, workers: int) -> dict[int, list[int]]:
    totals: dict[int, list[int]] = {}
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, cells))
    else:
        results = [_run_cell(c) for c in cells]
    for r_index, sat, unsat, unknown in results:
        acc = totals.setdefault(r_index, [0, 0, 0])
        acc[0] += sat
        acc[1] += unsat
        acc[2] += unknown
    return totals


def _cells(problem, n, k, m, seed, r_index, trials, budget, exclude_trivial, chunk):
    return [
        (problem, n, k, m, seed, r_index, lo, min(lo + chunk, trials), budget, exclude_trivial)
        for lo in range(0, trials, chunk)
    ]


def estimate_sat_probability(problem: str, n: int, k: int, r: float, trials: int, seed: int,
                             node_budget: Optional[int] = DEFAULT_BUDGET, exclude_trivial: bool = False,
                             workers: int = 1, r_index: int = 0) -> ScanRow:
    _check_problem(problem, n, k)
    if trials < 1:
        raise InvalidParameter("trials must be >= 1")
    m = clause_count(r, n)
    chunk = max(1, math.ceil(trials / (4 * workers)))
    totals = _tally_cells(_cells(problem, n, k, m, seed, r_index, trials, node_budget, exclude_trivial, chunk),
                          workers)
    sat, unsat, unknown = totals[r_index]
    return make_row(r, n, k, sat, unsat, unknown)


def density_grid(r_min: float, r_max: float, r_step: float) -> list[float]:
    if r_step <= 0:
        raise InvalidParameter("r_step must be > 0")
    if r_max < r_min:
        raise InvalidParameter("r_max must be >= r_min")
    count = int(math.floor((r_max - r_min) / r_step + 1e-9)) + 1
    return [round(r_min + i * r_step, 10) for i in range(count)]


def threshold_scan(problem: str, n: int, k: int, r_min: float, r_max: float, r_step: float,
                   trials: int, seed: int, node_budget: Optional[int] = DEFAULT_BUDGET,
                   exclude_trivial: bool = False, workers: int = 1) -> list[ScanRow]:
    _check_problem(problem, n, k)
    if trials < 1:
        raise InvalidParameter("trials must be >= 1")
    grid = density_grid(r_min, r_max, r_step)
    chunk = max(1, math.ceil(trials * len(grid) / (8 * workers)))
    chunk = min(chunk, trials)
    cells = []
    for i, r in enumerate(grid):
        cells += _cells(problem, n, k, clause_count(r, n), seed, i, trials, node_budget, exclude_trivial, chunk)
    totals = _tally_cells(cells, workers)
    return [make_row(r, n, k, *totals[i]) for i, r in enumerate(grid)]


def write_scan_csv(rows: Iterable[ScanRow], fh: TextIO) -> None:
    writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        d = asdict(row)
        for key in ("p_hat", "ci_lo", "ci_hi"):
            d[key] = f"{d[key]:.6f}"
        d["r"] = f"{row.r:g}"
        writer.writerow(d)


def _down_crossing(r: Sequence[float], p: Sequence[float]) -> Optional[float]:
    for i in range(len(p) - 1):
        if p[i] >= 0.5 > p[i + 1]:
            return r[i] + (p[i] - 0.5) / (p[i] - p[i + 1]) * (r[i + 1] - r[i])
    return None


def crossover_estimate(rows: Sequence[ScanRow]) -> float:
    """Density where the estimated satisfiability probability crosses 1/2.

    Linear interpolation between the bracketing grid points. If noise makes
    the sequence cross 1/2 more than once, the crossing is taken from the
    non-increasing isotonic fit (weighted by decided trials).
    """
    rows = sorted((row for row in rows if row.sat + row.unsat > 0), key=lambda row: row.r)
    if not rows:
        raise InsufficientRange("no rows with decided trials")
    r = [row.r for row in rows]
    p = [row.p_hat for row in rows]
    if min(p) >= 0.5 or max(p) < 0.5:
        raise InsufficientRange("p_hat does not bracket 1/2")
    above = [x >= 0.5 for x in p]
    changes = sum(a != b for a, b in zip(above, above[1:]))
    if changes == 1 and above[0]:
        return _down_crossing(r, p)
    weights = np.array([row.sat + row.unsat for row in rows], dtype=float)
    fit = isotonic_regression(np.array(p), weights=weights, increasing=False).x
    crossing = _down_crossing(r, list(fit))
    if crossing is None:
        raise InsufficientRange("isotonic fit does not cross 1/2")
    return crossing


# Monte Carlo check of the moment formulas ---------------------------------

@dataclass(frozen=True)
class MomentCheck:
    problem: str
    n: int
    k: int
    m: int
    samples: int
    mean_X: float
    se_X: float
    expected_X: float
    mean_X2: float
    se_X2: float
    expected_X2: Optional[float]

    @property
    def z_X(self) -> float:
        return _zscore(self.mean_X, self.expected_X, self.se_X)

    @property
    def z_X2(self) -> Optional[float]:
        if self.expected_X2 is None:
            return None
        return _zscore(self.mean_X2, self.expected_X2, self.se_X2)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["z_X"] = self.z_X
        d["z_X2"] = self.z_X2
        return d


def _zscore(mean: float, expected: float, se: float) -> float:
    if se == 0:
        return 0.0 if mean == expected else math.copysign(math.inf, mean - expected)
    return (mean - expected) / se


def sample_solution_counts(problem: str, n: int, k: int, m: int, samples: int, seed: int,
                           batch: int = 4096) -> np.ndarray:
    """Exact X for ``samples`` random instances; batch b draws from stream (seed, b)."""
    _check_problem(problem, n, k)
    if n > EXHAUSTIVE_MAX_N:
        raise TooLarge(f"n={n} exceeds exhaustive bound {EXHAUSTIVE_MAX_N}")
    out = []
    steps = np.arange(k)
    for b, lo in enumerate(range(0, samples, batch)):
        size = min(batch, samples - lo)
        rng = make_rng(seed, b)
        starts, strides = progression_arrays(rng, n, (size, m))
        vars_ = (starts[..., None] + steps * strides[..., None]) % n
        if problem == "nae":
            signs = sign_arrays(rng, k, (size, m))
        else:
            signs = np.zeros((size, m, k), dtype=np.int8)
        out.append(count_nae_batch(n, vars_, signs))
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


def verify_moments_montecarlo(problem: str, n: int, k: int, m: int, samples: int, seed: int) -> MomentCheck:
    if samples < 2:
        raise InvalidParameter("need at least 2 samples")
    x = sample_solution_counts(problem, n, k, m, samples, seed).astype(float)
    x2 = x * x
    if problem == "nae":
        expected_x = 2.0 ** log2_first_moment_nae(n, k, m)
        expected_x2 = 2.0 ** log2_second_moment_nae(n, k, m=m) if k == 3 else None
    else:
        if k != 3:
            raise InvalidParameter("2-coloring moments need k=3")
        expected_x = 2.0 ** log2_first_moment_2col(n, m=m)
        expected_x2 = 2.0 ** log2_second_moment_2col(n, m=m)
    root = math.sqrt(samples)
    return MomentCheck(problem, n, k, m, samples,
                       float(x.mean()), float(x.std(ddof=1) / root), expected_x,
                       float(x2.mean()), float(x2.std(ddof=1) / root), expected_x2)

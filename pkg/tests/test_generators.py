import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.stats import chisquare

from apsat.core import Progression
from apsat.errors import InvalidParameter, ModelViolation, ParseError
from apsat.generators import (ApHypergraph, Formula, SignedClause, clause_count, format_instance, make_rng,
                              parse_instance, sample_ap_hypergraph_m, sample_ap_hypergraph_p, sample_nae_formula)


def test_philox_known_answer_vectors():
    # Random123 kat_vectors, philox4x64-10; numpy pre-increments the counter
    m = 2**64 - 1
    g = np.random.Philox(counter=[m] * 4, key=[0, 0])
    assert [hex(v) for v in g.random_raw(4)] == [
        "0x16554d9eca36314c", "0xdb20fe9d672d0fdc", "0xd7e772cee186176b", "0x7e68b68aec7ba23b"]
    g = np.random.Philox(counter=[m - 1, m, m, m], key=[m, m])
    assert [hex(v) for v in g.random_raw(4)] == [
        "0x87b092c3013fe90b", "0x438c3c67be8d0224", "0x9cc7d7c69cd777b6", "0xa09caebf594f0ba0"]


def test_make_rng_is_philox_and_stream_addressable():
    assert isinstance(make_rng(1).bit_generator, np.random.Philox)
    a = make_rng(7, 3, 11).integers(0, 2**32, size=8)
    b = make_rng(7, 3, 11).integers(0, 2**32, size=8)
    c = make_rng(7, 3, 12).integers(0, 2**32, size=8)
    assert (a == b).all() and not (a == c).all()


def test_sampler_output_pinned():
    # frozen regression output: guards cross-version reproducibility
    h = sample_ap_hypergraph_m(7, 3, 4, seed=1)
    f = sample_nae_formula(7, 3, 4, seed=1)
    assert [(e.start, e.step) for e in h.edges] == [(c.prog.start, c.prog.step) for c in f.clauses]
    assert format_instance(f) == "p apnae 7 3 4\n2 6 011\n0 3 011\n1 1 000\n0 3 111\n"


@pytest.mark.parametrize("r,n,m", [(1.4, 53, 74), (0.5, 5, 3), (0.1, 5, 1), (1.5, 3, 5),
                                   (Fraction(2, 5), 5, 2), (0.3, 5, 2), (0, 11, 0)])
def test_clause_count_half_up(r, n, m):
    assert clause_count(r, n) == m


def test_m_zero_and_determinism():
    assert sample_ap_hypergraph_m(5, 3, 0, seed=3).edges == ()
    assert sample_nae_formula(5, 3, 0, seed=3).clauses == ()
    assert sample_ap_hypergraph_m(11, 3, 50, seed=9) == sample_ap_hypergraph_m(11, 3, 50, seed=9)
    assert sample_nae_formula(11, 3, 50, seed=9) == sample_nae_formula(11, 3, 50, seed=9)
    assert sample_nae_formula(11, 3, 50, seed=9) != sample_nae_formula(11, 3, 50, seed=10)


def test_invalid_modulus_and_parameters():
    with pytest.raises(ModelViolation):
        sample_ap_hypergraph_m(9, 3, 5, seed=0)
    with pytest.raises(ModelViolation):
        sample_nae_formula(5, 5, 5, seed=0)
    for p in (-0.1, 1.5):
        with pytest.raises(InvalidParameter):
            sample_ap_hypergraph_p(5, 3, p, seed=0)


def test_exclude_trivial():
    h = sample_ap_hypergraph_m(5, 3, 5000, seed=2, exclude_trivial=True)
    assert all(e.step != 0 for e in h.edges)
    assert {(e.start, e.step) for e in h.edges} == {(a, x) for a in range(5) for x in range(1, 5)}


def _within_3sigma(counts, total, p):
    half = 3 * math.sqrt(p * (1 - p) / total)
    return np.all(np.abs(counts / total - p) <= half)


def test_hypergraph_m_uniform_over_25_progressions():
    total = 10**6
    h = sample_ap_hypergraph_m(5, 3, total, seed=2024)
    counts = np.zeros(25)
    for e in h.edges:
        counts[e.start * 5 + e.step] += 1
    assert _within_3sigma(counts, total, 0.04)
    assert chisquare(counts).pvalue > 1e-3


def test_nae_formula_uniform_over_200_clauses():
    total = 10**6
    f = sample_nae_formula(5, 3, total, seed=2024)
    counts = np.zeros(200)
    for c in f.clauses:
        counts[(c.prog.start * 5 + c.prog.step) * 8 + c.signs[0] * 4 + c.signs[1] * 2 + c.signs[2]] += 1
    assert len(np.flatnonzero(counts)) == 2**3 * 5**2
    assert _within_3sigma(counts, total, 0.005)
    assert chisquare(counts).pvalue > 1e-3


def test_sign_bits_fair_and_uncorrelated():
    f = sample_nae_formula(13, 4, 200_000, seed=5)
    signs = np.array([c.signs for c in f.clauses], dtype=float)
    se = 0.5 / math.sqrt(len(signs))
    assert np.all(np.abs(signs.mean(axis=0) - 0.5) <= 4 * se)
    corr = np.corrcoef(signs.T)
    off = corr[~np.eye(4, dtype=bool)]
    assert np.all(np.abs(off) <= 4 / math.sqrt(len(signs)))


def test_hypergraph_p_extremes():
    assert sample_ap_hypergraph_p(5, 3, 0.0, seed=1).edges == ()
    full = sample_ap_hypergraph_p(5, 3, 1.0, seed=1)
    assert sorted((e.start, e.step) for e in full.edges) == [(a, x) for a in range(5) for x in range(5)]
    assert len(sample_ap_hypergraph_p(5, 3, 1.0, seed=1, exclude_trivial=True).edges) == 20


@pytest.mark.slow
def test_hypergraph_p_binomial_edge_count():
    n, p, seeds = 101, 0.01, 10_000
    sizes = np.array([len(sample_ap_hypergraph_p(n, 3, p, seed=s).edges) for s in range(seeds)])
    mean = n * n * p
    assert mean == pytest.approx(102.01)
    assert abs(sizes.mean() - mean) <= 3 * math.sqrt(n * n * p * (1 - p)) / 100
    assert sizes.var(ddof=1) == pytest.approx(n * n * p * (1 - p), rel=0.05)


def test_instance_roundtrip():
    f = sample_nae_formula(11, 4, 30, seed=4)
    h = sample_ap_hypergraph_m(11, 3, 30, seed=4)
    assert parse_instance(format_instance(f, ["hello"])) == f
    assert parse_instance(format_instance(h)) == h
    text = "c comment\np aphg 5 3 2\n0 1\n4 0\n"
    assert parse_instance(text) == ApHypergraph(5, 3, (Progression(0, 1, 3), Progression(4, 0, 3)))
    text = "p apnae 5 3 1\nc mid-file comment\n1 2 101\n"
    assert parse_instance(text) == Formula(5, 3, (SignedClause(Progression(1, 2, 3), (1, 0, 1)),))


@pytest.mark.parametrize("text,exc", [
    ("p apnae 9 3 0\n", ModelViolation),
    ("p aphg 5 5 0\n", ModelViolation),
    ("p aphg 5 7 0\n", ModelViolation),
    ("p aphg 5 3 2\n0 1\n", ParseError),
    ("p apnae 5 3 1\n0 1 10\n", ParseError),
    ("p apnae 5 3 1\n0 1 102\n", ParseError),
    ("p aphg 5 3 1\n0 5\n", ParseError),
    ("p cnf 5 3\n", ParseError),
    ("", ParseError),
])
def test_parser_rejects(text, exc):
    with pytest.raises(exc):
        parse_instance(text)

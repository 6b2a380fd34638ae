from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from apsat.core import Coloring, overlap_fraction, xor_coloring
from apsat.counting import (beta_fraction, bichromatic_prob_single, count_monochromatic_brute,
                            find_mono_count_witness, mono_ap3_closed_form, pair_bichromatic_prob,
                            pair_nae_satisfy_prob)
from apsat.errors import InvalidOverlap, InvalidParameter

from oracles import all_assignments, all_clauses, ap_vertex_lists, bichromatic, nae_ok

# mined once with find_mono_count_witness(13, 4); equal ones_count, different 4-AP counts
K4_WITNESS = ("1110000000000", "1101000000000")


def coloring_st(n):
    return st.integers(0, 2**n - 1).map(lambda b: Coloring(b, n))


def test_all_black_n5():
    mc = count_monochromatic_brute(Coloring.from_string("11111"), 3)
    assert (mc.total_progressions, mc.monochromatic) == (25, 25)
    assert mc.fraction == 1


def test_two_ones_n5_gives_7():
    assert count_monochromatic_brute(Coloring.from_string("11000"), 3).monochromatic == 7
    assert count_monochromatic_brute(Coloring.from_string("10100"), 3).monochromatic == 7


@pytest.mark.parametrize("n,z,expected", [(5, 0, 25), (5, 2, 7), (7, 3, 13)])
def test_closed_form_examples(n, z, expected):
    assert mono_ap3_closed_form(n, z) == expected


def test_closed_form_range():
    with pytest.raises(InvalidParameter):
        mono_ap3_closed_form(5, 6)
    with pytest.raises(InvalidParameter):
        mono_ap3_closed_form(5, -1)


def test_n7_z3_every_coloring():
    for bits in range(1 << 7):
        c = Coloring(bits, 7)
        if c.ones_count == 3:
            assert count_monochromatic_brute(c, 3).monochromatic == 13


@given(data=st.data(), n=st.sampled_from([17, 19, 23, 29, 31]))
@settings(max_examples=40)
def test_closed_form_random_colorings(data, n):
    c = data.draw(coloring_st(n))
    assert count_monochromatic_brute(c, 3).monochromatic == mono_ap3_closed_form(n, c.ones_count)


def test_mono_count_matches_naive_vertex_lists():
    n, k = 11, 4
    for bits in (0b10110011101, 0b00000000001, 0b11111011111):
        c = Coloring(bits, n)
        naive = sum(len({c[v] for v in vs}) == 1 for vs in ap_vertex_lists(n, k))
        assert count_monochromatic_brute(c, k).monochromatic == naive


@given(data=st.data(), n=st.sampled_from([5, 7, 11, 13]), k=st.sampled_from([3, 4]))
def test_complement_symmetry(data, n, k):
    s, t = data.draw(coloring_st(n)), data.draw(coloring_st(n))
    assert beta_fraction(s, t, k) == beta_fraction(s.complement(), t.complement(), k)
    assert count_monochromatic_brute(s, k) == count_monochromatic_brute(s.complement(), k)
    assert mono_ap3_closed_form(n, s.ones_count) == mono_ap3_closed_form(n, n - s.ones_count)


def test_beta_examples():
    s = Coloring.from_string("10110")
    for k in (3, 4):
        assert beta_fraction(s, s, k) == 1
    t = Coloring.from_string("01110")  # agrees on 3 of 5
    assert overlap_fraction(s, t) == 3 / 5
    assert beta_fraction(s, t, 3) == Fraction(27, 125) + Fraction(8, 125) == Fraction(7, 25)


def test_k4_witness_fixture():
    a, b = (Coloring.from_string(x) for x in K4_WITNESS)
    assert a.ones_count == b.ones_count
    assert count_monochromatic_brute(a, 4).monochromatic != count_monochromatic_brute(b, 4).monochromatic
    # same ones_count paired with the zero assignment gives equal overlap but different beta
    zero = Coloring.zeros(13)
    assert overlap_fraction(a, zero) == overlap_fraction(b, zero)
    assert beta_fraction(a, zero, 4) != beta_fraction(b, zero, 4)


def test_find_witness():
    a, b = find_mono_count_witness(13, 4)
    assert (a.to_string(), b.to_string()) == K4_WITNESS
    assert find_mono_count_witness(7, 3) is None


def test_pair_nae_examples():
    s = Coloring.from_string("10110")
    assert pair_nae_satisfy_prob(s, s, 3) == Fraction(3, 4)
    t = Coloring.from_string("01110")
    assert pair_nae_satisfy_prob(s, t, 3) == Fraction(57, 100)


def test_pair_nae_against_clause_enumeration_n5():
    n, k = 5, 3
    clauses = all_clauses(n, k)
    assigns = all_assignments(n)
    assert len(clauses) == 200
    for i in range(0, 32, 3):
        for j in range(32):
            both = sum(nae_ok(c, assigns[i]) and nae_ok(c, assigns[j]) for c in clauses)
            s, t = Coloring(i, n), Coloring(j, n)
            assert pair_nae_satisfy_prob(s, t, k) == Fraction(both, 200)


@given(data=st.data(), n=st.sampled_from([5, 7, 11, 13, 17]))
def test_pair_nae_depends_only_on_overlap_k3(data, n):
    s, t = data.draw(coloring_st(n)), data.draw(coloring_st(n))
    a = Fraction(n - xor_coloring(s, t).ones_count, n)
    assert pair_nae_satisfy_prob(s, t, 3) == Fraction(1, 2) + (a**3 + (1 - a) ** 3) / 4


@pytest.mark.parametrize("alpha,expected", [(Fraction(0), 0), (Fraction(1, 2), Fraction(3, 4)),
                                            (Fraction(2, 5), Fraction(18, 25))])
def test_bichromatic_single(alpha, expected):
    assert bichromatic_prob_single(alpha) == expected


def test_bichromatic_single_is_complement_of_mono_fraction():
    n = 5
    edges = ap_vertex_lists(n, 3)
    for s in all_assignments(n):
        z = sum(s)
        frac = Fraction(sum(bichromatic(e, s) for e in edges), len(edges))
        assert frac == bichromatic_prob_single(Fraction(z, n))
        assert frac == 1 - Fraction(mono_ap3_closed_form(n, z), n * n)


def test_pair_bichromatic_examples():
    for a in (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(4, 5)):
        assert pair_bichromatic_prob(a, a, a, 3) == bichromatic_prob_single(a)
    h = Fraction(1, 2)
    assert pair_bichromatic_prob(h, h, Fraction(1, 4), 3) == Fraction(9, 16)


def test_pair_bichromatic_infeasible():
    with pytest.raises(InvalidOverlap):
        pair_bichromatic_prob(0.2, 0.3, 0.25, 3)
    with pytest.raises(InvalidOverlap):
        pair_bichromatic_prob(0.8, 0.7, 0.4, 3)


def _pair_bichromatic_fraction(s, t, edges):
    return Fraction(sum(bichromatic(e, s) and bichromatic(e, t) for e in edges), len(edges))


def test_pair_bichromatic_exact_for_iid_vertex_triples():
    n = 5
    triples = list(product(range(n), repeat=3))
    for s in all_assignments(n)[::3]:
        for t in all_assignments(n)[::2]:
            a, b = Fraction(sum(s), n), Fraction(sum(t), n)
            g = Fraction(sum(x & y for x, y in zip(s, t)), n)
            assert _pair_bichromatic_fraction(s, t, triples) == pair_bichromatic_prob(a, b, g, 3)


def test_pair_bichromatic_not_exact_for_ap_edges():
    # a singleton class contains one (trivial) progression, while the i.i.d.
    # value is n^2 * (1/n)^3; so the overlap-profile formula is off for APs
    n = 5
    edges = ap_vertex_lists(n, 3)
    s, t = (0, 1, 0, 0, 0), (0, 0, 1, 0, 0)   # profile (z1..z4) = (0, 1, 1, 3)
    assert _pair_bichromatic_fraction(s, t, edges) == Fraction(6, 25)
    p = pair_bichromatic_prob(Fraction(1, 5), Fraction(1, 5), Fraction(0), 3)
    assert p == Fraction(24, 125)
    # at n = 7 the profile does not even determine the count
    n = 7
    edges = ap_vertex_lists(n, 3)
    s = (0, 0, 0, 0, 0, 0, 1)
    t1, t2 = (0, 0, 0, 0, 1, 1, 0), (0, 0, 0, 1, 0, 1, 0)   # both profile (0, 1, 2, 4)
    assert _pair_bichromatic_fraction(s, t1, edges) == Fraction(10, 49)
    assert _pair_bichromatic_fraction(s, t2, edges) == Fraction(12, 49)

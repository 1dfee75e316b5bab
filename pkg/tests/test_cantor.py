import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ahlfors_maximal.cantor import (TernaryPoint, binary_digits, cantor_value, excluded_interval_cover,
                                    pattern_scan, toy_gap_construct)
from ahlfors_maximal.exact import Enclosure
from ahlfors_maximal.maximal import maximal_local


@pytest.mark.parametrize("prefix, tail, x, h", [
    ((1,), 0, Fraction(2, 3), Fraction(1, 2)),
    ((1, 0, 0), 1, Fraction(19, 27), Fraction(5, 8)),
    ((), 1, Fraction(1), Fraction(1)),
    ((0,), 1, Fraction(1, 3), Fraction(1, 2)),
])
def test_digit_values(prefix, tail, x, h):
    p = TernaryPoint(prefix, tail)
    assert p.value == x and cantor_value(p) == h


def test_digits_must_be_binary():
    with pytest.raises(ValueError):
        TernaryPoint((2,), 0)


def test_digit_formula_matches_cdf_at_500_points(cantor):
    rng = random.Random(8)
    for _ in range(500):
        p = TernaryPoint.of([rng.randint(0, 1) for _ in range(rng.randint(0, 12))], rng.randint(0, 1))
        assert cantor.cdf(p.value, len(p.prefix) + 2) == Enclosure.exact(cantor_value(p))


def test_toy_gap_first_level():
    g = toy_gap_construct((), 1)
    assert (g.x.value, g.l.value, g.r.value) == (Fraction(2, 3), Fraction(1, 3), Fraction(1))
    assert g.image_gap == (Fraction(1, 2), Fraction(5, 8))


def test_toy_gap_second_level():
    g = toy_gap_construct((0,), 2)
    assert g.x.value == Fraction(2, 9)
    assert g.image_gap == (Fraction(1, 4), Fraction(1, 4) + Fraction(1, 16))


def test_toy_gap_needs_matching_prefix():
    with pytest.raises(ValueError):
        toy_gap_construct((0, 1), 2)


@pytest.mark.parametrize("prefix", [(), (1,), (0, 1), (1, 1, 0)])
def test_toy_gap_lower_bound_reaches_maximal_function(cantor, prefix):
    K = len(prefix) + 1
    g = toy_gap_construct(prefix, K)
    res = maximal_local(cantor, g.x.value, 1, Fraction(1, 10**6))
    assert res.value.hi >= g.image_gap[1]
    assert g.image_gap[1] == Fraction(1, 2 ** (K + 2)) + cantor_value(g.x)


def test_pattern_scan_examples():
    rep = pattern_scan(Fraction(9, 16), 8)
    assert 1 in rep.positions and rep.dyadic
    assert pattern_scan(Fraction(1, 2), 5).dyadic
    third = pattern_scan(Fraction(1, 3), 200)
    assert third.positions == () and not third.dyadic
    with pytest.raises(ValueError):
        pattern_scan(Fraction(1, 2), 2)


def test_cover_single_level():
    rep = excluded_interval_cover(1)
    assert len(rep.gaps) == 1 and rep.covered == Fraction(1, 8)


def test_cover_twelve_levels_exact():
    rep = excluded_interval_cover(12)
    assert rep.disjoint and rep.prefix_match and rep.exact_match
    assert rep.residual == Fraction(7**4, 2**12)
    assert rep.residual_all_positions < rep.residual


def test_points_in_gaps_carry_the_announced_prefix():
    rep = excluded_interval_cover(7)
    rng = random.Random(4)
    for g in rep.gaps:
        lo, hi = g.image_gap
        for _ in range(5):
            y = lo + (hi - lo) * Fraction(rng.randint(1, 999), 1000)
            want = g.x.prefix + (0, 0)
            assert binary_digits(y, len(want)) == want
            assert len(want) - 2 in pattern_scan(y, len(want)).positions


@given(st.lists(st.integers(0, 1), max_size=12), st.integers(0, 1))
def test_value_is_in_unit_interval_and_monotone_in_tail(prefix, tail):
    p = TernaryPoint(tuple(prefix), tail)
    assert 0 <= cantor_value(p) <= 1
    assert cantor_value(TernaryPoint(tuple(prefix), 0)) <= cantor_value(TernaryPoint(tuple(prefix), 1))

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ahlfors_maximal.exact import Enclosure, LogRatio, fmt, parse_rational, power_bracket, root_bracket


@pytest.mark.parametrize("text, value", [("3/4", Fraction(3, 4)), (" 7 ", Fraction(7)), ("-2/6", Fraction(-1, 3)), (5, Fraction(5))])
def test_parse_rational_accepts_exact_forms(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["0.5", "1e3", "", "1/0", "abc", 0.5, True, None])
def test_parse_rational_refuses_inexact_or_malformed(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


def test_fmt_round_trip():
    assert fmt(Fraction(5, 8)) == "5/8"
    assert fmt(Fraction(4, 2)) == "2"
    assert parse_rational(fmt(Fraction(-9, 12))) == Fraction(-3, 4)


def test_enclosure_arithmetic():
    a, b = Enclosure(Fraction(1), Fraction(2)), Enclosure(Fraction(3), Fraction(5))
    assert a + b == Enclosure(Fraction(4), Fraction(7))
    assert b - a == Enclosure(Fraction(1), Fraction(4))
    assert a.scale(-2) == Enclosure(Fraction(-4), Fraction(-2))
    assert (-a).lo == -2
    assert Enclosure(Fraction(-1), Fraction(3)).clamp_below(0) == Enclosure(Fraction(0), Fraction(3))
    with pytest.raises(ValueError):
        Enclosure(Fraction(2), Fraction(1))


fractions = st.fractions(min_value=-100, max_value=100, max_denominator=1000)


@given(fractions, fractions, fractions, fractions)
def test_enclosure_sum_contains_sum_of_members(x, y, wx, wy):
    ex = Enclosure(x - abs(wx), x + abs(wx))
    ey = Enclosure(y - abs(wy), y + abs(wy))
    assert (ex + ey).contains(x + y)
    assert (ex - ey).contains(x - y)


def test_log_ratio_cantor_dimension():
    d = LogRatio(Fraction(2), Fraction(3))
    assert d.exact is None
    lo, hi = d.bracket()
    assert lo < math.log(2) / math.log(3) < hi
    assert d.compare_rational(Fraction(63, 100)) == 1
    assert d.compare_rational(Fraction(64, 100)) == -1


def test_log_ratio_rational_cases_are_exact():
    assert LogRatio(Fraction(2), Fraction(4)).exact == Fraction(1, 2)
    assert LogRatio(Fraction(8), Fraction(4)).exact == Fraction(3, 2)
    assert LogRatio(Fraction(4), Fraction(9)).exact is None
    assert LogRatio(Fraction(2), Fraction(3)).same_value(LogRatio(Fraction(4), Fraction(9)))
    assert LogRatio(Fraction(2), Fraction(3)).compare(LogRatio(Fraction(2), Fraction(4))) == 1


@settings(max_examples=60)
@given(st.integers(2, 40), st.integers(2, 40), st.fractions(min_value=Fraction(1, 10), max_value=4, max_denominator=50))
def test_compare_rational_matches_logs_when_separated(a, b, q):
    value = math.log(a) / math.log(b)
    if abs(value - float(q)) < 1e-9:
        return
    expected = 1 if value > q else -1
    assert LogRatio(Fraction(a), Fraction(b)).compare_rational(q) == expected


@settings(max_examples=60)
@given(st.fractions(min_value=Fraction(1, 50), max_value=20, max_denominator=60), st.integers(2, 9), st.integers(2, 9))
def test_power_bracket_contains_float_power(base, a, b):
    if a == b:
        return
    d = LogRatio(Fraction(a), Fraction(b))
    lo, hi = power_bracket(base, d)
    v = float(base) ** float(d)
    assert float(lo) <= v * (1 + 1e-12) and v <= float(hi) * (1 + 1e-12)


@given(st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=1000), st.integers(1, 7))
def test_root_bracket_brackets_the_root(x, q):
    lo, hi = root_bracket(x, q)
    assert lo**q <= x <= hi**q

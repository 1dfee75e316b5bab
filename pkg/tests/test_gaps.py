from fractions import Fraction

import pytest

from ahlfors_maximal.covering import Gap, gap_enumerate
from ahlfors_maximal.exact import Enclosure
from ahlfors_maximal.gaps import (delta0_estimate, detachment_check, gap_image_family, image_measure_bound,
                                  inductive_claim1, inductive_claim2, quantile_floor, recursion_constant,
                                  split_smallest)
from ahlfors_maximal.measures import cylinder_enumerate, sum_measures
from oracles import staircase_digits


def test_middle_gap_detaches(cantor):
    iv = detachment_check(cantor, Gap(0, Fraction(1, 3), Fraction(2, 3)), 1, 40)
    assert iv.certified
    assert iv.lo == Enclosure.exact(Fraction(1, 2))
    assert iv.length == Enclosure.exact(Fraction(1, 32))


def test_second_generation_gap_length(cantor):
    iv = detachment_check(cantor, Gap(0, Fraction(1, 9), Fraction(2, 9)), 1, 40)
    # mu([2/9, 5/18]) = 1/8, so the image interval has length 1/64
    assert iv.certified and iv.length == Enclosure.exact(Fraction(1, 64))
    assert iv.lo == Enclosure.exact(Fraction(1, 4))


def test_detachment_rejects_radius_beyond_delta(cantor):
    with pytest.raises(ValueError):
        detachment_check(cantor, Gap(0, Fraction(1, 3), Fraction(2, 3)), Fraction(1, 4))


def test_detachment_refuses_non_gap(cantor):
    iv = detachment_check(cantor, Gap(0, Fraction(0), Fraction(1, 3)), 1, 20)
    assert not iv.certified and "mu-mass" in iv.diagnostics


def test_every_gap_to_generation_six_detaches(cantor):
    for g in gap_enumerate(cantor, (0, 1), 6):
        assert detachment_check(cantor, g, 1, 40).certified


def test_image_family_is_disjoint_and_contained(cantor):
    fam = gap_image_family(cantor, (0, 1), 1, 6)
    assert fam.all_certified and fam.disjoint and fam.contained
    tops = sorted((iv.lo.lo, iv.top.hi) for iv in fam.intervals)
    assert all(p[1] <= q[0] for p, q in zip(tops, tops[1:]))


def test_image_family_requires_short_J(cantor):
    with pytest.raises(ValueError):
        gap_image_family(cantor, (0, 1), Fraction(1, 2), 4)


@pytest.mark.parametrize("y", [Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(5, 8), Fraction(7, 10), Fraction(1)])
def test_quantile_floor_never_overshoots(cantor, y):
    x = quantile_floor(cantor, y, 30)
    assert cantor.cdf(x, 40).hi <= y
    assert y - cantor.cdf(x, 40).lo <= Fraction(1, 2**29)


def test_recursion_constant_brackets(cantor):
    lo, hi = recursion_constant(cantor)
    assert 0 < lo < hi < Fraction(1, 32)


def test_image_bound_small_levels_with_digit_oracle(cantor):
    rep = image_measure_bound(cantor, (0, 1), 1, 3)
    assert rep.holds
    masses = [lv.surviving_mass.hi for lv in rep.levels]
    assert all(b < a for a, b in zip(masses, masses[1:]))
    for lv in rep.levels:
        total = sum((staircase_digits(b) - staircase_digits(a) for a, b in lv.survivors), Fraction(0))
        assert lv.surviving_mass == Enclosure.exact(total)
        assert lv.surviving_mass.hi <= lv.bound[1]


def test_image_bound_rejects_sums(pair):
    with pytest.raises(ValueError):
        image_measure_bound(pair, (0, 1), 1, 1)


def test_split_smallest(pair, quarter):
    mu, mult, eta = split_smallest(pair)
    assert mu.to_dict() == quarter.to_dict() and mult == 1 and len(eta) == 1


def test_delta0_global_is_positive_and_spot_checked(pair):
    cert = delta0_estimate(pair, samples=100, seed=3)
    assert cert.delta0 > 0 and cert.verified and cert.spot_checks == 100


def test_delta0_single_class_is_trivial(cantor):
    assert delta0_estimate(cantor).delta0 == 1


def test_claim1_small_split(pair):
    res = inductive_claim1(pair, (0, 1), Fraction(1, 20))
    assert res.certified
    assert res.mass_kept == res.mass_J
    assert res.eta_mass.hi <= Fraction(1, 20)


def test_claim2_on_a_cylinder_far_from_the_other_support(pair, quarter):
    cyl = next(c for c in cylinder_enumerate(quarter, 4) if c.word == (0, 0, 1, 0))
    J = (cyl.left, cyl.right)
    cert = delta0_estimate(pair, window=J, samples=50)
    assert cert.delta0 >= J[1] - J[0]
    res = inductive_claim2(pair, J, J[1] - J[0], certificate=cert)
    assert res.holds
    assert all(J[0] <= a < b <= J[1] for a, b in res.intervals)


def test_claim2_rejects_delta_above_certificate(pair, quarter):
    cert = delta0_estimate(pair, samples=0)
    with pytest.raises(ValueError):
        inductive_claim2(pair, (Fraction(0), Fraction(1, 4)), Fraction(1, 4), certificate=cert)

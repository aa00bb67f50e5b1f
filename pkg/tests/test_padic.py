from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from padic_periods.hyperg import FamilyTag, bar_polynomial
from padic_periods.padic import (
    PadicInt,
    bar_value,
    domain_membership,
    domain_teichmuller_points,
    dwork_series_exact,
    dwork_truncation,
    frobenius_quadratic_check,
    hat_domain_membership,
    legendre_point_count,
    limits_agree_check,
    teichmuller,
    unit_inverse,
    unit_root,
)
from padic_periods.upoly import XPoly

HALF = FamilyTag.HALF


def test_padic_int_arithmetic():
    a, b = PadicInt(5, 2, 7), PadicInt(5, 2, 20)
    assert a + b == 2 and a * b == 15 and a - b == 12
    assert PadicInt.of(Fraction(1, 4), 5, 2) * 4 == 1
    assert (a / 2) * 2 == a
    with pytest.raises(ValueError):
        a + PadicInt(5, 3, 1)
    with pytest.raises(ValueError):
        PadicInt.of(Fraction(1, 5), 5, 2)
    assert PadicInt(3, 4, 18).valuation() == 2 and PadicInt(3, 4, 0).valuation() == 4


def test_teichmuller_examples():
    assert teichmuller(1, 7, 4) == 1
    assert teichmuller(4, 5, 3) == 124
    assert teichmuller(2, 5, 2) == 7
    with pytest.raises(ValueError):
        teichmuller(10, 5, 2)


@settings(max_examples=200, deadline=None)
@given(p=st.sampled_from([3, 5, 7]), S=st.integers(1, 6), a=st.integers(-500, 500))
def test_teichmuller_is_fixed_by_frobenius(p, S, a):
    if a % p == 0:
        return
    w = teichmuller(a, p, S)
    assert w**p == w
    assert w.residue % p == a % p


def test_unit_inverse_examples():
    assert unit_inverse(PadicInt(5, 2, 1)) == 1
    assert unit_inverse(PadicInt(5, 2, 2)) == 13
    with pytest.raises(ZeroDivisionError):
        unit_inverse(PadicInt(5, 2, 5))


@settings(max_examples=100, deadline=None)
@given(p=st.sampled_from([3, 5, 7, 11]), S=st.integers(1, 5), r=st.integers(0, 10**6))
def test_unit_inverse_property(p, S, r):
    u = PadicInt(p, S, r)
    if u.is_unit():
        assert u * unit_inverse(u) == 1


def test_domain_examples():
    assert domain_membership(PadicInt(3, 2, 0), HALF)
    assert not domain_membership(teichmuller(2, 3, 2), HALF)
    assert domain_membership([PadicInt(5, 1, 1), PadicInt(5, 1, 0), PadicInt(5, 1, 0)], "kz")
    assert domain_membership(PadicInt(7, 1, 0), "third-q")
    for p in (5, 7, 11):
        for a in range(p):
            x = PadicInt(p, 1, a)
            assert domain_membership(x, HALF) == domain_membership(x, "dwork")


def test_hat_domain():
    assert hat_domain_membership((1, 2, 3), 5)
    assert not hat_domain_membership((0, 1, 1), 5)
    assert hat_domain_membership((1, Fraction(1, 5), 0), 5)


def test_bar_value_matches_expansion():
    for p, s in [(3, 2), (5, 2), (7, 1)]:
        for tag in (HALF, FamilyTag.THIRD_Q):
            if p == 3 and tag is not HALF:
                continue
            for r in (0, 1, 2, 17):
                x = PadicInt(p, 3, r)
                assert bar_value(tag, x, s).residue == bar_polynomial(tag, p, s).evaluate(r, p**3)


def test_unit_root_trace_examples():
    tr = unit_root(PadicInt(7, 5, 0), HALF, 4)
    assert tr.ratios == [PadicInt(7, s, 1) for s in range(1, 5)]
    tr = unit_root(teichmuller(2, 5, 4), HALF, 3)
    assert all(a.residue % 5**s == b.residue % 5**s for s, (a, b) in enumerate(zip(tr.ratios, tr.ratios[1:]), 1))
    tr = unit_root(teichmuller(3, 7, 5), HALF, 4)
    assert all(d >= s for s, d in enumerate(tr.deltas, 1))
    assert tr.cauchy_report().passed
    with pytest.raises(ValueError):
        unit_root(teichmuller(2, 3, 3), HALF, 2)


def test_unit_root_is_a_unit_on_domain_points():
    for p in (5, 7, 11):
        for w in domain_teichmuller_points(p, 4):
            tr = unit_root(w, HALF, 3)
            assert all(f.is_unit() for f in tr.ratios)
            assert tr.cauchy_report().passed


def test_unit_root_thirds():
    for w in domain_teichmuller_points(7, 4, FamilyTag.THIRD_Q):
        assert unit_root(w, FamilyTag.THIRD_Q, 3).cauchy_report().passed


def test_point_count_examples():
    assert legendre_point_count(2, 5) == -2
    # x=0,1,2 give one point each plus infinity
    assert legendre_point_count(2, 3) == 0
    with pytest.raises(ValueError):
        legendre_point_count(1, 7)
    with pytest.raises(ValueError):
        legendre_point_count(7, 7)


def test_frobenius_quadratic_examples():
    rep = frobenius_quadratic_check(2, 5, 3)
    assert rep.passed and rep.details["a_p"] == -2
    u = PadicInt(5, 3, rep.details["u"])
    assert u * u + 2 * u + 5 == 0
    # the other root p/u has valuation 1
    assert (PadicInt(5, 3, 5) / u).valuation() == 1
    with pytest.raises(ValueError):
        frobenius_quadratic_check(2, 3, 2)


@pytest.mark.parametrize("p,s_max", [(5, 4), (7, 4), (11, 3)])
def test_frobenius_quadratic_all_alphas(p, s_max):
    checked = 0
    for a in range(2, p):
        if not domain_membership(teichmuller(a, p, 2), HALF):
            continue
        checked += 1
        for s in range(1, s_max + 1):
            assert frobenius_quadratic_check(a, p, s).passed
    assert checked


def test_dwork_truncation_examples():
    F, g = dwork_truncation(3, 1)
    assert len(dwork_series_exact(3, 1)) == 3
    assert dwork_series_exact(3, 1)[1] == Fraction(1, 4)
    assert F == XPoly([1, 1])  # 1/4 = 1 and 9/64 = 0 mod 3
    for p in (3, 5, 7, 11):
        _, g = dwork_truncation(p, 1)
        assert bar_polynomial(HALF, p, 1).reduce(p) == g
    F, _ = dwork_truncation(5, 2)
    assert F[1] * 4 % 25 == 1


def test_limits_agree():
    assert limits_agree_check(5, 2, [0]).passed
    rep = limits_agree_check(5, 3, domain_teichmuller_points(5, 4))
    assert rep.passed and rep.observed_valuation >= 2
    assert limits_agree_check(7, 3, [teichmuller(3, 7, 4)]).passed
    with pytest.raises(ValueError):
        limits_agree_check(3, 2, [teichmuller(2, 3, 3)])

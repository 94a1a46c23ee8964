from fractions import Fraction

import pytest

from oracles import as_dict, degree_formula, tet_index_direct
from tindex.qseries import TruncatedQSeries
from tindex.tetindex import (dilog_series, f_series, pentagon_window, tet_degree, tet_index,
                             verify_pentagon)


def test_tet_index_00_value():
    # frozen from the direct-summation oracle
    assert tet_index(0, 0, 4) == TruncatedQSeries.from_terms({0: 1, 1: -1, 2: -2, 3: -2}, 4)
    assert as_dict(tet_index(0, 0, 4)) == tet_index_direct(0, 0, 4)
    assert str(tet_index(0, 0, 4)) == "1 - q - 2*q^2 - 2*q^3 + O(q^4)"


@pytest.mark.parametrize("m", range(-5, 6))
@pytest.mark.parametrize("e", range(-5, 6))
def test_against_direct_summation(m, e):
    assert as_dict(tet_index(m, e, 9)) == tet_index_direct(m, e, 9)


def test_half_integer_order():
    s = tet_index(1, 1, Fraction(7, 2))
    assert s.order == Fraction(7, 2)
    assert as_dict(s) == {k: v for k, v in tet_index_direct(1, 1, 4).items() if k < 7}


def test_valuations():
    # I(1,0) = I(0,0) - I(0,1) starts at q^1
    d10 = tet_index(1, 0, 6)
    assert d10 == tet_index(0, 0, 6) - tet_index(0, 1, 6)
    assert d10.valuation() == 1
    assert tet_index(0, -1, 6).valuation() == 1


def test_degree_values():
    assert tet_degree(0, 0) == 0
    assert tet_degree(-2, 3) == 3
    assert tet_degree(1, 0) == 1


@pytest.mark.parametrize("m", range(-6, 7))
def test_degree_matches_closed_form(m):
    for e in range(-6, 7):
        assert tet_degree(m, e) == degree_formula(m, e)
        assert tet_index(m, e, tet_degree(m, e) + 1).valuation() == degree_formula(m, e)


def test_dilog_coefficients():
    L = dilog_series(0, (-3, 3), 8)
    assert L.extract(0) == tet_index(0, 0, 8)
    L2 = dilog_series(2, (-4, 4), 8)
    for e in range(-4, 5):
        assert L2.extract(e) == tet_index(2, e, L2.q_order)


def test_f_series():
    f0 = f_series(0, 5, 8)
    assert f0.extract(0) == TruncatedQSeries.one(8)
    f = f_series(-2, 6, 8)
    # terms with n < 2 vanish, so the known window starts at x^2
    assert f.lo == (2,) and not f.extract(2).is_zero()


def test_pentagon_examples():
    assert verify_pentagon(0, 0, 0, 0, 20).ok
    assert verify_pentagon(1, 0, 0, 0, 15).ok
    assert verify_pentagon(-1, 2, 1, -2, 12).ok


def test_pentagon_lhs_beyond_order():
    # both left factors start so late that their product lies past q^10
    r = verify_pentagon(-2, 2, -2, 2, 20)
    assert r.ok and r.lhs.is_zero() and r.lhs.order2 == 40


def test_pentagon_harness_detects_clipping():
    assert not verify_pentagon(0, 0, 0, 0, 10, clip=1).ok
    assert not verify_pentagon(1, -1, 0, 1, 10, clip=1).ok


def test_pentagon_window_is_complete():
    # widening the window beyond what the degree bound allows changes nothing
    w = pentagon_window(1, 1, 0, 0, 10)
    assert w == sorted(w) and len(w) > 0

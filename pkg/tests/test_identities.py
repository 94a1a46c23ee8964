import pytest

from tindex import identities as ids
from tindex.qseries import TruncatedQSeries
from tindex.tetindex import dilog_series, tet_index

RECS = ("rec1", "rec2", "rec1a", "rec2a")


@pytest.mark.parametrize("name", RECS)
def test_recursions_small_grid(name):
    for m in range(-4, 5):
        for e in range(-4, 5):
            assert ids.recursion_residual(name, m, e, 12).is_zero(), (name, m, e)


def test_recursion_residual_detects_wrong_sign():
    # flipping the sign of one term must leave a residual
    terms = ids.rec1_terms(1, 1)
    terms[0] = (-terms[0][0],) + terms[0][1:]
    assert not ids._combine_signed(terms, 20).is_zero()


def test_rec_i2():
    for e in range(-8, 9):
        assert ids.recursion_residual("recI2", 0, e, 16).is_zero()


def test_triality_and_parity():
    for m in range(-5, 6):
        for e in range(-5, 6):
            r1, r2 = ids.triality_residuals(m, e, 12)
            assert r1.is_zero() and r2.is_zero()
            assert ids.parity_ok(m, e, 12)


def test_parity_is_not_vacuous():
    # I(1,1) has half-integer exponents only
    s = tet_index(1, 1, 6)
    assert all(t2 % 2 == 1 for t2, _ in s.terms2())


def test_degree_law():
    for m in range(-8, 9):
        for e in range(-8, 9):
            assert ids.degree_ok(m, e)


def test_dilog_coefficients():
    for m in range(-3, 4):
        for e, r in ids.dilog_coefficients_residual(m, (-6, 6), 10):
            assert r.is_zero(), (m, e)


def test_dilog_recursion_corrected_form():
    for m in range(-2, 3):
        res = ids.dilog_rec1_residual(m, (-5, 5), 10)
        assert all(res.extract(k).is_zero() for k in range(-5, 6))


def test_dilog_recursion_as_printed_fails():
    # with L(m+1, q^(m/2) x) in place of L(m+1, q^(1/2) x) the relation breaks at m = 0
    m = 0
    L0 = dilog_series(m, (-6, 6), 10)
    L1 = dilog_series(m + 1, (-6, 6), 10).scale_x((m,))
    res = (-L0) + L0.mul_q(-m).mul_x(-1) + L1
    assert any(not res.extract(k).is_zero() for k in range(-5, 6))


def test_five_identities():
    for name, ok in ids.five_identities(6, 10):
        assert ok, name


def test_f_generating_series():
    for e1 in (-1, 0, 1):
        for e2 in (-1, 0, 1):
            res = ids.f_generating_residual(e1, e2, 4, 10)
            assert all(r.is_zero() for r in res.values()), (e1, e2)


def test_special_pentagon():
    T = 14
    lhs = tet_index(0, 0, T) * tet_index(0, 0, T)
    rhs = TruncatedQSeries.zero(T)
    for e in range(-6, T + 1):
        o = T - e if e > 0 else T + 12
        f = tet_index(0, e, o)
        rhs = rhs + (f * f * f).shift(e).truncate(T)
    assert (lhs.truncate(T) - rhs).is_zero()

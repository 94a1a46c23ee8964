import random

import pytest

from oracles import as_dict, lattice_sum_direct
from tindex import lattice as L
from tindex.nzdata import IndexInput, RankError, index_input, load_fixture, reduce
from tindex.qseries import TruncatedQSeries
from tindex.tetindex import tet_index

TRIPLE = IndexInput.make([[1, 1, 1]], [[0, 0, 0]], [2])

# I_T(0, 0) of the m136 fixture below q^10: value from shell summation,
# confirmed by a full box of twice the shell radius and by a 12-shell window
M136_ORDER10 = {0: 1, 2: 1, 3: 10, 4: 2, 5: -16, 6: -57, 7: -88, 8: -41, 9: 122}


def test_triple_equals_square():
    s = L.index_sum(TRIPLE, policy=L.TruncationPolicy(20))
    assert s == (tet_index(0, 0, 20) * tet_index(0, 0, 20)).truncate(20)


@pytest.mark.parametrize("M,m,e,order,radius", [
    (TRIPLE, (0, 0, 0), (0, 0, 0), 7, 9),
    (TRIPLE, (1, 0, -1), (0, 2, 0), 6, 9),
    (IndexInput.make([[1]], [[0]], [3]), (0,), (0,), 8, 16),
    (IndexInput.make([[1]], [[0]], [1]), (1,), (-1,), 6, 16),
    (IndexInput.make([[2, 2]], [[1, 1]], [0]), (0, 0), (0, 0), 6, 10),
])
def test_against_box_oracle(M, m, e, order, radius):
    got = L.index_sum(M, m, e, L.TruncationPolicy(order))
    assert as_dict(got) == lattice_sum_direct(M.A, M.B, M.nu, m, e, order, radius)


def test_intro_example():
    # (1 | 0 | 2): the sum of q^k I(0, k) vanishes identically
    M = IndexInput.make([[1]], [[0]], [2])
    got = L.index_sum(M, policy=L.TruncationPolicy(8))
    assert got.is_zero()
    assert as_dict(got) == lattice_sum_direct(M.A, M.B, M.nu, (0,), (0,), 8, 16)
    # the individual terms are not zero: their valuations are k + delta(0, k)
    assert L.summand(M, (0,), (0,), (1,), 16) == tet_index(0, 1, 7).shift(1)


@pytest.mark.parametrize("v", [0, -1, -2])
def test_divergent_gate(v):
    M = IndexInput.make([[1]], [[0]], [v])
    with pytest.raises(L.DivergentError) as exc:
        L.index_sum(M, policy=L.TruncationPolicy(4))
    assert exc.value.ray is not None and exc.value.ray.k0 == (1,)


def test_signed_weight():
    M = IndexInput.make([[1]], [[0]], [1])
    s = L.summand(M, (0,), (0,), (1,), 10)
    assert s == tet_index(0, 1, "9/2").shift("1/2", -1)


def test_row_action_errors_and_identity():
    M = index_input(load_fixture("m136"))
    I = [[int(i == j) for j in range(6)] for i in range(6)]
    assert L.row_act(I, M) == M
    bad = [row[:] for row in I]
    bad[0][0] = 2
    with pytest.raises(L.UnimodularError):
        L.row_act(bad, M)


def test_s_cubed_random():
    rng = random.Random(3)
    for _ in range(10):
        R, s = rng.randrange(1, 4), rng.randrange(1, 5)
        M = IndexInput.make([[rng.randrange(-3, 4) for _ in range(s)] for _ in range(R)],
                            [[rng.randrange(-3, 4) for _ in range(s)] for _ in range(R)],
                            [rng.randrange(-3, 4) for _ in range(R)])
        for i in range(s):
            assert L.col_act_S(L.col_act_S(L.col_act_S(M, i), i), i) == M
    with pytest.raises(IndexError):
        L.col_act_S(TRIPLE, 3)


def test_triple_s_invariance():
    pol = L.TruncationPolicy(15)
    base = L.index_sum(TRIPLE, policy=pol)
    for i in range(3):
        M1 = L.col_act_S(TRIPLE, i)
        assert L.index_sum(M1, policy=pol) == base
        assert L.index_sum(L.col_act_S(M1, i), policy=pol) == base


def test_certified_radius_covers_terms():
    res = L.index_sum_detailed(TRIPLE, policy=L.TruncationPolicy(12, "certified"))
    assert not res.heuristic
    assert all(abs(k[0]) <= res.radius for k in res.terms)
    w = L._strict(TRIPLE)
    assert L.certified_radius(TRIPLE, w, (0,) * 3, (0,) * 3, 24) == res.radius


def test_certified_needs_strict():
    M = index_input(load_fixture("m136"))
    with pytest.raises(ValueError):
        L.index_sum(M, policy=L.TruncationPolicy(2, "certified"))


@pytest.mark.parametrize("M", [TRIPLE, IndexInput.make([[2]], [[0]], [1]),
                               index_input(load_fixture("4_1"))])
def test_certified_equals_shell_double_radius(M):
    c = L.index_sum_detailed(M, policy=L.TruncationPolicy(10, "certified"))
    s = L.index_sum_detailed(M, policy=L.TruncationPolicy(10, "shell", radius=2 * c.radius))
    assert c.series == s.series and c.terms == s.terms


def test_m136_golden():
    M = index_input(load_fixture("m136"))
    res = L.index_sum_detailed(M, policy=L.TruncationPolicy(10))
    assert res.heuristic and res.mode == "shell"
    assert res.series == TruncatedQSeries.from_terms(M136_ORDER10, 10)


def test_m136_row_swap_and_selection():
    g = load_fixture("m136")
    pol = L.TruncationPolicy(5)
    M = index_input(g)
    base = L.index_sum(M, policy=pol)
    swap = [[int(j == (1 - i if i < 2 else i)) for j in range(6)] for i in range(6)]
    assert L.index_sum(L.row_act(swap, M), policy=pol) == base
    # dropping row 0 instead of row 6 of the full system
    assert L.manifold_index(g, policy=pol, rows=(1, 2, 3, 4, 5, 6)) == base


def test_manifold_index_row_check():
    g = load_fixture("m136")
    with pytest.raises(RankError):
        L.manifold_index(g, policy=L.TruncationPolicy(2), rows=(0, 1, 2))


def test_full_reduction_rows_sum_to_zero():
    # why row selection does not matter for a triangulation: the edge rows are dependent
    M = reduce(load_fixture("m136"))
    assert all(sum(col) == 0 for col in zip(*M.A)) and all(sum(col) == 0 for col in zip(*M.B))
    assert sum(M.nu) == 0


def test_reduced_basis_keeps_series_and_terms():
    M = index_input(load_fixture("m136"))
    U, MU = L.reduced_basis(M)
    assert MU == L.row_act(U, M) and MU != M
    a = L.index_sum_detailed(M, policy=L.TruncationPolicy(6))
    b = L.index_sum_detailed(M, policy=L.TruncationPolicy(6, reduce=False))
    assert a.series == b.series and a.terms == b.terms


def test_skewed_rows_are_cheap_after_reduction():
    M = index_input(load_fixture("m064"))
    P = [[1, 0, 0, 0, 0, 0], [3, 0, 0, 2, 1, -1], [-1, 0, 0, 0, 0, 1],
         [1, 0, 0, 1, 1, -1], [0, 0, 1, 0, 0, 0], [0, 1, 0, 0, 1, 0]]
    pol = L.TruncationPolicy(6)
    assert L.index_sum(L.row_act(P, M), policy=pol) == L.index_sum(M, policy=pol)


def test_dependent_rows():
    M = IndexInput.make([[1, 0], [2, 0]], [[0, 1], [0, 2]], [1, 2])
    with pytest.raises(RankError):
        L.reduced_basis(M)

from fractions import Fraction as F

import pytest

from tindex import lattice as L
from tindex.moves import (MoveSite, NotApplicable, PatternError, _sub23, equivalent, mu_23, mu_32,
                          normal_form, special_status, special_strict, three_two, two_three,
                          two_three_rows, w1_interval)
from tindex.nzdata import load_fixture, reduce, rotate_columns
from tindex.structures import StructureWitness, check_angle_structure, semi_angle_structure, \
    strict_angle_structure


def wtAB_check(g, i, j):
    """Reduced output of two_three after adding (b1 + b2) times the internal row to every
    old row, compared entrywise with the block form built from the reduced input."""
    n, ne = g.num_tet, len(g.edge_A)
    red = reduce(g)
    out = reduce(two_three(g, (i, j)))
    internal = (out.A[ne], out.B[ne], out.nu[ne])
    W = (i, j, n)
    exp_int = ([-1 if c in W else 0 for c in range(n + 1)],) * 2
    if (list(internal[0]), list(internal[1]), internal[2]) != (exp_int[0], exp_int[1], -1):
        return False
    for r in range(ne):
        lam = g.edge_B[r][i] + g.edge_B[r][j]
        PA = [x + lam * y for x, y in zip(out.A[r], internal[0])]
        PB = [x + lam * y for x, y in zip(out.B[r], internal[1])]
        Pnu = out.nu[r] + lam * internal[2]
        a, b = red.A[r], red.B[r]
        wantA = list(a) + [a[j]]
        wantA[i], wantA[j] = b[i] + b[j], a[i]
        wantB = list(b) + [a[i] + b[j]]
        wantB[i], wantB[j] = 0, a[j] + b[i]
        if (PA, PB, Pnu) != (wantA, wantB, red.nu[r]):
            return False
    return True


@pytest.mark.parametrize("name", ["m136", "m064", "4_1"])
def test_wtAB(name):
    g = load_fixture(name)
    for i in range(g.num_tet):
        for j in range(g.num_tet):
            if i != j:
                assert wtAB_check(g, i, j), (i, j)


def test_shapes_and_internal_row():
    g = load_fixture("m136")
    t = two_three(g, (2, 5))
    assert t.num_tet == 8 and len(t.edge_A) == 8
    assert t.edge_B[-1] == (0, 0, 1, 0, 0, 1, 0, 1)
    assert not any(t.edge_A[-1]) and not any(t.edge_C[-1])
    assert t.lint() != []   # the substituted rows are only equivalent to edge equations


def test_substitution_is_linear():
    g = load_fixture("m064")
    t = two_three(g, (1, 4))

    def add(u, v):
        return [x + y for x, y in zip(u, v)]
    mats = [(g.edge_A, t.edge_A), (g.edge_B, t.edge_B), (g.edge_C, t.edge_C)]
    summed = [add(old[0], old[1]) for old, _ in mats]
    assert _sub23(summed, 1, 4) == [add(new[0], new[1]) for _, new in mats]


@pytest.mark.parametrize("name", ["m136", "m064", "4_1"])
def test_roundtrip(name):
    g = load_fixture(name)
    n = g.num_tet
    for site in [(0, 1), (1, 0), (n - 1, 0)]:
        for align in [(0, 0), (1, 2), (2, 0)]:
            back = three_two(two_three(g, site, align), (site[0], site[1], n))
            assert back.num_tet == n and len(back.edge_A) == len(g.edge_A)
            assert equivalent(g, back)
            rot = rotate_columns(g, MoveSite(site, align).quad(n))
            assert normal_form(back, rotations=False) == normal_form(rot, rotations=False)


def test_normal_form_detects_difference():
    g = load_fixture("4_1")
    assert normal_form(g) == normal_form(rotate_columns(g, (1, 2)))
    assert not equivalent(g, load_fixture("degenerate_edge"))


def test_wrong_site():
    t = two_three(load_fixture("m136"), (0, 1))
    with pytest.raises(PatternError):
        three_two(t, (0, 2, 7))
    with pytest.raises(PatternError):
        three_two(load_fixture("m136"), (0, 1, 2))
    with pytest.raises(IndexError):
        two_three(load_fixture("4_1"), (0, 5))
    with pytest.raises(ValueError):
        two_three(load_fixture("4_1"), (1, 1))


def test_index_preserved_figure_eight():
    g = load_fixture("4_1")
    w = strict_angle_structure(g)
    assert special_strict(w, (0, 1))
    pol = L.TruncationPolicy(12)
    before = L.manifold_index(g, policy=pol)
    t = two_three(g, (0, 1))
    after = L.manifold_index(t, policy=pol, rows=two_three_rows(g))
    assert after == before
    assert strict_angle_structure(t) is not None
    back = three_two(t, (0, 1, 2))
    assert L.manifold_index(back, policy=pol) == before


def test_mu_maps():
    g = load_fixture("4_1")
    t = two_three(g, (0, 1))
    w = strict_angle_structure(g)
    wt = mu_23(w, (0, 1))
    assert wt is not None and wt.min_angle() > 0
    assert check_angle_structure(t, wt, "strict")
    assert mu_32(wt, (0, 1, 2)) == w
    # any W1 inside the interval works, and mu_32 undoes it
    lo, hi = w1_interval(w, (0, 1))
    for W1 in (lo + (hi - lo) / 4, (lo + hi) / 2):
        x = mu_23(w, (0, 1), W1)
        assert x is not None and mu_32(x, (0, 1, 2)) == w
    assert mu_23(w, (0, 1), hi) is None
    assert mu_23(w, (0, 1), hi, strict=False) is not None


def test_mu_32_of_strict_is_strict():
    t = two_three(load_fixture("4_1"), (0, 1))
    wt = strict_angle_structure(t)
    w = mu_32(wt, (0, 1, 2))
    assert w.min_angle() > 0 and check_angle_structure(load_fixture("4_1"), w, "strict")


def _two_tets(x1, x2, rest=()):
    trip = [x1, x2] + list(rest)
    return StructureWitness(*map(tuple, zip(*[tuple(map(F, t)) for t in trip])))


def test_special_condition_matches_mu_23():
    grid = [F(k, 7) for k in range(1, 6)]
    count = {True: 0, False: 0}
    for a1 in grid:
        for b1 in grid:
            for a2 in grid:
                for b2 in grid:
                    c1, c2 = 1 - a1 - b1, 1 - a2 - b2
                    if c1 <= 0 or c2 <= 0:
                        continue
                    w = _two_tets((a1, b1, c1), (a2, b2, c2))
                    sp = special_strict(w, (0, 1))
                    assert sp == (mu_23(w, (0, 1)) is not None)
                    count[sp] += 1
    assert count[True] and count[False]


def test_special_examples():
    third = (F(1, 3),) * 3
    assert special_strict(_two_tets(third, third), (0, 1))
    w = _two_tets((F(3, 5), F(1, 5), F(1, 5)), (F(3, 5), F(1, 5), F(1, 5)))
    assert not special_strict(w, (0, 1))


def test_special_not_applicable_on_m136():
    semi = semi_angle_structure(load_fixture("m136"))
    with pytest.raises(NotApplicable):
        special_strict(semi, (0, 1))
    assert special_status(semi, (0, 1)) == "not applicable"

from collections import Counter

import pytest

from oracles import naive_census, naive_cycles
from padicsquare.level_graph import CycleCensus, build_graph, cycle_census, cycle_representatives
from padicsquare.lift_engine import (
    CycleAtLevel,
    LiftClass,
    LiftKind,
    an_bn,
    case1_scan,
    classify,
    lift_cycles,
    predicted_cycle_census,
    shadow_fate,
)
from padicsquare.numtheory import DomainError, mul_order
from padicsquare.padic import teichmuller


def all_cycles(p, n):
    return [CycleAtLevel(p, n, length, rep) for rep, length in cycle_representatives(build_graph(p, n))]


def naive_an_bn(c):
    """a as the product of f'(x) = 2x along the cycle; b by plain iteration."""
    verts = c.vertices()
    a = 1
    for x in verts:
        a = a * 2 * x % c.p
    if a != 1:
        return a, None
    modulus = c.p ** (c.level + 1)
    y = c.rep
    for _ in range(c.length):
        y = y * y % modulus
    return a, (y - c.rep) % modulus // c.p**c.level % c.p


def test_an_bn_examples():
    assert an_bn(CycleAtLevel(7, 1, 1, 1)) == (2, None)
    assert an_bn(CycleAtLevel(3, 2, 2, 4)) == (1, 1)
    assert an_bn(CycleAtLevel(3, 1, 1, 0)) == (0, None)


@pytest.mark.parametrize("p,n", [(3, 4), (5, 3), (7, 3), (11, 2), (13, 2)])
def test_an_bn_matches_naive(p, n):
    for c in all_cycles(p, n):
        assert an_bn(c) == naive_an_bn(c)


def test_classify_examples():
    assert classify(CycleAtLevel(3, 1, 1, 0)) == LiftClass(LiftKind.GROWS_TAILS)
    assert classify(CycleAtLevel(3, 1, 1, 1)) == LiftClass(LiftKind.PARTIALLY_SPLITS, 2)
    assert classify(CycleAtLevel(3, 2, 2, 4)) == LiftClass(LiftKind.GROWS)
    assert str(classify(CycleAtLevel(7, 1, 2, 2))) == "PartiallySplits(3)"


def test_lift_class_validation():
    with pytest.raises(DomainError):
        LiftClass(LiftKind.PARTIALLY_SPLITS)
    with pytest.raises(DomainError):
        LiftClass(LiftKind.PARTIALLY_SPLITS, 1)


def test_lift_cycles_examples():
    assert lift_cycles(CycleAtLevel(3, 1, 1, 1)) == [CycleAtLevel(3, 2, 1, 1), CycleAtLevel(3, 2, 2, 4)]
    lifts = lift_cycles(CycleAtLevel(7, 1, 1, 1))
    assert [(c.rep, c.length) for c in lifts] == [(1, 1), (8, 3), (22, 3)]
    assert sorted(lifts[1].vertices()) == [8, 15, 29]
    assert sorted(lifts[2].vertices()) == [22, 36, 43]
    (six,) = lift_cycles(CycleAtLevel(3, 2, 2, 4))
    assert six.vertices() == [4, 16, 13, 7, 22, 25]


def test_cycle_vertices_rejects_wrong_length():
    with pytest.raises(DomainError):
        CycleAtLevel(3, 2, 3, 4).vertices()


@pytest.mark.parametrize("p,max_level", [(3, 5), (5, 4), (7, 3), (11, 2), (13, 2), (17, 2), (31, 2)])
def test_lift_consistency(p, max_level):
    seen = Counter()
    for n in range(1, max_level + 1):
        for c in all_cycles(p, n):
            cls = classify(c)
            seen[cls.kind] += 1
            got = CycleCensus.from_lengths(l.length for l in lift_cycles(c))
            assert got == cls.predicted_lifts(c.length, p), (c, cls)
            # simulated lifts agree with a naive scan of the residues over c
            over = [x + c.modulus * t for x in c.vertices() for t in range(p)]
            naive = Counter(len(z) for z in naive_cycles(p ** (n + 1), over))
            assert got.as_dict() == dict(naive)
    assert seen[LiftKind.GROWS] and seen[LiftKind.PARTIALLY_SPLITS] and seen[LiftKind.GROWS_TAILS]


def test_splits_case_occurs():
    # the Wieferich prime 1093: cycles born at level 2 split once before growing
    fate = shadow_fate(1, 1093)
    x = (teichmuller(1, 1093, 3).value + 1093) % 1093**2
    c = CycleAtLevel.through(x, 1093, 2)
    assert c.length == fate.born_length
    assert classify(c) == LiftClass(LiftKind.SPLITS)


def test_shadow_splits_at_p251():
    # ord_251(2) = 50 divides the orbit length 100, so the shadow itself splits
    (cyc,) = [c for c in all_cycles(251, 1) if c.length == 100]
    assert classify(cyc) == LiftClass(LiftKind.SPLITS)
    assert shadow_fate(100, 251).branch == "splits"
    lifts = lift_cycles(cyc)
    assert [c.length for c in lifts] == [100] * 251


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_growth_persists(p):
    for c in all_cycles(p, 2):
        if classify(c).kind is not LiftKind.GROWS:
            continue
        cur = c
        for _ in range(3):
            (cur,) = lift_cycles(cur)
            assert classify(cur).kind is LiftKind.GROWS


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23, 29, 31])
def test_a_is_power_of_two_on_shadow_cycles(p):
    from padicsquare.decomposition import periodic_orbits

    for orb in periodic_orbits(p, 4):
        for n in range(1, 5):
            shadow = CycleAtLevel.through(orb.centers_mod(n)[0], p, n)
            assert shadow.length == orb.length
            assert an_bn(shadow)[0] == pow(2, orb.length, p)


@pytest.mark.parametrize("p,n", [(3, 4), (5, 3), (7, 3), (13, 2)])
def test_grows_tails_only_at_zero(p, n):
    for c in all_cycles(p, n):
        assert (classify(c).kind is LiftKind.GROWS_TAILS) == (c.rep == 0)


def test_shadow_fate_examples():
    f = shadow_fate(1, 3)
    assert (f.branch, f.r, f.s, f.born_count, f.born_length) == ("partially_splits", 2, 1, 1, 2)
    f = shadow_fate(1, 7)
    assert (f.r, f.s, f.born_count, f.born_length) == (3, 1, 2, 3)
    f = shadow_fate(1, 1093)
    assert mul_order(2, 1093) == 364
    assert (f.r, f.s, f.born_count, f.born_length) == (364, 2, 3, 364)


def test_shadow_fate_rejects_non_orbit_length():
    with pytest.raises(DomainError):
        shadow_fate(3, 7)


@pytest.mark.parametrize("p,n,expected", [
    (3, 2, {1: 2, 2: 1}),
    (3, 3, {1: 2, 2: 1, 6: 1}),
    (7, 2, {1: 2, 2: 1, 3: 2, 6: 2}),
])
def test_predicted_census_examples(p, n, expected):
    assert predicted_cycle_census(p, n) == CycleCensus.from_mapping(expected)


@pytest.mark.parametrize("p,n", [(3, 6), (5, 4), (7, 3), (11, 2), (23, 2), (31, 2), (73, 2)])
def test_predicted_census_matches_naive(p, n):
    assert predicted_cycle_census(p, n).as_dict() == naive_census(p**n)


def test_predicted_census_wieferich_level2():
    # counted against a full graph of size 1093^2
    assert predicted_cycle_census(1093, 2) == cycle_census(build_graph(1093, 2))


def test_case1_scan_records():
    recs = case1_scan(60)
    assert {r.p for r in recs} == {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59}
    for r in recs:
        assert r.two_pow_ell_is_one == (pow(2, r.ell, r.p) == 1)

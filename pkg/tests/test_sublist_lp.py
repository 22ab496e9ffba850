import random
from fractions import Fraction

import pytest

from treecenter.oracle import oracle_sublist_lowest
from treecenter.sublist_lp import EnvelopeIndex, HalfPlane, upper_envelope


def HP(a, b):
    return HalfPlane(Fraction(a), Fraction(b))


def test_wedge():
    idx = EnvelopeIndex([HP(1, 0), HP(-1, 0)])
    assert idx.query_lowest(0, 2) == (0, 0)


def test_wedge_with_floor():
    idx = EnvelopeIndex([HP(1, 0), HP(-1, 0), HP(0, 2)])
    x, y = idx.query_lowest(0, 3)
    assert y == 2
    assert x == -2  # leftmost point of the flat bottom


def test_single_positive_slope_unbounded():
    idx = EnvelopeIndex([HP(1, 0)])
    assert idx.query_lowest(0, 1) is None


def test_duplicates_collapse():
    idx = EnvelopeIndex([HP(1, 0), HP(1, 0), HP(-1, 0), HP(-1, 0)])
    assert idx.query_lowest(0, 4) == (0, 0)


def test_query_on_line():
    idx = EnvelopeIndex([HP(1, 0), HP(-1, 0), HP(0, 2)])
    assert idx.query_on_line(0, 2, Fraction(1)) == 1
    assert idx.query_on_line(0, 3, Fraction(0)) == 2
    single = EnvelopeIndex([HP(3, 1)])
    assert single.query_on_line(0, 1, Fraction(2)) == 7


def test_query_lowest_extra():
    idx = EnvelopeIndex([HP(1, 0)])
    assert idx.query_lowest_extra(0, 1, HP(-1, 0)) == (0, 0)
    idx2 = EnvelopeIndex([HP(1, 0), HP(-1, 0)])
    x, y = idx2.query_lowest_extra(0, 2, HP(0, 5))
    assert y == 5
    # a dominated extra plane changes nothing
    assert idx2.query_lowest_extra(0, 2, HP(0, -10)) == idx2.query_lowest(0, 2)


def test_bad_range_rejected():
    idx = EnvelopeIndex([HP(1, 0), HP(-1, 0)])
    with pytest.raises(IndexError):
        idx.query_lowest(1, 1)
    with pytest.raises(IndexError):
        idx.query_on_line(0, 3, 0)


def test_upper_envelope_drops_dominated():
    chain, breaks = upper_envelope([(0, 0), (0, 5), (1, -100), (-1, -100)])
    assert (0, 5) in chain
    assert (0, 0) not in chain


def random_planes(rng, m):
    out = []
    for _ in range(m):
        a = Fraction(rng.randint(-8, 8), rng.randint(1, 3))
        b = Fraction(rng.randint(-40, 40), rng.randint(1, 3))
        out.append(HalfPlane(a, b))
    return out


@pytest.mark.parametrize("seed", range(10))
def test_oracle_equivalence_all_pairs(seed):
    rng = random.Random(seed)
    m = rng.randint(1, 20)
    planes = random_planes(rng, m)
    idx = EnvelopeIndex(planes)
    for lo in range(m):
        for hi in range(lo + 1, m + 1):
            got = idx.query_lowest(lo, hi)
            want = oracle_sublist_lowest(planes, lo, hi)
            if want is None:
                assert got is None
            else:
                assert got is not None
                assert got[1] == want[1]
                # witness must actually attain the minimum
                assert max(p.y_at(got[0]) for p in planes[lo:hi]) == want[1]


@pytest.mark.parametrize("seed", range(6))
def test_on_line_matches_direct_loop(seed):
    rng = random.Random(100 + seed)
    m = rng.randint(1, 24)
    planes = random_planes(rng, m)
    idx = EnvelopeIndex(planes)
    for _ in range(40):
        lo = rng.randrange(m)
        hi = rng.randint(lo + 1, m)
        x0 = Fraction(rng.randint(-30, 30), rng.randint(1, 4))
        assert idx.query_on_line(lo, hi, x0) == max(
            p.y_at(x0) for p in planes[lo:hi]
        )


@pytest.mark.parametrize("seed", range(6))
def test_extra_plane_matches_oracle(seed):
    rng = random.Random(200 + seed)
    m = rng.randint(1, 16)
    planes = random_planes(rng, m)
    idx = EnvelopeIndex(planes)
    for _ in range(25):
        lo = rng.randrange(m)
        hi = rng.randint(lo + 1, m)
        extra = random_planes(rng, 1)[0]
        got = idx.query_lowest_extra(lo, hi, extra)
        want = oracle_sublist_lowest(planes, lo, hi, extra)
        if want is None:
            assert got is None
        else:
            assert got is not None and got[1] == want[1]


def test_convexity_of_range_max():
    # objective evaluated along x is convex: check midpoint inequality on a probe
    rng = random.Random(3)
    planes = random_planes(rng, 12)
    idx = EnvelopeIndex(planes)
    for _ in range(30):
        lo = rng.randrange(12)
        hi = rng.randint(lo + 1, 12)
        xs = sorted(Fraction(rng.randint(-20, 20)) for _ in range(3))
        ya, ym, yb = (idx.query_on_line(lo, hi, x) for x in xs)
        if xs[2] > xs[0]:
            t = (xs[1] - xs[0]) / (xs[2] - xs[0])
            assert ym <= (1 - t) * ya + t * yb


def test_all_horizontal_planes():
    idx = EnvelopeIndex([HP(0, 3), HP(0, -1)])
    got = idx.query_lowest(0, 2)
    assert got is not None and got[1] == 3

import math
import random
from fractions import Fraction

import pytest

from treecenter.sorted_matrix import LambdaRange, SortedMatrix, msearch


def dense(rows):
    """SortedMatrix over a dense list-of-lists."""
    r, c = len(rows), len(rows[0])
    return SortedMatrix(rows=r, cols=c, eval=lambda i, j: rows[i][j])


def make_sorted(rng, r, c, hi=1000):
    """Random matrix with nonincreasing rows and columns."""
    a = sorted((rng.randint(0, hi) for _ in range(r)), reverse=True)
    b = sorted((rng.randint(0, hi) for _ in range(c)), reverse=True)
    return [[a[i] + b[j] for j in range(c)] for i in range(r)]


def threshold_tester(theta, log=None):
    def tester(lam):
        if log is not None:
            log.append(lam)
        return lam >= theta

    return tester


def test_single_element():
    rng = LambdaRange(0, 10)
    res = msearch([dense([[5]])], rng, 0, threshold_tester(5))
    assert rng.hi == 5
    assert res.remaining == 0


def test_two_by_two():
    rng = LambdaRange(0, 10)
    res = msearch([dense([[4, 2], [3, 1]])], rng, 0, threshold_tester(3))
    assert rng.hi == 3
    assert rng.lo >= 2
    assert res.remaining == 0


def test_stopping_count_already_met():
    rng = LambdaRange(0, 10)
    calls = []
    res = msearch([dense([[4, 2], [3, 1]])], rng, 4, threshold_tester(3, calls))
    assert calls == []
    assert (rng.lo, rng.hi) == (0, 10)
    assert res.remaining == 4


def test_negative_stopping_count_rejected():
    with pytest.raises(ValueError):
        msearch([dense([[1]])], LambdaRange(0, 2), -1, threshold_tester(1))


def _pool_values(mats):
    out = []
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out.append(m.value(i, j))
    return out


@pytest.mark.parametrize("seed", range(12))
def test_c0_lands_on_smallest_feasible(seed):
    rng0 = random.Random(seed)
    mats = []
    for _ in range(rng0.randint(1, 5)):
        r = rng0.randint(1, 12)
        c = rng0.randint(r, 16)
        mats.append(dense(make_sorted(rng0, r, c)))
    values = sorted(set(_pool_values(mats)))
    theta = values[rng0.randrange(len(values))]
    rng = LambdaRange(min(values) - 1, max(values) + 1)
    res = msearch(mats, rng, 0, threshold_tester(theta))
    assert res.remaining == 0
    feasible = [v for v in values if v >= theta]
    assert rng.hi == min(feasible)
    # discard soundness: nothing remains strictly inside the final range
    assert all(not rng.contains_open(v) for v in _pool_values(mats))
    # bracket still valid
    assert rng.hi >= theta > rng.lo


def test_tester_called_only_inside_range():
    rng0 = random.Random(5)
    mats = [dense(make_sorted(rng0, 6, 9))]
    seen = []
    rng = LambdaRange(200, 1500)
    msearch(mats, rng, 0, threshold_tester(700, seen))
    assert all(200 < lam < 1500 for lam in seen)
    # strictly monotone narrowing throughout implies all calls distinct
    assert len(seen) == len(set(seen))


def test_remaining_per_matrix_with_positive_c():
    rng0 = random.Random(9)
    mats = [dense(make_sorted(rng0, 4, 4)) for _ in range(6)]
    rng = LambdaRange(-1, 10**5)
    res = msearch(mats, rng, 5, threshold_tester(900))
    assert res.remaining <= 5
    assert sum(res.remaining_per_matrix) == res.remaining
    assert len(res.remaining_per_matrix) == 6


def test_wide_matrices_and_transposed():
    rng0 = random.Random(1)
    rows = make_sorted(rng0, 2, 37)
    tall = [[rows[i][j] for i in range(2)] for j in range(37)]  # 37x2
    for mat in (dense(rows), dense(tall)):
        values = sorted(set(_pool_values([mat])))
        theta = values[len(values) // 2]
        rng = LambdaRange(min(values) - 1, max(values) + 1)
        msearch([mat], rng, 0, threshold_tester(theta))
        assert rng.hi == min(v for v in values if v >= theta)


def test_call_budget():
    rng0 = random.Random(42)
    for trial in range(20):
        mats = []
        maxdim = 0
        total = 0
        while total < 500:
            r = rng0.randint(1, 16)
            c = rng0.randint(r, 64)
            mats.append(dense(make_sorted(rng0, r, c)))
            maxdim = max(maxdim, c)
            total += r * c
        values = _pool_values(mats)
        theta = rng0.choice(values)
        rng = LambdaRange(min(values) - 1, max(values) + 1)
        res = msearch(mats, rng, 0, threshold_tester(theta))
        assert res.tester_calls <= 4 * math.log2(max(maxdim, 2)) + 8


def test_exact_fractions():
    rows = [[Fraction(7, 2), Fraction(1, 3)], [Fraction(5, 4), Fraction(1, 6)]]
    rng = LambdaRange(Fraction(0), Fraction(100))
    msearch([dense(rows)], rng, 0, threshold_tester(Fraction(5, 4)))
    assert rng.hi == Fraction(5, 4)

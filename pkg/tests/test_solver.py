import random
from fractions import Fraction

import pytest

from treecenter.feasibility import dftest0, ftest0, ftest0_feasible
from treecenter.oracle import oracle_solve
from treecenter.solver import (
    SolverConfig,
    _Session,
    default_r,
    solve,
)
from treecenter.sorted_matrix import LambdaRange
from treecenter.stems import stem_arrays_discrete, stem_matrices_continuous
from treecenter.tree import random_tree, root_at

from conftest import F, make_tree, path_tree


def test_solve_path_weighted():
    tree = path_tree([1, 3], [4])
    res = solve(tree, 1)
    assert res.lambda_star == 3
    (c,) = res.centers
    # the single center sits at distance 3 from the unit-weight endpoint
    assert c.edge is not None and {c.edge[0], c.edge[1]} == {0, 1}
    off_from_v0 = c.offset if c.edge[0] == 0 else 4 - c.offset
    assert off_from_v0 == 3


def test_solve_unit_path_two_centers():
    tree = path_tree([1] * 5, [1] * 4)
    assert solve(tree, 2).lambda_star == 1


def test_solve_k_at_least_n():
    tree = path_tree([1] * 5, [1] * 4)
    res = solve(tree, 5)
    assert res.lambda_star == 0
    assert len(res.centers) <= 5


def test_solve_discrete_path():
    tree = path_tree([1, 3], [4])
    assert solve(tree, 1, SolverConfig(mode="discrete")).lambda_star == 4


def test_solve_single_vertex():
    tree = make_tree([7], [])
    res = solve(tree, 1)
    assert res.lambda_star == 0 and res.centers[0].vertex == 0


def test_solve_rejects_k_zero():
    tree = path_tree([1, 1], [1])
    with pytest.raises(ValueError):
        solve(tree, 0)


def test_preprocess_brackets_optimum():
    tree = path_tree([1, 1], [2])
    s = _Session(tree, 1, SolverConfig())
    s.preprocess()
    assert s.range.lo < 1 <= s.range.hi


def test_preprocess_star_deterministic():
    tree = make_tree([1, 1, 1, 1], [(0, 1, 2), (0, 2, 2), (0, 3, 2)])
    ranks = []
    for _ in range(2):
        s = _Session(tree, 1, SolverConfig())
        s.preprocess()
        ranks.append(s.ranks)
    assert ranks[0] == ranks[1]


def full_binary_tree(depth):
    n = 2 ** depth - 1
    edges = [(v, (v - 1) // 2, 1) for v in range(1, n)]
    return make_tree([1] * n, [((v - 1) // 2, v, 1) for v in range(1, n)])


def test_phase0_identity_when_few_leaves():
    tree = path_tree([1] * 6, [1] * 5)
    s = _Session(tree, 2, SolverConfig())
    s.preprocess()
    alive_before = set(s.working.alive)
    s.phase0()
    assert s.working.alive == alive_before


def test_phase0_leaf_count_decreases():
    tree = full_binary_tree(5)  # n = 31
    s = _Session(tree, 3, SolverConfig(r=4))
    s.preprocess()
    s.phase = "phase0"
    counts = [s.working.leaf_count()]
    import math

    r = 4
    n = tree.n
    import treecenter.solver as SV

    while s.working.leaf_count() > 2 * n / r:
        before = s.working.leaf_count()
        stems = s.working.leaf_stems(max_len=r)
        from treecenter.sorted_matrix import msearch
        from treecenter.arrangement import find_boundary_vertices
        from treecenter.stems import stem_lines

        pool = []
        owners = []
        for si, st in enumerate(stems):
            for m in stem_matrices_continuous(st)[0]:
                pool.append(m)
                owners.append(si)
        res = msearch(pool, s.range, sum(st.m for st in stems) // (2 * r),
                      s.base_tester())
        hot = {owners[i] for i, rem in enumerate(res.remaining_per_matrix) if rem}
        chosen = [st for si, st in enumerate(stems) if si not in hot]
        lpool = []
        for si, st in enumerate(chosen):
            lpool.extend(stem_lines(st, stem_id=si))
        find_boundary_vertices(lpool, s.range, s.base_tester(), s.rand)
        s._reduce(chosen, s.base_tester())
        s.cur_rooted, _ = s.working.materialize()
        after = s.working.leaf_count()
        assert after < before
        counts.append(after)
    assert counts[-1] <= 2 * n / r


@pytest.mark.parametrize("mode", ["continuous", "discrete"])
def test_phase0_preserves_optimum(mode):
    rng = random.Random(55)
    for _ in range(20):
        n = rng.randint(6, 48)
        tree = random_tree(n, seed=rng.randrange(10**6))
        k = rng.randint(1, max(1, n // 2))
        want = oracle_solve(tree, k, mode)
        s = _Session(tree, k, SolverConfig(mode=mode, r=3))
        if ftest0_feasible(s.rooted, 0, k, mode == "discrete"):
            continue
        s.preprocess()
        import treecenter.solver as SV

        try:
            s.phase0()
        except SV._BudgetExhausted:
            assert want == s.range.hi
            continue
        # the reduced instance, solved with the remaining budget, has the
        # same optimum as the original
        rooted_red, _ = s.working.materialize()
        got = oracle_solve(rooted_red.tree, max(s.k_work, 1), mode)
        assert got == want
        assert s.range.lo < want <= s.range.hi


def test_phase1_no_active_candidate_values():
    rng = random.Random(66)
    for mode in ("continuous", "discrete"):
        for _ in range(8):
            n = rng.randint(4, 30)
            tree = random_tree(n, seed=rng.randrange(10**6))
            k = rng.randint(1, max(1, n // 2))
            s = _Session(tree, k, SolverConfig(mode=mode, r=3))
            if ftest0_feasible(s.rooted, 0, k, mode == "discrete"):
                continue
            s.preprocess()
            s.phase0()
            s.phase1()
            from treecenter.solver import _chop

            r = max(2, 3)
            for stem in s.working.stems():
                for sub in _chop(stem, r):
                    if mode == "discrete":
                        mats = stem_arrays_discrete(sub)[0]
                    else:
                        mats = stem_matrices_continuous(sub)[0]
                    for mat in mats:
                        for i in range(mat.rows):
                            for j in range(mat.cols):
                                assert not s.range.contains_open(mat.value(i, j))


def test_stem_tree_structure():
    tree = make_tree(
        [1] * 7,
        [(0, 1, 1), (1, 2, 1), (2, 3, 1), (2, 4, 1), (4, 5, 1), (4, 6, 1)],
    )
    s = _Session(tree, 2, SolverConfig(r=2))
    s.preprocess()
    s.phase1()
    tabs = s.fast.tabs
    children = s.fast.children
    # every child's top vertex is its parent's bottom vertex
    for pi, kids in enumerate(children):
        for c in kids:
            assert tabs[c].stem.backbone[-1] == tabs[pi].stem.backbone[0]
    order = s.fast.postorder
    seen = set()
    for idx in order:
        for c in children[idx]:
            assert c in seen
        seen.add(idx)


@pytest.mark.parametrize("mode", ["continuous", "discrete"])
def test_fast_test_agrees_with_scan(mode):
    rng = random.Random(44)
    discrete = mode == "discrete"
    trees = 0
    while trees < 60:
        n = rng.randint(3, 150)
        tree = random_tree(n, seed=rng.randrange(10**6))
        k = rng.randint(1, n)
        s = _Session(tree, k, SolverConfig(mode=mode))
        if ftest0_feasible(s.rooted, 0, k, discrete):
            continue
        trees += 1
        s.preprocess()
        s.phase0()
        s.phase1()
        for i in range(12):
            lam = s.range.lo + (s.range.hi - s.range.lo) * F(
                rng.randint(1, 9999), 10000
            )
            assert s.fast(lam) == ftest0_feasible(s.rooted, lam, k, discrete)


def test_fast_test_rejects_out_of_bracket():
    tree = path_tree([1, 2, 3], [2, 2])
    s = _Session(tree, 1, SolverConfig())
    s.preprocess()
    s.phase0()
    s.phase1()
    with pytest.raises(ValueError):
        s.fast(s.range.hi + 1)


@pytest.mark.parametrize("mode", ["continuous", "discrete"])
def test_phase_toggles_fall_back(mode):
    rng = random.Random(31)
    for flags in ((False, True, True), (True, False, True), (True, True, False),
                  (False, False, False)):
        p0, p1, p2 = flags
        for _ in range(4):
            n = rng.randint(2, 30)
            tree = random_tree(n, seed=rng.randrange(10**6))
            k = rng.randint(1, n)
            cfg = SolverConfig(mode=mode, use_phase0=p0, use_phase1=p1, use_phase2=p2)
            assert solve(tree, k, cfg).lambda_star == oracle_solve(tree, k, mode)


def test_deterministic_runs():
    tree = random_tree(80, seed=12)
    a = solve(tree, 5, SolverConfig(seed=9, record_tests=True))
    b = solve(tree, 5, SolverConfig(seed=9, record_tests=True))
    assert a.lambda_star == b.lambda_star
    assert a.tested == b.tested
    assert [(_c.edge, _c.offset, _c.vertex) for _c in a.centers] == [
        (_c.edge, _c.offset, _c.vertex) for _c in b.centers
    ]


def test_bracket_narrows_monotonically():
    events = []

    class SpyRange(LambdaRange):
        def resolve(self, tester, value):
            out = super().resolve(tester, value)
            events.append((self.lo, self.hi))
            return out

    import treecenter.solver as SV

    tree = random_tree(60, seed=77)
    s = _Session(tree, 3, SolverConfig())
    s.preprocess()
    s.range = SpyRange(s.range.lo, s.range.hi)
    s.phase0()
    s.phase1()
    s.phase2()
    for (lo1, hi1), (lo2, hi2) in zip(events, events[1:]):
        assert lo2 >= lo1 and hi2 <= hi1 and lo2 < hi2


def test_recorded_tests_replay_against_scan():
    rng = random.Random(17)
    for mode in ("continuous", "discrete"):
        discrete = mode == "discrete"
        for _ in range(6):
            n = rng.randint(3, 60)
            tree = random_tree(n, seed=rng.randrange(10**6))
            k = rng.randint(1, n)
            res = solve(tree, k, SolverConfig(mode=mode, record_tests=True))
            rooted = root_at(tree, 0)
            for phase, kind, lam, verdict in res.tested:
                assert ftest0_feasible(rooted, lam, k, discrete) == verdict


def test_end_to_end_random_exactness():
    rng = random.Random(2024)
    for _ in range(25):
        n = rng.randint(2, 90)
        tree = random_tree(n, seed=rng.randrange(10**6))
        k = rng.randint(1, n)
        for mode in ("continuous", "discrete"):
            assert (
                solve(tree, k, SolverConfig(mode=mode)).lambda_star
                == oracle_solve(tree, k, mode)
            )


def test_default_r():
    assert default_r(1) == 1
    assert default_r(2) == 1
    assert default_r(200) == 64
    assert default_r(4) == 4

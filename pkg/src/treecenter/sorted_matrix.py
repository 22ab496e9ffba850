"""Searching collections of implicitly represented sorted matrices.

A sorted matrix has nonincreasing rows (left to right) and nonincreasing
columns (top to bottom). `msearch` discards all but at most c elements of
a matrix pool against a monotone feasibility predicate while maintaining
an open-closed bracket (lo, hi] around the optimum: lo stays strictly
infeasible, hi stays feasible, and only values strictly inside the open
interval are ever submitted to the tester.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class LambdaRange:
    """The maintained bracket (lo, hi]: lo infeasible, hi feasible, lo < hi."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        if not lo < hi:
            raise ValueError("empty range")
        self.lo = lo
        self.hi = hi

    def contains_open(self, value) -> bool:
        return self.lo < value < self.hi

    def resolve(self, tester, value) -> bool:
        """Feasibility of `value`, testing only if strictly inside the bracket."""
        if value <= self.lo:
            return False
        if value >= self.hi:
            return True
        if tester(value):
            self.hi = value
            return True
        self.lo = value
        return False

    def copy(self) -> "LambdaRange":
        return LambdaRange(self.lo, self.hi)

    def __repr__(self):
        return f"LambdaRange(({self.lo}, {self.hi}])"


@dataclass(frozen=True)
class SortedMatrix:
    """rows x cols matrix given by an evaluator; rows and columns nonincreasing."""

    rows: int
    cols: int
    eval: object  # callable (i, j) -> scalar, 0-based
    owner: object = None

    def value(self, i: int, j: int):
        return self.eval(i, j)


@dataclass
class MSearchResult:
    range: LambdaRange
    remaining: int
    remaining_per_matrix: list = field(default_factory=list)
    tester_calls: int = 0


def _next_pow2(x: int) -> int:
    p = 1
    while p < x:
        p <<= 1
    return p


def _weighted_median(pairs):
    """Smallest value whose cumulative weight reaches half the total."""
    pairs.sort(key=lambda t: t[0])
    total = sum(wt for _, wt in pairs)
    acc = 0
    for value, wt in pairs:
        acc += 2 * wt
        if acc >= total:
            return value
    return pairs[-1][0]


class _Square:
    __slots__ = ("mat", "i0", "j0", "size", "h", "w", "vmin", "vmax")

    def __init__(self, mat_idx: int, i0: int, j0: int, size: int, rows: int, cols: int):
        self.mat = mat_idx
        self.i0 = i0
        self.j0 = j0
        self.size = size
        self.h = min(size, rows - i0)
        self.w = min(size, cols - j0)

    def cells(self) -> int:
        return self.h * self.w


def msearch(matrices, rng: LambdaRange, c: int, tester) -> MSearchResult:
    """Discard all but at most c pool elements, narrowing `rng` in place.

    `tester` is a monotone predicate lam -> bool called only on values
    strictly inside the current open interval.
    """
    if c < 0:
        raise ValueError("stopping count must be nonnegative")

    # normalize orientation so rows <= cols; a transposed sorted matrix is sorted
    norm = []
    for m in matrices:
        if m.rows <= m.cols:
            norm.append((m.rows, m.cols, m.eval))
        else:
            ev = m.eval
            norm.append((m.cols, m.rows, lambda i, j, _e=ev: _e(j, i)))

    total = sum(r * cl for r, cl, _ in norm)
    result = MSearchResult(range=rng, remaining=total,
                           remaining_per_matrix=[m.rows * m.cols for m in matrices])
    if total <= c:
        return result

    calls = 0

    def resolve(value) -> bool:
        nonlocal calls
        if value <= rng.lo:
            return False
        if value >= rng.hi:
            return True
        calls += 1
        feas = tester(value)
        if feas:
            rng.hi = value
        else:
            rng.lo = value
        return feas

    # cut each matrix into width-r chunks, padded to a common power-of-two side
    side = 1
    for r, _cl, _ in norm:
        side = max(side, _next_pow2(r))
    squares = []
    for idx, (r, cl, _) in enumerate(norm):
        for j0 in range(0, cl, r):
            sq = _Square(idx, 0, j0, side, r, cl)
            sq.w = min(r, cl - j0)
            squares.append(sq)

    def corners(sq: _Square):
        r, cl, ev = norm[sq.mat]
        sq.vmax = ev(sq.i0, sq.j0)
        sq.vmin = ev(sq.i0 + sq.h - 1, sq.j0 + sq.w - 1)

    def prune(pool):
        kept = []
        for sq in pool:
            if sq.vmax <= rng.lo or sq.vmin >= rng.hi:
                continue
            kept.append(sq)
        return kept

    for sq in squares:
        corners(sq)
    squares = prune(squares)

    def remaining_cells(pool) -> int:
        return sum(sq.cells() for sq in pool)

    while remaining_cells(squares) > c and squares:
        if side > 1:
            side //= 2
            children = []
            for sq in squares:
                r, cl, _ = norm[sq.mat]
                for di in (0, side):
                    for dj in (0, side):
                        i0, j0 = sq.i0 + di, sq.j0 + dj
                        if i0 < r and j0 < cl and i0 < sq.i0 + sq.h and j0 < sq.j0 + sq.w:
                            child = _Square(sq.mat, i0, j0, side, r, cl)
                            child.h = min(child.h, sq.i0 + sq.h - i0)
                            child.w = min(child.w, sq.j0 + sq.w - j0)
                            corners(child)
                            children.append(child)
            squares = prune(children)
            if remaining_cells(squares) <= c:
                break

        if not squares:
            break
        med_lo = _weighted_median([(sq.vmin, sq.cells()) for sq in squares])
        resolve(med_lo)
        squares = prune(squares)
        if remaining_cells(squares) <= c or not squares:
            break
        med_hi = _weighted_median([(sq.vmax, sq.cells()) for sq in squares])
        if med_hi != med_lo:
            resolve(med_hi)
            squares = prune(squares)

    per_matrix = [0] * len(matrices)
    for sq in squares:
        per_matrix[sq.mat] += sq.cells()
    result.remaining = sum(per_matrix)
    result.remaining_per_matrix = per_matrix
    result.tester_calls = calls
    return result

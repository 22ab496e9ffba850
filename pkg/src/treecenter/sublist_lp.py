"""Lowest-point queries over contiguous runs of upper half-planes.

An upper half-plane is y >= a*x + b. The index is a balanced range tree
over the plane list; each node stores the upper envelope of its range's
bounding lines as a slope-sorted convex chain. A query decomposes a run
into O(log m) canonical chains and minimizes their pointwise maximum,
which is convex in x.

Ranges are 0-based half-open [lo, hi).
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from typing import NamedTuple


class HalfPlane(NamedTuple):
    a: object  # slope
    b: object  # intercept: the constraint is y >= a*x + b

    def y_at(self, x):
        return self.a * x + self.b


def upper_envelope(lines):
    """Envelope (pointwise max) of lines as a slope-increasing chain.

    Input: iterable of (a, b). Equal slopes keep the larger intercept;
    dominated lines are removed. Returns (chain, breaks) where chain[i]
    is best on [breaks[i-1], breaks[i]].
    """
    pts = sorted(lines)
    dedup = []
    for a, b in pts:
        if dedup and dedup[-1][0] == a:
            if b > dedup[-1][1]:
                dedup[-1] = (a, b)
        else:
            dedup.append((a, b))
    chain = []
    for a, b in dedup:
        # drop previous lines that fall below max(new, one-before) everywhere
        while chain:
            a1, b1 = chain[-1]
            if len(chain) == 1:
                # keep unless parallel-dominated (handled by dedup): intersect later
                break
            a0, b0 = chain[-2]
            # chain[-1] is useful iff it rises above chain[-2] before the new
            # line does: x10 = cross(prev, last), x20 = cross(prev, new)
            # last survives iff x10 < x20
            if (b1 - b0) * (a0 - a) < (b - b0) * (a0 - a1):
                break
            chain.pop()
        chain.append((a, b))
    breaks = []
    for (a0, b0), (a1, b1) in zip(chain, chain[1:]):
        breaks.append((b0 - b1) / (a1 - a0))
    return chain, breaks


class _Chain:
    __slots__ = ("lines", "breaks")

    def __init__(self, lines, breaks):
        self.lines = lines
        self.breaks = breaks

    def piece_at(self, x) -> int:
        """Index of a line attaining the envelope at x (leftmost on ties)."""
        return bisect_left(self.breaks, x)

    def value(self, x):
        a, b = self.lines[self.piece_at(x)]
        return a * x + b

    def value_slopes(self, x):
        """(value, left slope, right slope) of the envelope at x."""
        i = bisect_left(self.breaks, x)
        j = bisect_right(self.breaks, x)
        a, b = self.lines[i]
        return a * x + b, self.lines[i][0], self.lines[j][0]

    @property
    def min_slope(self):
        return self.lines[0][0]

    @property
    def max_slope(self):
        return self.lines[-1][0]


class EnvelopeIndex:
    """Range tree over half-planes; nodes hold upper envelopes of their runs."""

    def __init__(self, planes):
        planes = list(planes)
        if not planes:
            raise ValueError("need at least one half-plane")
        self.m = len(planes)
        self.planes = planes
        size = 1
        while size < self.m:
            size <<= 1
        self.size = size
        self.nodes = [None] * (2 * size)
        for i, hp in enumerate(planes):
            self.nodes[size + i] = _Chain([(hp.a, hp.b)], [])
        for i in range(size - 1, 0, -1):
            left, right = self.nodes[2 * i], self.nodes[2 * i + 1]
            if left is None and right is None:
                continue
            if right is None:
                self.nodes[i] = left
            else:
                lines, breaks = upper_envelope(left.lines + right.lines)
                self.nodes[i] = _Chain(lines, breaks)

    def _canonical(self, lo: int, hi: int):
        """Chains covering [lo, hi) (0-based half-open)."""
        if not (0 <= lo < hi <= self.m):
            raise IndexError(f"bad plane range [{lo}, {hi})")
        out = []
        lo += self.size
        hi += self.size
        while lo < hi:
            if lo & 1:
                out.append(self.nodes[lo])
                lo += 1
            if hi & 1:
                hi -= 1
                out.append(self.nodes[hi])
            lo >>= 1
            hi >>= 1
        return out

    # ------------------------------------------------------------------
    def query_on_line(self, lo: int, hi: int, x0):
        """Lowest feasible y on the vertical line x = x0 over planes[lo:hi]."""
        return max(ch.value(x0) for ch in self._canonical(lo, hi))

    def query_lowest(self, lo: int, hi: int):
        """Lowest point of the common intersection of planes[lo:hi].

        Returns (x, y), or None when the intersection is unbounded below
        (all slopes strictly positive or all strictly negative). The x
        witness is the leftmost minimizer when the minimum is attained on
        a segment with a finite left end.
        """
        return self._lowest(self._canonical(lo, hi))

    def query_lowest_extra(self, lo: int, hi: int, extra: HalfPlane):
        """Lowest point of planes[lo:hi] plus one additional half-plane."""
        chains = self._canonical(lo, hi)
        chains.append(_Chain([(extra.a, extra.b)], []))
        return self._lowest(chains)

    # ------------------------------------------------------------------
    @staticmethod
    def _probe(chains, x):
        """(g(x), right derivative of g at x) for g = max of the chains."""
        best = None
        dplus = None
        for ch in chains:
            val, _sl, sr = ch.value_slopes(x)
            if best is None or val > best:
                best, dplus = val, sr
            elif val == best and sr > dplus:
                dplus = sr
        return best, dplus

    def _lowest(self, chains):
        min_slope = min(ch.min_slope for ch in chains)
        max_slope = max(ch.max_slope for ch in chains)
        if min_slope > 0 or max_slope < 0:
            return None

        lo_x = None  # exclusive lower bound; None = unbounded
        hi_x = None  # inclusive upper bound; None = unbounded

        # binary-search the leftmost x with g'(x+) >= 0 over chain breakpoints
        while True:
            pick = None
            pick_width = 0
            for ch in chains:
                br = ch.breaks
                if not br:
                    continue
                i = 0 if lo_x is None else bisect_right(br, lo_x)
                j = len(br) if hi_x is None else bisect_left(br, hi_x)
                if j - i > pick_width:
                    pick_width = j - i
                    pick = (br, i, j)
            if pick is None:
                break
            br, i, j = pick
            xm = br[(i + j) // 2]
            _g, dplus = self._probe(chains, xm)
            if dplus >= 0:
                hi_x = xm
            else:
                lo_x = xm

        # every chain is a single line on (lo_x, hi_x); minimize their max there
        pieces = []
        for ch in chains:
            if hi_x is not None:
                idx = bisect_left(ch.breaks, hi_x)
            elif lo_x is not None:
                idx = bisect_right(ch.breaks, lo_x)
            else:
                idx = 0
            pieces.append(ch.lines[idx])
        env, breaks = upper_envelope(pieces)
        # leftmost minimizer of the small envelope, clamped into (lo_x, hi_x]
        k = 0
        while k < len(env) and env[k][0] < 0:
            k += 1
        if k == len(env):
            # still falling at the window's right edge; the edge is the minimizer
            x_star = hi_x
        elif k > 0:
            x_star = breaks[k - 1]
        elif env[0][0] == 0 and breaks:
            # flat leading piece: no finite leftmost point, witness its right end
            x_star = breaks[0]
        elif hi_x is not None:
            x_star = hi_x
        else:
            x_star = 0
        if hi_x is not None and x_star > hi_x:
            x_star = hi_x
        y = max(aa * x_star + bb for aa, bb in env)
        return x_star, y

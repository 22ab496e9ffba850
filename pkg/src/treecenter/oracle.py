"""Independent brute-force solvers and checkers used as ground truth.

Everything here favors obviousness over speed: quadratic candidate sets,
pairwise enumeration, and direct scans. These routines must stay
independent of the fast code paths they are used to verify.
"""

from __future__ import annotations

from .feasibility import dftest0, ftest0
from .tree import Tree, root_at

ORACLE_SIZE_GUARD = 2000


def all_pairs_distances(tree: Tree):
    """Dense distance table via one traversal per vertex."""
    n = tree.n
    adj = tree.adjacency()
    dist = [[0] * n for _ in range(n)]
    for s in range(n):
        row = dist[s]
        seen = [False] * n
        seen[s] = True
        stack = [s]
        while stack:
            x = stack.pop()
            for y, length in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    row[y] = row[x] + length
                    stack.append(y)
    return dist


def candidate_values(tree: Tree, mode: str):
    """Sorted candidate set guaranteed to contain the optimum.

    Continuous: 0, the pairwise equalizing values w*w'*d/(w+w'), and all
    vertex-anchored values w(v)*d(v,u). Discrete: 0 and w(v)*d(v,u).
    The superset is sound because feasibility is monotone.
    """
    n = tree.n
    w = tree.weights
    dist = all_pairs_distances(tree)
    values = {0}
    for v in range(n):
        if w[v] == 0:
            continue
        for u in range(n):
            values.add(w[v] * dist[v][u])
    if mode == "continuous":
        for v in range(n):
            for u in range(v + 1, n):
                if w[v] + w[u] > 0:
                    values.add(w[v] * w[u] * dist[v][u] / (w[v] + w[u]))
    return sorted(values)


def oracle_solve(tree: Tree, k: int, mode: str = "continuous"):
    """Exact optimum by binary search over the sorted candidate list."""
    if tree.n > ORACLE_SIZE_GUARD:
        raise ValueError(f"oracle refuses n > {ORACLE_SIZE_GUARD}")
    if k < 1:
        raise ValueError("k must be at least 1")
    rooted = root_at(tree, 0)
    test = dftest0 if mode == "discrete" else ftest0
    values = candidate_values(tree, mode)
    lo, hi = 0, len(values) - 1
    if test(rooted, values[hi], k).feasible is False:
        raise AssertionError("largest candidate infeasible; candidate set broken")
    while lo < hi:
        mid = (lo + hi) // 2
        if test(rooted, values[mid], k).feasible:
            hi = mid
        else:
            lo = mid + 1
    return values[lo]


def oracle_sublist_lowest(planes, lo: int, hi: int, extra=None):
    """Lowest point of upper half-planes planes[lo:hi] (plus `extra`).

    Enumerates all pairwise bounding-line intersections and per-line
    minima. Returns (x, y) or None when unbounded below.
    """
    lines = [(p.a, p.b) for p in planes[lo:hi]]
    if extra is not None:
        lines.append((extra.a, extra.b))
    if len(lines) > 512:
        raise ValueError("oracle sublist query too large")
    if min(a for a, _ in lines) > 0 or max(a for a, _ in lines) < 0:
        return None

    def g(x):
        return max(a * x + b for a, b in lines)

    best = None
    for i in range(len(lines)):
        a1, b1 = lines[i]
        for j in range(i + 1, len(lines)):
            a2, b2 = lines[j]
            if a1 == a2:
                continue
            x = (b2 - b1) / (a1 - a2)
            y = g(x)
            if best is None or y < best[1] or (y == best[1] and x < best[0]):
                best = (x, y)
    if best is None:
        # no crossings at all: all lines parallel (same slope 0 after the
        # unbounded check), the envelope is one flat line
        b = max(bb for _, bb in lines)
        return 0, b
    return best


def enumerate_arrangement_vertices(lines):
    """All pairwise crossings as (y, x, i, j); parallel pairs contribute none."""
    out = []
    for i in range(len(lines)):
        a1, b1 = lines[i].a, lines[i].b
        for j in range(i + 1, len(lines)):
            a2, b2 = lines[j].a, lines[j].b
            if a1 == a2:
                continue
            x = (b2 - b1) / (a1 - a2)
            out.append((a1 * x + b1, x, i, j))
    out.sort(key=lambda t: (t[0],))
    return out


def oracle_arrangement(lines, tester):
    """Boundary vertices by full enumeration plus binary search on y values.

    Returns (v1, v2) where each side is (x, y, (i, j)) or None. v1 is the
    lowest vertex whose y is feasible; v2 is the highest vertex strictly
    below it (below everything when v1 is None).
    """
    if len(lines) > 512:
        raise ValueError("oracle arrangement too large")
    verts = enumerate_arrangement_vertices(lines)
    if not verts:
        return None, None
    ys = sorted({v[0] for v in verts})
    lo, hi = 0, len(ys)
    # smallest feasible y, if any
    while lo < hi:
        mid = (lo + hi) // 2
        if tester(ys[mid]):
            hi = mid
        else:
            lo = mid + 1
    v1 = None
    if lo < len(ys):
        y1 = ys[lo]
        for y, x, i, j in verts:
            if y == y1:
                v1 = (x, y, (i, j))
                break
    limit = ys[lo] if lo < len(ys) else None
    v2 = None
    for y, x, i, j in reversed(verts):
        if limit is None or y < limit:
            v2 = (x, y, (i, j))
            break
    return v1, v2

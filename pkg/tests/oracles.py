"""Brute-force reference implementations used to pin expected test values.

Everything here is deliberately naive (nested loops, exhaustive enumeration,
direct formula evaluation) and independent of the library code paths it
checks.
"""

from __future__ import annotations

import math
from collections import deque
from math import fsum

import numpy as np

EPS = 1e-9


# -- geometry: shared borders / shared points ---------------------------------


def _segments(rings):
    for ring in rings:
        n = len(ring)
        for k in range(n):
            yield ring[k], ring[(k + 1) % n]


def _point_segment_distance(p, a, b):
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    length2 = dx * dx + dy * dy
    if length2 == 0.0:
        return math.dist(p, a)
    t = max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / length2))
    return math.dist(p, (ax + t * dx, ay + t * dy))


def _collinear_overlap(a1, a2, b1, b2):
    """Length of the collinear overlap of two segments (0 if none)."""
    dx, dy = a2[0] - a1[0], a2[1] - a1[1]
    norm = math.hypot(dx, dy)
    if norm == 0.0:
        return 0.0
    ux, uy = dx / norm, dy / norm
    for p in (b1, b2):
        cross = (p[0] - a1[0]) * uy - (p[1] - a1[1]) * ux
        if abs(cross) > EPS:
            return 0.0
    ta1, ta2 = 0.0, norm
    tb1 = (b1[0] - a1[0]) * ux + (b1[1] - a1[1]) * uy
    tb2 = (b2[0] - a1[0]) * ux + (b2[1] - a1[1]) * uy
    lo = max(min(ta1, ta2), min(tb1, tb2))
    hi = min(max(ta1, ta2), max(tb1, tb2))
    return max(0.0, hi - lo)


def regions_share_segment(rings_a, rings_b) -> bool:
    for a1, a2 in _segments(rings_a):
        for b1, b2 in _segments(rings_b):
            if _collinear_overlap(a1, a2, b1, b2) > EPS:
                return True
    return False


def regions_share_point(rings_a, rings_b) -> bool:
    if regions_share_segment(rings_a, rings_b):
        return True
    for ring in rings_a:
        for p in ring:
            for b1, b2 in _segments(rings_b):
                if _point_segment_distance(p, b1, b2) <= EPS:
                    return True
    for ring in rings_b:
        for p in ring:
            for a1, a2 in _segments(rings_a):
                if _point_segment_distance(p, a1, a2) <= EPS:
                    return True
    return False


def brute_force_edges(region_set, rule: str) -> set[tuple[str, str]]:
    """Pairwise geometric adjacency test over every region pair."""
    edges = set()
    regions = region_set.regions
    for i in range(len(regions)):
        for j in range(i + 1, len(regions)):
            a, b = regions[i], regions[j]
            if rule == "rook":
                touching = regions_share_segment(a.rings, b.rings)
            else:
                touching = regions_share_point(a.rings, b.rings)
            if touching:
                edges.add(tuple(sorted((a.id, b.id))))
    return edges


# -- graphs --------------------------------------------------------------------


def bfs_hops_oracle(ids, edges, source):
    adj = {i: set() for i in ids}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in sorted(adj[u]):
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def floyd_warshall(ids, edges) -> np.ndarray:
    n = len(ids)
    index = {region_id: k for k, region_id in enumerate(ids)}
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for u, v in edges:
        dist[index[u], index[v]] = 1.0
        dist[index[v], index[u]] = 1.0
    for k in range(n):
        dist = np.minimum(dist, dist[:, k][:, None] + dist[k, :][None, :])
    return dist


def mean_pairwise_hops(ids, edges) -> float:
    """Mean hop distance over ordered pairs of the largest component."""
    comps = []
    seen = set()
    for region_id in ids:
        if region_id in seen:
            continue
        reach = bfs_hops_oracle(ids, edges, region_id)
        seen.update(reach)
        comps.append(list(reach))
    largest = max(comps, key=len)
    total, count = 0, 0
    for u in largest:
        reach = bfs_hops_oracle(ids, edges, u)
        for v in largest:
            if v != u:
                total += reach[v]
                count += 1
    return total / count


# -- statistics ------------------------------------------------------------------


def moran_direct(values, ids, edges) -> float:
    """Moran's I evaluated directly from the formula with explicit loops."""
    n = len(ids)
    index = {region_id: k for k, region_id in enumerate(ids)}
    w = [[0.0] * n for _ in range(n)]
    for u, v in edges:
        w[index[u]][index[v]] = 1.0
        w[index[v]][index[u]] = 1.0
    for row in w:
        s = sum(row)
        if s > 0:
            for k in range(n):
                row[k] /= s
    x = [float(v) for v in values]
    mean = sum(x) / n
    w_total = sum(sum(row) for row in w)
    if w_total == 0:
        return 0.0
    numer = fsum(
        w[i][j] * (x[i] - mean) * (x[j] - mean)
        for i in range(n)
        for j in range(n)
    )
    denom = fsum((xi - mean) ** 2 for xi in x)
    if denom == 0:
        return 0.0
    return (n / w_total) * numer / denom


def zscore_direct(values):
    """Population standardization of a flat value list."""
    values = [float(v) for v in values]
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    sigma = math.sqrt(var)
    if sigma == 0:
        return [0.0] * n
    return [(v - mean) / sigma for v in values]


# -- dendrogram leaf orders ---------------------------------------------------------


def enumerate_leaf_orders(merges, n_leaves):
    """All 2^(N-1) flip-consistent leaf sequences of a merge tree."""
    children = {n_leaves + s: pair for s, pair in enumerate(merges)}

    def expand(node):
        if node not in children:
            return [(node,)]
        a, b = children[node]
        out = []
        for left in expand(a):
            for right in expand(b):
                out.append(left + right)
                out.append(right + left)
        return out

    return expand(n_leaves + len(merges) - 1)


def sequence_cost(sequence, ids, dist) -> float:
    index = {region_id: k for k, region_id in enumerate(ids)}
    return fsum(
        dist[index[sequence[k]], index[sequence[k + 1]]]
        for k in range(len(sequence) - 1)
    )


# -- space-filling curves -------------------------------------------------------------


def morton_index(x: int, y: int) -> int:
    """Bit-interleave oracle: x occupies the even bits, y the odd bits."""
    out = 0
    for b in range(16):
        out |= ((x >> b) & 1) << (2 * b)
        out |= ((y >> b) & 1) << (2 * b + 1)
    return out

"""1D orderings of regions for dense-pixel rows.

Two routes produce an :class:`Ordering`:

* agglomerative hierarchical clustering (Ward linkage) over a mixed distance
  that blends standardized geographic and time-series distances with a weight
  ``alpha``, followed by optimal leaf ordering of the dendrogram;
* baseline space-filling curves (hilbert, morton, diagonal) on regular grids.

Both are deterministic: equal merge costs and equal leaf-order costs are
broken toward the lexicographically smaller id sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .geodata import RegionSet, TimeSeriesMatrix
from .validation import check_alpha, check_extent, check_same_ids

LINKAGES = ("ward",)
CURVES = ("hilbert", "morton", "diagonal")


@dataclass(frozen=True)
class MixParams:
    """Distance-mixing parameters: weight ``alpha`` and temporal reference extent."""

    alpha: float = 0.5
    extent: tuple[int, int] | None = None

    def __post_init__(self):
        check_alpha(self.alpha)
        if self.extent is not None:
            start, end = self.extent
            if not 0 <= start <= end:
                raise ValueError(f"invalid extent {self.extent}")


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric pairwise dissimilarities over an ordered id list."""

    ids: tuple[str, ...]
    d: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.d, dtype=float)
        n = len(self.ids)
        if d.shape != (n, n):
            raise ValueError(f"distance matrix shape {d.shape} != ({n}, {n})")
        if not np.all(np.isfinite(d)):
            raise ValueError("distance matrix contains non-finite entries")
        if not np.array_equal(d, d.T):
            raise ValueError("distance matrix is not symmetric")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)

    @property
    def n(self) -> int:
        return len(self.ids)


@dataclass(frozen=True)
class Ordering:
    """A permutation of region ids with the parameters that produced it."""

    sequence: tuple[str, ...]
    provenance: Mapping[str, object] = field(default_factory=dict)

    @cached_property
    def positions(self) -> dict[str, int]:
        return {region_id: i for i, region_id in enumerate(self.sequence)}

    def to_dict(self) -> dict:
        return {"sequence": list(self.sequence), "provenance": dict(self.provenance)}


# -- pairwise distances --------------------------------------------------------


def pairwise_geo(rs: RegionSet) -> DistanceMatrix:
    """Euclidean distances between region centroids."""
    if len(rs) < 2:
        raise ValueError("need at least 2 regions for pairwise distances")
    pts = rs.centroids()
    dx = pts[:, 0][:, None] - pts[:, 0][None, :]
    dy = pts[:, 1][:, None] - pts[:, 1][None, :]
    d = np.hypot(dx, dy)
    return DistanceMatrix(rs.ids, _mirror_upper(d))


def pairwise_ts(ts: TimeSeriesMatrix, extent: tuple[int, int] | None = None) -> DistanceMatrix:
    """Euclidean distances between value rows, restricted to the extent columns."""
    extent = check_extent(extent, ts.n_steps)
    return DistanceMatrix(ts.region_ids, _row_distances(ts.values, extent))


def _row_distances(values: np.ndarray, extent: tuple[int, int] | None) -> np.ndarray:
    x = values if extent is None else values[:, extent[0]:extent[1] + 1]
    gram = x @ x.T
    sq = np.diag(gram)
    d2 = sq[:, None] + sq[None, :] - 2.0 * gram
    np.maximum(d2, 0.0, out=d2)
    return _mirror_upper(np.sqrt(d2))


def _mirror_upper(d: np.ndarray) -> np.ndarray:
    """Exact symmetry and zero diagonal from the upper triangle."""
    upper = np.triu(d, 1)
    return upper + upper.T


def zscore_offdiag(d: np.ndarray) -> np.ndarray:
    """Standardize by mean and population sigma of the upper-triangle entries.

    A zero sigma (all pairwise distances equal) maps every entry to 0, so a
    degenerate distance set contributes nothing to the mix.
    """
    values = d[np.triu_indices(d.shape[0], 1)]
    sigma = values.std()
    if sigma == 0.0:
        return np.zeros_like(d)
    return (d - values.mean()) / sigma


def mix_distances(geo: DistanceMatrix, ts: DistanceMatrix, alpha: float) -> DistanceMatrix:
    """Blend standardized geographic and time-series distances.

    ``mixed = (1 - alpha) * z(geo) + alpha * z(ts)`` entry-wise, with mean and
    population sigma taken over the upper-triangle pairs of each matrix.
    Entries may be negative; the diagonal is forced to the off-diagonal
    minimum so it stays the smallest self-distance after any later shift.
    """
    alpha = check_alpha(alpha)
    check_same_ids(geo.ids, ts.ids, "distance matrices")
    n = geo.n
    if n < 3:
        raise ValueError("mixing requires at least 3 regions")
    mixed = (1.0 - alpha) * zscore_offdiag(geo.d) + alpha * zscore_offdiag(ts.d)
    mixed = np.ascontiguousarray(mixed)
    off_min = mixed[np.triu_indices(n, 1)].min()
    np.fill_diagonal(mixed, off_min)
    return DistanceMatrix(geo.ids, mixed)


# -- agglomerative clustering ordering ------------------------------------------


def ahc_order(d: DistanceMatrix, linkage: str = "ward",
              alpha: float | None = None,
              extent: tuple[int, int] | None = None) -> Ordering:
    """Order regions by the leaves of a Ward dendrogram, optimally flipped.

    Off-diagonal dissimilarities are first shifted by their global minimum so
    they are non-negative (a monotone transform that preserves every merge
    decision). The Ward tree is built with the Lance-Williams update applied
    directly to the given dissimilarities, and the leaf order minimizing the
    sum of consecutive dissimilarities over all dendrogram-consistent flips
    is selected by exact dynamic programming.

    ``alpha`` and ``extent`` are recorded in the provenance only.
    """
    if linkage not in LINKAGES:
        raise ValueError(f"unsupported linkage {linkage!r}")
    provenance = {"method": "ahc", "linkage": linkage, "alpha": alpha,
                  "extent": list(extent) if extent is not None else None}
    ids = d.ids
    n = len(ids)
    if n == 1:
        return Ordering(ids, provenance)

    work = np.array(d.d, dtype=float)
    off = ~np.eye(n, dtype=bool)
    off_values = work[off]
    work[off] = off_values - off_values.min()
    np.fill_diagonal(work, 0.0)

    if off_values.max() == off_values.min():
        # every arrangement has equal cost: the tie-break rule alone decides
        return Ordering(tuple(sorted(ids)), provenance)

    merges = _ward_merges(work, ids)
    sequence = _optimal_leaf_sequence(work, merges, ids)
    return Ordering(sequence, provenance)


def _ward_merges(dist: np.ndarray, ids: tuple[str, ...]) -> list[tuple[int, int]]:
    """Lance-Williams Ward merge tree over a non-negative dissimilarity matrix.

    Returns (left, right) child node indices per merge; leaves are 0..n-1 and
    merge ``s`` creates node ``n + s``. Equal merge costs prefer the pair
    whose (smallest-leaf-id, smallest-leaf-id) key is lexicographically least.
    """
    n = len(ids)
    total = 2 * n - 1
    big = np.full((total, total), np.inf)
    big[:n, :n] = dist
    np.fill_diagonal(big, np.inf)
    size = np.ones(total)
    key: list[str | None] = list(ids) + [None] * (n - 1)
    active = list(range(n))
    merges: list[tuple[int, int]] = []

    for step in range(n - 1):
        sub = big[np.ix_(active, active)]
        lowest = sub.min()
        best: tuple[tuple[str, str], int, int] | None = None
        for pi, pj in np.argwhere(sub == lowest):
            if pi >= pj:
                continue
            i, j = active[pi], active[pj]
            ki, kj = key[i], key[j]
            pair_key = (ki, kj) if ki < kj else (kj, ki)
            if best is None or pair_key < best[0]:
                best = (pair_key, i, j)
        assert best is not None
        _, i, j = best
        if key[j] < key[i]:
            i, j = j, i

        new = n + step
        active.remove(i)
        active.remove(j)
        others = np.array(active, dtype=int)
        if others.size:
            ni, nj, nc = size[i], size[j], size[others]
            big[new, others] = (
                (ni + nc) * big[i, others]
                + (nj + nc) * big[j, others]
                - nc * big[i, j]
            ) / (ni + nj + nc)
            big[others, new] = big[new, others]
        size[new] = size[i] + size[j]
        key[new] = key[i]
        active.append(new)
        merges.append((i, j))
    return merges


class _LeafOrderDP:
    """Exact optimal-leaf-ordering DP over a fixed merge tree.

    ``M[v][i, j]`` is the minimal sum of consecutive dissimilarities over all
    flip-consistent arrangements of node ``v``'s leaves that start at leaf
    ``i`` and end at leaf ``j`` (``i`` and ``j`` in opposite children; the
    matrix is stored as the left-leaves x right-leaves block only).
    """

    def __init__(self, dist: np.ndarray, merges: list[tuple[int, int]], ids: tuple[str, ...]):
        self.dist = dist
        self.ids = ids
        n = len(ids)
        self.children: dict[int, tuple[int, int]] = {n + s: lr for s, lr in enumerate(merges)}
        self.leaves: list[list[int]] = [[i] for i in range(n)] + [[] for _ in range(n - 1)]
        self.blocks: list[np.ndarray | None] = [None] * (2 * n - 1)
        self.root = 2 * n - 2
        self._leafpos: dict[int, dict[int, int]] = {}
        self._memo: dict[tuple[int, int, int], tuple[int, ...]] = {}
        for s, (a, b) in enumerate(merges):
            v = n + s
            self.leaves[v] = self.leaves[a] + self.leaves[b]
            block_a = self._full(a)
            block_b = self._full(b)
            cross = dist[np.ix_(self.leaves[a], self.leaves[b])]
            self.blocks[v] = _minplus(block_a, _minplus(cross, block_b))

    def _full(self, v: int) -> np.ndarray:
        """Square endpoint-cost matrix of node v (inf where endpoints share a child)."""
        if v not in self.children:
            return np.zeros((1, 1))
        a, b = self.children[v]
        na, nb = len(self.leaves[a]), len(self.leaves[b])
        full = np.full((na + nb, na + nb), np.inf)
        block = self.blocks[v]
        full[:na, na:] = block
        full[na:, :na] = block.T
        return full

    def _row(self, v: int, leaf: int) -> np.ndarray:
        """Endpoint costs M[v][leaf, h] for every leaf h of v, in leaf order."""
        if v not in self.children:
            return np.zeros(1)
        a, b = self.children[v]
        na, nb = len(self.leaves[a]), len(self.leaves[b])
        out = np.full(na + nb, np.inf)
        block = self.blocks[v]
        if leaf in self._ensure_set(a):
            out[na:] = block[self._pos_in(a, leaf), :]
        else:
            out[:na] = block[:, self._pos_in(b, leaf)]
        return out

    def _ensure_set(self, v: int) -> dict[int, int]:
        if v not in self._leafpos:
            self._leafpos[v] = {leaf: k for k, leaf in enumerate(self.leaves[v])}
        return self._leafpos[v]

    def _pos_in(self, v: int, leaf: int) -> int:
        return self._ensure_set(v)[leaf]

    def best_sequence(self) -> tuple[str, ...]:
        root_block = self.blocks[self.root]
        target = root_block.min()
        a, b = self.children[self.root]
        candidates = []
        for pi, pj in np.argwhere(root_block == target):
            i, j = self.leaves[a][pi], self.leaves[b][pj]
            candidates.append((i, j))
            candidates.append((j, i))  # the mirrored arrangement costs the same
        sequences = [self._materialize(self.root, i, j) for i, j in candidates]
        best = min(sequences, key=lambda seq: tuple(self.ids[k] for k in seq))
        return tuple(self.ids[k] for k in best)

    def _materialize(self, v: int, i: int, j: int) -> tuple[int, ...]:
        """Lex-smallest optimal arrangement of node v from leaf i to leaf j."""
        memo = self._memo
        stack: list[tuple[int, int, int]] = [(v, i, j)]
        while stack:
            node, left, right = stack[-1]
            state = (node, left, right)
            if state in memo:
                stack.pop()
                continue
            if node not in self.children:
                memo[state] = (left,)
                stack.pop()
                continue
            a, b = self.children[node]
            if left not in self._ensure_set(a):
                a, b = b, a
            row_a = self._row(a, left)
            row_b = self._row(b, right)
            cross = self.dist[np.ix_(self.leaves[a], self.leaves[b])]
            costs = row_a[:, None] + cross + row_b[None, :]
            lowest = costs.min()
            splits = [
                (self.leaves[a][pi], self.leaves[b][pj])
                for pi, pj in np.argwhere(costs == lowest)
            ]
            pending = []
            for h, k in splits:
                if (a, left, h) not in memo:
                    pending.append((a, left, h))
                if (b, k, right) not in memo:
                    pending.append((b, k, right))
            if pending:
                stack.extend(pending)
                continue
            combined = [memo[(a, left, h)] + memo[(b, k, right)] for h, k in splits]
            memo[state] = min(
                combined, key=lambda seq: tuple(self.ids[x] for x in seq)
            )
            stack.pop()
        return memo[(v, i, j)]


def _minplus(a: np.ndarray, b: np.ndarray, chunk: int = 64) -> np.ndarray:
    """Min-plus matrix product, row-chunked to bound temporaries."""
    out = np.empty((a.shape[0], b.shape[1]))
    for start in range(0, a.shape[0], chunk):
        stop = start + chunk
        out[start:stop] = (a[start:stop, :, None] + b[None, :, :]).min(axis=1)
    return out


def _optimal_leaf_sequence(dist: np.ndarray, merges: list[tuple[int, int]],
                           ids: tuple[str, ...]) -> tuple[str, ...]:
    return _LeafOrderDP(dist, merges, ids).best_sequence()


# -- space-filling curves --------------------------------------------------------


def _morton_xy(index: int) -> tuple[int, int]:
    x = y = 0
    bit = 0
    while index >> (2 * bit):
        bit += 1
    for b in range(bit + 1):
        x |= ((index >> (2 * b)) & 1) << b
        y |= ((index >> (2 * b + 1)) & 1) << b
    return x, y


def _hilbert_xy(n: int, index: int) -> tuple[int, int]:
    # first step ascends in y, so column neighbors stay adjacent in the order
    t, x, y = index, 0, 0
    s = 1
    while s < n:
        rx = 1 & (t // 2)
        ry = 1 & (t ^ rx)
        if ry == 0:
            if rx == 1:
                x, y = s - 1 - x, s - 1 - y
            x, y = y, x
        x += s * rx
        y += s * ry
        t //= 4
        s *= 2
    return y, x


def _diagonal_cells(width: int, height: int):
    # anti-diagonals x + y = k for ascending k, each swept with x ascending
    for k in range(width + height - 1):
        for x in range(max(0, k - height + 1), min(width - 1, k) + 1):
            yield x, k - x


def sfc_order(rs: RegionSet, curve: str) -> Ordering:
    """Order a synthetic grid along a space-filling curve."""
    if curve not in CURVES:
        raise ValueError(f"unknown curve {curve!r}; choose from {CURVES}")
    if rs.grid_dims is None:
        raise ValueError("space-filling curves need a region set with grid_dims")
    width, height = rs.grid_dims
    if curve in ("hilbert", "morton"):
        if width != height or width & (width - 1) != 0:
            raise ValueError(
                f"{curve} needs a square power-of-two grid, got {width}x{height}"
            )
        if curve == "hilbert":
            cells = [_hilbert_xy(width, d) for d in range(width * height)]
        else:
            cells = [_morton_xy(d) for d in range(width * height)]
    else:
        cells = list(_diagonal_cells(width, height))
    sequence = tuple(f"{x}_{y}" for x, y in cells)
    known = set(rs.ids)
    if set(sequence) != known:
        raise ValueError("grid_dims do not match the region ids")
    return Ordering(sequence, {"method": "sfc", "curve": curve})


# -- sklearn-style estimators ------------------------------------------------------


class ClusterOrdering(BaseEstimator, TransformerMixin):
    """Orders regions by Ward clustering of the alpha-weighted mixed distance.

    The region geometry is a structural parameter (like ``connectivity`` on
    sklearn's agglomerative clustering); ``X`` is the N x T value matrix whose
    rows get reordered.

    Parameters
    ----------
    regions : RegionSet
        Polygon geometry; row k of ``X`` belongs to ``regions.ids[k]``.
    alpha : float in [0, 1]
        0 orders purely by geography, 1 purely by time-series similarity.
    extent : (start, end) or None
        Inclusive timestep window for the time-series distance.
    linkage : str
        Clustering linkage; only ``"ward"`` is supported.

    Attributes
    ----------
    ordering_ : Ordering
    sequence_ : tuple of region ids
    mixed_ : DistanceMatrix used for clustering
    """

    def __init__(self, regions: RegionSet | None = None, alpha: float = 0.5,
                 extent: tuple[int, int] | None = None, linkage: str = "ward"):
        self.regions = regions
        self.alpha = alpha
        self.extent = extent
        self.linkage = linkage

    def fit(self, X, y=None):
        regions = self._check_regions(X)
        alpha = check_alpha(self.alpha)
        values = X.values if isinstance(X, TimeSeriesMatrix) else np.asarray(X, dtype=float)
        extent = check_extent(self.extent, values.shape[1])
        geo = pairwise_geo(regions)
        tsd = DistanceMatrix(regions.ids, _row_distances(values, extent))
        self.mixed_ = mix_distances(geo, tsd, alpha)
        self.ordering_ = ahc_order(self.mixed_, linkage=self.linkage,
                                   alpha=alpha, extent=extent)
        self.sequence_ = self.ordering_.sequence
        return self

    def transform(self, X):
        return _reorder_rows(X, self.regions.ids, self.ordering_)

    def _check_regions(self, X) -> RegionSet:
        if self.regions is None:
            raise ValueError("regions must be set before fitting")
        ids = X.region_ids if isinstance(X, TimeSeriesMatrix) else None
        if ids is not None and tuple(ids) != self.regions.ids:
            raise ValueError("X region ids do not match the configured regions")
        return self.regions


class SpaceFillingOrdering(BaseEstimator, TransformerMixin):
    """Orders a synthetic grid along a named space-filling curve."""

    def __init__(self, regions: RegionSet | None = None, curve: str = "hilbert"):
        self.regions = regions
        self.curve = curve

    def fit(self, X=None, y=None):
        if self.regions is None:
            raise ValueError("regions must be set before fitting")
        self.ordering_ = sfc_order(self.regions, self.curve)
        self.sequence_ = self.ordering_.sequence
        return self

    def transform(self, X):
        return _reorder_rows(X, self.regions.ids, self.ordering_)


def _reorder_rows(X, region_ids: tuple[str, ...], ordering: Ordering):
    index = {region_id: i for i, region_id in enumerate(region_ids)}
    rows = [index[region_id] for region_id in ordering.sequence]
    if isinstance(X, TimeSeriesMatrix):
        return TimeSeriesMatrix(
            ordering.sequence,
            X.timestamps,
            X.values[rows],
            unit=X.unit,
        )
    X = np.asarray(X)
    if X.shape[0] != len(region_ids):
        raise ValueError("row count does not match the fitted region ids")
    return X[rows]

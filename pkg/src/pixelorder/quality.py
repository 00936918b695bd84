"""Neighborhood-preservation measures that drive the visual boostings.

Given an ordering and the contiguity graph, this module quantifies the two
linearization artifacts plus the per-timestep spatial structure:

* trust gaps: consecutive ordering neighbors that are more than ``beta``
  contiguity hops apart (the mask drives hatched separators);
* discontinuity borders: contiguous region pairs that sit far apart in the
  ordering (the weights drive map halo strokes);
* global Moran's I per timestep (drives temporal width distortion).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .geodata import ContiguityGraph, TimeSeriesMatrix
from .ordering import Ordering
from .validation import check_beta

#: Hop-distance sentinel for region pairs in different graph components.
DISCONNECTED = -1


@dataclass(frozen=True)
class GapMask:
    """Per consecutive ordering pair: raw hop distance and gap flag.

    ``hop_distances[k]`` is the shortest-path hop count between the k-th and
    (k+1)-th region of the ordering (``DISCONNECTED`` when there is no path);
    ``epsilon[k]`` flags a trust violation: hops > beta, or disconnected.
    Keeping the raw distances lets callers re-threshold beta without
    recomputing any shortest path.
    """

    epsilon: tuple[bool, ...]
    hop_distances: tuple[int, ...]
    beta: int

    def __post_init__(self):
        if len(self.epsilon) != len(self.hop_distances):
            raise ValueError("epsilon and hop_distances lengths differ")

    def rethreshold(self, beta: int) -> "GapMask":
        """Same pairs, new beta; O(N) using the stored hop distances."""
        beta = check_beta(beta)
        eps = tuple(h == DISCONNECTED or h > beta for h in self.hop_distances)
        return GapMask(eps, self.hop_distances, beta)

    @property
    def gap_count(self) -> int:
        return sum(self.epsilon)


@dataclass(frozen=True)
class BorderWeights:
    """Ordering distance for every contiguity edge, keyed by sorted id pair."""

    entries: dict[tuple[str, str], int]
    n: int


@dataclass(frozen=True)
class MoranProfile:
    """Global Moran's I per timestep, raw and min-max normalized to [0, 1]."""

    raw_i: tuple[float, ...]
    normalized: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.raw_i)


def _bfs_hops(g: ContiguityGraph, source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    adj = g.neighbors
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def hop_distance(g: ContiguityGraph, u: str, v: str) -> int:
    """Shortest-path hop count between two regions (``DISCONNECTED`` if none)."""
    if u not in g.neighbors or v not in g.neighbors:
        raise ValueError(f"unknown region id in ({u!r}, {v!r})")
    if u == v:
        return 0
    return _bfs_hops(g, u).get(v, DISCONNECTED)


def trust_gaps(ordering: Ordering, g: ContiguityGraph, beta: int) -> GapMask:
    """Flag consecutive ordering pairs whose hop distance exceeds ``beta``.

    The inequality is strict; pairs in different components always violate.
    """
    beta = check_beta(beta)
    if set(ordering.sequence) != set(g.ids):
        raise ValueError("ordering ids do not match graph ids")
    hops = []
    seq = ordering.sequence
    cache: dict[str, dict[str, int]] = {}
    for a, b in zip(seq, seq[1:]):
        if a not in cache:
            cache[a] = _bfs_hops(g, a)
        hops.append(cache[a].get(b, DISCONNECTED))
    eps = tuple(h == DISCONNECTED or h > beta for h in hops)
    return GapMask(eps, tuple(hops), beta)


def discontinuity_borders(ordering: Ordering, g: ContiguityGraph) -> BorderWeights:
    """Ordering distance |rank(u) - rank(v)| for every contiguity edge."""
    if set(ordering.sequence) != set(g.ids):
        raise ValueError("ordering ids do not match graph ids")
    pos = ordering.positions
    entries = {
        edge: abs(pos[edge[0]] - pos[edge[1]])
        for edge in sorted(g.edges)
    }
    return BorderWeights(entries, len(g.ids))


def _weight_matrix(g: ContiguityGraph) -> np.ndarray:
    """Row-standardized binary contiguity weights (zero rows for isolates)."""
    index = {region_id: i for i, region_id in enumerate(g.ids)}
    w = np.zeros((g.n, g.n))
    for u, v in g.edges:
        w[index[u], index[v]] = 1.0
        w[index[v], index[u]] = 1.0
    row_sums = w.sum(axis=1, keepdims=True)
    np.divide(w, row_sums, out=w, where=row_sums > 0)
    return w


def morans_i(values, g: ContiguityGraph) -> float:
    """Global Moran's I with row-standardized contiguity weights.

    ``I = (N / W) * sum_ij w_ij (x_i - mean)(x_j - mean) / sum_i (x_i - mean)^2``
    where ``W`` is the total weight. A constant field has zero variance and
    returns 0 by definition.
    """
    x = np.asarray(values, dtype=float)
    if x.shape != (g.n,):
        raise ValueError(f"expected {g.n} values, got shape {x.shape}")
    if g.n < 2:
        raise ValueError("Moran's I needs at least 2 regions")
    w = _weight_matrix(g)
    w_total = w.sum()
    if w_total == 0.0:
        return 0.0
    centered = x - x.mean()
    denom = float(centered @ centered)
    if denom == 0.0:
        return 0.0
    return float((g.n / w_total) * (centered @ (w @ centered)) / denom)


def moran_profile(ts: TimeSeriesMatrix, g: ContiguityGraph) -> MoranProfile:
    """Moran's I at every timestep plus its min-max normalization.

    A flat profile (all timesteps equal) normalizes to 0.5 everywhere.
    """
    if tuple(ts.region_ids) != tuple(g.ids):
        raise ValueError("time series region ids do not match graph ids")
    if g.n < 2:
        raise ValueError("Moran's I needs at least 2 regions")
    w = _weight_matrix(g)
    w_total = w.sum()
    centered = ts.values - ts.values.mean(axis=0, keepdims=True)
    denom = (centered * centered).sum(axis=0)
    if w_total == 0.0:
        raw = np.zeros(ts.n_steps)
    else:
        numer = (centered * (w @ centered)).sum(axis=0)
        raw = np.zeros(ts.n_steps)
        np.divide((g.n / w_total) * numer, denom, out=raw, where=denom > 0)
    lo, hi = raw.min(), raw.max()
    if hi == lo:
        normalized = np.full(ts.n_steps, 0.5)
    else:
        normalized = (raw - lo) / (hi - lo)
    return MoranProfile(tuple(float(v) for v in raw),
                        tuple(float(v) for v in normalized))


def default_beta(g: ContiguityGraph) -> int:
    """Heuristic gap threshold: average hop distance between region pairs.

    Computed on the largest connected component, rounded half-up, and
    clamped to at least 1.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    if g.n == 1:
        return 1
    seen: set[str] = set()
    components: list[list[str]] = []
    for region_id in g.ids:
        if region_id in seen:
            continue
        dist = _bfs_hops(g, region_id)
        members = list(dist)
        seen.update(members)
        components.append(members)
    largest = max(components, key=len)
    if len(largest) < 2:
        return 1
    total = 0
    count = 0
    for region_id in largest:
        dist = _bfs_hops(g, region_id)
        total += sum(dist.values())
        count += len(dist) - 1
    mean = total / count
    return max(1, int(np.floor(mean + 0.5)))


@dataclass(frozen=True)
class QualityReport:
    """Bundle of every quality measure for one ordering of one dataset."""

    beta: int
    gaps: GapMask
    borders: BorderWeights
    moran: MoranProfile

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "gaps": list(self.gaps.epsilon),
            "hops": list(self.gaps.hop_distances),
            "borders": [
                {"u": u, "v": v, "w": w}
                for (u, v), w in sorted(self.borders.entries.items())
            ],
            "moran": {
                "raw": list(self.moran.raw_i),
                "normalized": list(self.moran.normalized),
            },
        }


def quality_report(ordering: Ordering, g: ContiguityGraph,
                   ts: TimeSeriesMatrix, beta: int) -> QualityReport:
    """Compute gaps, borders, and the Moran profile in one pass."""
    return QualityReport(
        beta=check_beta(beta),
        gaps=trust_gaps(ordering, g, beta),
        borders=discontinuity_borders(ordering, g),
        moran=moran_profile(ts, g),
    )

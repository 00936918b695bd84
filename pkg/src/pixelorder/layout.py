"""Assembly of the boosted dense-pixel layout and its companion views.

The layout orders rows by the 1D ordering, distorts column widths by the
normalized Moran profile, inserts hatched gap bands after trust violations,
and maps values on a single global color domain. Companion builders produce
the brushed map-glyph aggregates, the ordering path polyline, and the halo
stroke widths for discontinuity borders.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geodata import RegionSet, TimeSeriesMatrix
from .ordering import Ordering
from .quality import BorderWeights, GapMask, MoranProfile

STATS = ("min", "mean", "max")


@dataclass(frozen=True)
class LayoutConfig:
    total_width: float = 960.0
    min_width_frac: float = 0.25
    max_tick_height: float = 24.0
    row_height: float = 8.0
    gap_band_rows: float = 1.5  # hatched separator height, in pixel rows
    halo_min_stroke: float = 0.5
    halo_max_stroke: float = 4.0


@dataclass(frozen=True)
class PixelLayout:
    """Everything a client needs to draw the dense-pixel view."""

    row_order: tuple[str, ...]
    gap_after_row: tuple[bool, ...]
    column_widths: tuple[float, ...]
    color_domain: tuple[float, float]
    cells: np.ndarray
    timestamps: tuple[str, ...]

    def to_dict(self, resolve: bool = False) -> dict:
        from .colors import resolve_colors

        out = {
            "row_order": list(self.row_order),
            "gaps": list(self.gap_after_row),
            "widths": list(self.column_widths),
            "color_domain": list(self.color_domain),
            "cells": [[float(v) for v in row] for row in self.cells],
            "timestamps": list(self.timestamps),
        }
        if resolve:
            out["colors"] = resolve_colors(self.cells, self.color_domain)
        return out


@dataclass(frozen=True)
class Brush:
    """A row/time selection over the layout, with an aggregate statistic."""

    row_range: tuple[int, int]
    time_range: tuple[int, int]
    stat: str = "mean"

    def __post_init__(self):
        if self.stat not in STATS:
            raise ValueError(f"stat must be one of {STATS}, got {self.stat!r}")
        for first, last in (self.row_range, self.time_range):
            if first > last or first < 0:
                raise ValueError("brush ranges must satisfy 0 <= first <= last")


@dataclass(frozen=True)
class GlyphData:
    """Aggregates and halo strokes for the brushed selection."""

    ids: tuple[str, ...]
    values: dict[str, float]
    color_domain: tuple[float, float]
    stat: str
    strokes: dict[tuple[str, str], float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "ids": list(self.ids),
            "values": {k: self.values[k] for k in self.ids},
            "color_domain": list(self.color_domain),
            "stat": self.stat,
            "strokes": [
                {"u": u, "v": v, "width": w}
                for (u, v), w in sorted(self.strokes.items())
            ],
        }


@dataclass(frozen=True)
class PathData:
    """The ordering traversal through region centroids, hatched at gaps."""

    ids: tuple[str, ...]
    points: tuple[tuple[float, float], ...]
    hatched: tuple[bool, ...]
    positions: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "ids": list(self.ids),
            "points": [list(p) for p in self.points],
            "hatched": list(self.hatched),
            "positions": {k: self.positions[k] for k in self.ids},
        }


def column_widths(profile: MoranProfile, total: float, min_frac: float) -> tuple[float, ...]:
    """Distort column widths by the normalized Moran profile.

    ``width_t = w_min + normalized_t * slack_unit`` with
    ``w_min = min_frac * total / T`` and the slack chosen so the widths sum
    to ``total`` exactly. Widths are order-isomorphic to the profile.
    """
    if total <= 0:
        raise ValueError("total width must be positive")
    if not 0 < min_frac < 1:
        raise ValueError("min_frac must be in (0, 1) so the minimum widths fit")
    normalized = np.asarray(profile.normalized, dtype=float)
    t = normalized.size
    w_min = min_frac * total / t
    weight_sum = normalized.sum()
    if weight_sum == 0.0:
        return tuple(np.full(t, total / t))
    with np.errstate(over="ignore"):
        slack_unit = (total - t * w_min) / weight_sum
    if not np.isfinite(slack_unit):  # subnormal weight sums overflow the division
        return tuple(np.full(t, total / t))
    return tuple(w_min + normalized * slack_unit)


def tick_profile(widths, max_height: float = 24.0) -> tuple[float, ...]:
    """Timeline tick heights, linearly proportional to the column widths."""
    widths = np.asarray(widths, dtype=float)
    if np.any(widths <= 0):
        raise ValueError("widths must be positive")
    return tuple(widths * (max_height / widths.max()))


def build_layout(ts: TimeSeriesMatrix, ordering: Ordering, gaps: GapMask,
                 profile: MoranProfile, config: LayoutConfig = LayoutConfig()) -> PixelLayout:
    """Assemble the dense-pixel layout: ordered rows, gap bands, distorted widths."""
    n, t = ts.n_regions, ts.n_steps
    if set(ordering.sequence) != set(ts.region_ids):
        raise ValueError("ordering ids do not match time series ids")
    if len(gaps.epsilon) != n - 1:
        raise ValueError(f"gap mask has {len(gaps.epsilon)} entries, expected {n - 1}")
    if len(profile) != t:
        raise ValueError(f"Moran profile has {len(profile)} steps, expected {t}")
    index = {region_id: i for i, region_id in enumerate(ts.region_ids)}
    rows = [index[region_id] for region_id in ordering.sequence]
    cells = ts.values[rows]
    domain = (float(ts.values.min()), float(ts.values.max()))
    widths = column_widths(profile, config.total_width, config.min_width_frac)
    return PixelLayout(
        row_order=ordering.sequence,
        gap_after_row=tuple(gaps.epsilon) + (False,),
        column_widths=widths,
        color_domain=domain,
        cells=cells,
        timestamps=ts.timestamps,
    )


def aggregate_selection(brush: Brush, ts: TimeSeriesMatrix, ordering: Ordering,
                        borders: BorderWeights | None = None,
                        config: LayoutConfig = LayoutConfig()) -> GlyphData:
    """Aggregate the brushed row/time window per region for the map glyph.

    Halo strokes are attached for borders whose both endpoints are selected,
    when border weights are supplied.
    """
    n, t = ts.n_regions, ts.n_steps
    r0, r1 = brush.row_range
    c0, c1 = brush.time_range
    if r1 >= n or c1 >= t:
        raise ValueError("brush out of range")
    selected = ordering.sequence[r0:r1 + 1]
    index = {region_id: i for i, region_id in enumerate(ts.region_ids)}
    window = ts.values[[index[region_id] for region_id in selected], c0:c1 + 1]
    reducer = {"min": np.min, "mean": np.mean, "max": np.max}[brush.stat]
    aggregates = reducer(window, axis=1)
    values = {region_id: float(v) for region_id, v in zip(selected, aggregates)}
    strokes: dict[tuple[str, str], float] = {}
    if borders is not None:
        chosen = set(selected)
        widths = halo_strokes(borders, config.halo_min_stroke, config.halo_max_stroke)
        strokes = {
            edge: widths[edge]
            for edge in borders.entries
            if edge[0] in chosen and edge[1] in chosen
        }
    domain = (float(ts.values.min()), float(ts.values.max()))
    return GlyphData(tuple(selected), values, domain, brush.stat, strokes)


def ordering_path(ordering: Ordering, rs: RegionSet, gaps: GapMask) -> PathData:
    """Centroid polyline of the ordering; segments at trust gaps are hatched."""
    if set(ordering.sequence) != set(rs.ids):
        raise ValueError("ordering ids do not match region ids")
    if len(gaps.epsilon) != len(ordering.sequence) - 1:
        raise ValueError("gap mask length does not match the ordering")
    centroid = {region.id: region.centroid for region in rs.regions}
    points = tuple(centroid[region_id] for region_id in ordering.sequence)
    n = len(ordering.sequence)
    positions = {
        region_id: (i / (n - 1) if n > 1 else 0.0)
        for i, region_id in enumerate(ordering.sequence)
    }
    return PathData(ordering.sequence, points, tuple(gaps.epsilon), positions)


def halo_strokes(borders: BorderWeights, s_min: float = 0.5,
                 s_max: float = 4.0) -> dict[tuple[str, str], float]:
    """Linear stroke widths for border halos: weight 1 -> s_min, N-1 -> s_max."""
    n = borders.n
    if n < 3:
        return {edge: s_min for edge in borders.entries}
    span = s_max - s_min
    return {
        edge: s_min + span * (w - 1) / (n - 2)
        for edge, w in borders.entries.items()
    }

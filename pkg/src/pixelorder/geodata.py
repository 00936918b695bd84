"""Polygon geographies, contiguity graphs, and time series ingestion.

Regions are contiguous polygons in projected planar units. Each region gets
an area-weighted centroid at load time, and adjacency is derived from shared
boundaries (rook: shared segment of positive length; queen: any shared
boundary point). Regular unit grids can be synthesized for fixtures.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from datetime import datetime
from functools import cached_property

import numpy as np
from shapely.geometry import MultiLineString
from shapely.strtree import STRtree

from .validation import check_rule

Point = tuple[float, float]
Ring = tuple[Point, ...]
Part = tuple[Ring, ...]

QUEEN = "queen"
ROOK = "rook"

# Snap distance for coincident-but-not-identical boundary vertices,
# as a fraction of the dataset bounding-box diagonal.
DEFAULT_SNAP_FRACTION = 1e-9


class GeoDataError(ValueError):
    """Raised on malformed geographic or tabular input."""


@dataclass(frozen=True)
class Region:
    """One polygonal region: id, polygon parts (rings of vertices), centroid."""

    id: str
    parts: Part | tuple[Part, ...]
    centroid: Point

    @property
    def rings(self) -> tuple[Ring, ...]:
        return tuple(ring for part in self.parts for ring in part)


@dataclass(frozen=True)
class RegionSet:
    """An ordered collection of regions with optional synthetic-grid metadata."""

    regions: tuple[Region, ...]
    grid_dims: tuple[int, int] | None = None

    def __post_init__(self):
        seen = set()
        for region in self.regions:
            if not region.id:
                raise GeoDataError("region ids must be non-empty")
            if region.id in seen:
                raise GeoDataError(f"duplicate region id {region.id!r}")
            seen.add(region.id)
            for ring in region.rings:
                if len(set(ring)) < 3:
                    raise GeoDataError(
                        f"region {region.id!r} has a ring with fewer than 3 distinct vertices"
                    )

    def __len__(self) -> int:
        return len(self.regions)

    @cached_property
    def ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.regions)

    @cached_property
    def index(self) -> dict[str, int]:
        return {r.id: i for i, r in enumerate(self.regions)}

    def centroids(self) -> np.ndarray:
        out = np.array([r.centroid for r in self.regions], dtype=float)
        out.setflags(write=False)
        return out

    def bounds(self) -> tuple[float, float, float, float]:
        xs = [x for r in self.regions for ring in r.rings for x, _ in ring]
        ys = [y for r in self.regions for ring in r.rings for _, y in ring]
        return min(xs), min(ys), max(xs), max(ys)


@dataclass(frozen=True)
class ContiguityGraph:
    """Undirected adjacency over region ids under a queen or rook rule."""

    ids: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    rule: str

    def __post_init__(self):
        known = set(self.ids)
        for u, v in self.edges:
            if u == v:
                raise GeoDataError(f"self-loop on region {u!r}")
            if u not in known or v not in known:
                raise GeoDataError(f"edge ({u!r}, {v!r}) references unknown region")

    @property
    def n(self) -> int:
        return len(self.ids)

    @cached_property
    def neighbors(self) -> dict[str, tuple[str, ...]]:
        adj: dict[str, list[str]] = {i: [] for i in self.ids}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {i: tuple(sorted(nbrs)) for i, nbrs in adj.items()}


@dataclass(frozen=True)
class TimeSeriesMatrix:
    """N regions x T timesteps of finite scalar values with ISO timestamps."""

    region_ids: tuple[str, ...]
    timestamps: tuple[str, ...]
    values: np.ndarray
    unit: str = ""

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise GeoDataError("values must be a 2-D matrix")
        n, t = values.shape
        if n != len(self.region_ids) or t != len(self.timestamps):
            raise GeoDataError("values shape does not match region ids / timestamps")
        if n < 1 or t < 1:
            raise GeoDataError("need at least one region and one timestep")
        if not np.all(np.isfinite(values)):
            raise GeoDataError("non-finite value in time series")
        parsed = [_parse_timestamp(ts) for ts in self.timestamps]
        if any(b <= a for a, b in zip(parsed, parsed[1:])):
            raise GeoDataError("timestamps must be strictly increasing")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def n_regions(self) -> int:
        return self.values.shape[0]

    @property
    def n_steps(self) -> int:
        return self.values.shape[1]


def _parse_timestamp(text: str) -> datetime:
    try:
        return datetime.fromisoformat(text)
    except ValueError as exc:
        raise GeoDataError(f"timestamp {text!r} is not ISO-8601") from exc


# -- centroid geometry -------------------------------------------------------


def _ring_area_centroid(ring: Ring) -> tuple[float, float, float]:
    """Signed shoelace area and centroid of one ring (vertices not closed)."""
    area2 = 0.0
    cx = 0.0
    cy = 0.0
    n = len(ring)
    for k in range(n):
        x0, y0 = ring[k]
        x1, y1 = ring[(k + 1) % n]
        cross = x0 * y1 - x1 * y0
        area2 += cross
        cx += (x0 + x1) * cross
        cy += (y0 + y1) * cross
    if area2 == 0.0:
        mx = sum(x for x, _ in ring) / n
        my = sum(y for _, y in ring) / n
        return 0.0, mx, my
    return area2 / 2.0, cx / (3.0 * area2), cy / (3.0 * area2)


def _part_area_centroid(part: Part) -> tuple[float, Point]:
    """Area-weighted centroid of a polygon part; holes subtract from the exterior."""
    total = 0.0
    acc_x = 0.0
    acc_y = 0.0
    for k, ring in enumerate(part):
        area, cx, cy = _ring_area_centroid(ring)
        weight = abs(area) if k == 0 else -abs(area)
        total += weight
        acc_x += weight * cx
        acc_y += weight * cy
    if total <= 0.0:
        _, cx, cy = _ring_area_centroid(part[0])
        return 0.0, (cx, cy)
    return total, (acc_x / total, acc_y / total)


def _region_centroid(parts: tuple[Part, ...]) -> Point:
    best_area = -1.0
    best: Point = (0.0, 0.0)
    for part in parts:
        area, centroid = _part_area_centroid(part)
        if area > best_area:
            best_area, best = area, centroid
    return best


# -- GeoJSON ingestion --------------------------------------------------------


def _normalize_ring(coords) -> Ring:
    pts = [(float(x), float(y)) for x, y, *_ in coords]
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts = pts[:-1]
    return tuple(pts)


def _sinusoidal(ring: Ring) -> Ring:
    # equal-area projection for lon/lat input, degree units on the y axis
    return tuple((lon * math.cos(math.radians(lat)), lat) for lon, lat in ring)


def load_geojson(document: str | dict, id_property: str = "id",
                 project_lonlat: bool = False) -> RegionSet:
    """Parse a GeoJSON FeatureCollection of Polygon/MultiPolygon features.

    Region ids come from ``properties[id_property]``. MultiPolygon features
    keep every part for contiguity; the centroid is taken from the
    largest-area part. ``project_lonlat`` applies a sinusoidal equal-area
    projection at load time, so all downstream distances stay Euclidean.
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise GeoDataError(f"invalid GeoJSON: {exc}") from exc
    if document.get("type") != "FeatureCollection":
        raise GeoDataError("expected a GeoJSON FeatureCollection")

    regions = []
    for feature in document.get("features", []):
        props = feature.get("properties") or {}
        if id_property not in props or props[id_property] in (None, ""):
            raise GeoDataError(f"feature missing id property {id_property!r}")
        region_id = str(props[id_property])
        geometry = feature.get("geometry") or {}
        gtype = geometry.get("type")
        if gtype == "Polygon":
            raw_parts = [geometry["coordinates"]]
        elif gtype == "MultiPolygon":
            raw_parts = geometry["coordinates"]
        else:
            raise GeoDataError(
                f"feature {region_id!r} has non-areal geometry {gtype!r}"
            )
        parts = tuple(
            tuple(_normalize_ring(ring) for ring in part) for part in raw_parts
        )
        if project_lonlat:
            parts = tuple(tuple(_sinusoidal(ring) for ring in part) for part in parts)
        regions.append(Region(region_id, parts, _region_centroid(parts)))

    grid_dims = document.get("grid_dims")
    if grid_dims is not None:
        grid_dims = (int(grid_dims[0]), int(grid_dims[1]))
    return RegionSet(tuple(regions), grid_dims=grid_dims)


def region_set_to_geojson(rs: RegionSet, id_property: str = "id") -> dict:
    """Serialize back to a FeatureCollection; inverse of :func:`load_geojson`."""
    features = []
    for region in rs.regions:
        coords = [
            [[list(pt) for pt in ring] + [list(ring[0])] for ring in part]
            for part in region.parts
        ]
        if len(coords) == 1:
            geometry = {"type": "Polygon", "coordinates": coords[0]}
        else:
            geometry = {"type": "MultiPolygon", "coordinates": coords}
        features.append(
            {
                "type": "Feature",
                "properties": {id_property: region.id},
                "geometry": geometry,
            }
        )
    doc = {"type": "FeatureCollection", "features": features}
    if rs.grid_dims is not None:
        doc["grid_dims"] = list(rs.grid_dims)
    return doc


# -- contiguity ---------------------------------------------------------------


def _snap(value: float, tolerance: float) -> float:
    return round(value / tolerance) * tolerance if tolerance > 0 else value


def _boundary(region: Region, tolerance: float) -> MultiLineString:
    lines = []
    for ring in region.rings:
        closed = [(_snap(x, tolerance), _snap(y, tolerance)) for x, y in ring]
        closed.append(closed[0])
        lines.append(closed)
    return MultiLineString(lines)


def build_contiguity(rs: RegionSet, rule: str = QUEEN,
                     tolerance: float | None = None) -> ContiguityGraph:
    """Derive the adjacency graph of a region set.

    Rook joins regions sharing a boundary segment of positive length; queen
    additionally joins regions sharing only a point. Vertices are snapped to
    a ``tolerance`` grid first (default: 1e-9 of the bounding-box diagonal)
    so near-coincident boundary files still register as shared.
    """
    check_rule(rule)
    if len(rs) == 0:
        raise GeoDataError("empty region set")
    if tolerance is None:
        x0, y0, x1, y1 = rs.bounds()
        tolerance = DEFAULT_SNAP_FRACTION * math.hypot(x1 - x0, y1 - y0)
    elif tolerance < 0:
        raise GeoDataError("tolerance must be >= 0")

    boundaries = [_boundary(region, tolerance) for region in rs.regions]
    tree = STRtree(boundaries)
    edges = set()
    for i, boundary in enumerate(boundaries):
        for j in tree.query(boundary):
            j = int(j)
            if j <= i:
                continue
            shared = boundary.intersection(boundaries[j])
            if shared.is_empty:
                continue
            if rule == ROOK and shared.length == 0.0:
                continue
            u, v = rs.regions[i].id, rs.regions[j].id
            edges.add((u, v) if u < v else (v, u))
    return ContiguityGraph(rs.ids, frozenset(edges), rule)


# -- time series ingestion ----------------------------------------------------


def load_timeseries(table: str, rs: RegionSet, unit: str = "") -> TimeSeriesMatrix:
    """Parse a wide CSV (first column ``id``, remaining headers ISO timestamps).

    Every region of ``rs`` must appear exactly once; rows are re-aligned to
    the region-set order. Missing or non-finite values are hard errors.
    """
    reader = csv.reader(io.StringIO(table))
    try:
        header = next(reader)
    except StopIteration:
        raise GeoDataError("empty CSV") from None
    if not header or header[0].strip() != "id":
        raise GeoDataError("first CSV column must be 'id'")
    timestamps = tuple(h.strip() for h in header[1:])
    if not timestamps:
        raise GeoDataError("CSV has no timestamp columns")

    rows: dict[str, list[float]] = {}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        region_id = row[0].strip()
        if region_id not in rs.index:
            raise GeoDataError(f"unknown region id {region_id!r} (line {lineno})")
        if region_id in rows:
            raise GeoDataError(f"duplicate row for region {region_id!r}")
        if len(row) != len(timestamps) + 1:
            raise GeoDataError(f"row for {region_id!r} has {len(row) - 1} values, "
                               f"expected {len(timestamps)}")
        try:
            values = [float(cell) for cell in row[1:]]
        except ValueError as exc:
            raise GeoDataError(f"unparseable value for region {region_id!r}: {exc}") from exc
        if not all(math.isfinite(v) for v in values):
            raise GeoDataError(f"non-finite value for region {region_id!r}")
        rows[region_id] = values

    missing = [i for i in rs.ids if i not in rows]
    if missing:
        raise GeoDataError(f"missing rows for regions: {missing[:5]}")
    matrix = np.array([rows[i] for i in rs.ids], dtype=float)
    return TimeSeriesMatrix(rs.ids, timestamps, matrix, unit=unit)


def timeseries_to_csv(ts: TimeSeriesMatrix) -> str:
    """Wide-CSV serialization; inverse of :func:`load_timeseries`."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["id", *ts.timestamps])
    for region_id, row in zip(ts.region_ids, ts.values):
        writer.writerow([region_id, *(repr(float(v)) for v in row)])
    return out.getvalue()


# -- synthetic grids ----------------------------------------------------------


def grid_regions(width: int, height: int) -> RegionSet:
    """Unit-square grid fixture with ids ``x_y`` and centroids at cell centers."""
    if width < 1 or height < 1:
        raise GeoDataError("grid dimensions must be >= 1")
    regions = []
    for y in range(height):
        for x in range(width):
            ring = (
                (float(x), float(y)),
                (float(x + 1), float(y)),
                (float(x + 1), float(y + 1)),
                (float(x), float(y + 1)),
            )
            regions.append(Region(f"{x}_{y}", ((ring,),), (x + 0.5, y + 0.5)))
    return RegionSet(tuple(regions), grid_dims=(width, height))
